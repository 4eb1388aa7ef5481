// SPDX-License-Identifier: Apache-2.0

//! Noise spectrum read from a two-column `(ω, S)` table.

use std::path::Path;

use num_complex::Complex64;

use super::kk::{kk_response, KkSettings};
use super::PeakHint;
use crate::error::{Error, Result};

/// Linearly interpolated spectrum, zero outside the table. The real part of
/// the response is precomputed on the table nodes plus a logarithmic
/// extension, and falls off as `M₁/(2πω²)` beyond it.
#[derive(Debug, Clone)]
pub struct TabulatedBath {
    omega: Vec<f64>,
    spectrum: Vec<f64>,
    re_nodes: Vec<f64>,
    re_values: Vec<f64>,
    first_moment: f64,
}

const EXTENSION_DECADES: f64 = 3.0;
const EXTENSION_POINTS: usize = 60;
const MAX_NODES: usize = 1000;

impl TabulatedBath {
    pub fn from_points(omega: Vec<f64>, spectrum: Vec<f64>) -> Result<Self> {
        if omega.len() != spectrum.len() || omega.len() < 2 {
            return Err(Error::Tabulated("need at least two (ω, S) rows".into()));
        }
        if omega.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Tabulated(
                "frequencies must be strictly increasing".into(),
            ));
        }
        if let Some(s) = spectrum.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
            return Err(Error::Tabulated(format!(
                "spectrum values must be finite and >= 0, got {s}"
            )));
        }
        let mut bath = Self {
            omega,
            spectrum,
            re_nodes: Vec::new(),
            re_values: Vec::new(),
            first_moment: 0.0,
        };
        bath.precompute()?;
        Ok(bath)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut omega = Vec::new();
        let mut spectrum = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            if cols.len() != 2 {
                return Err(Error::Tabulated(format!(
                    "line {}: expected two columns",
                    n + 1
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Tabulated(format!("line {}: {e}", n + 1)))
            };
            omega.push(parse(cols[0])?);
            spectrum.push(parse(cols[1])?);
        }
        Self::from_points(omega, spectrum)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Tabulated(format!("{}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    fn span(&self) -> f64 {
        self.omega[0]
            .abs()
            .max(self.omega[self.omega.len() - 1].abs())
    }

    pub fn spectrum(&self, w: f64) -> f64 {
        interpolate(&self.omega, &self.spectrum, w).unwrap_or(0.0)
    }

    pub fn response(&self, w: f64) -> Complex64 {
        let a = w.abs();
        let last = *self.re_nodes.last().expect("precomputed");
        let re = if a > last {
            self.first_moment / (2.0 * std::f64::consts::PI * a * a)
        } else {
            interpolate(&self.re_nodes, &self.re_values, a).unwrap_or(0.0)
        };
        Complex64::new(re, -0.5 * (self.spectrum(w) - self.spectrum(-w)))
    }

    pub fn peaks(&self) -> Vec<PeakHint> {
        let (i, _) = self
            .spectrum
            .iter()
            .enumerate()
            .fold(
                (0, f64::MIN),
                |best, (i, s)| if *s > best.1 { (i, *s) } else { best },
            );
        let dw = (self.omega[self.len() - 1] - self.omega[0]) / self.len() as f64;
        vec![PeakHint {
            center: self.omega[i],
            width: dw.max(f64::MIN_POSITIVE),
        }]
    }

    fn precompute(&mut self) -> Result<()> {
        let span = self.span();
        let abs: Vec<f64> = self.omega.iter().map(|w| w.abs()).collect();
        let sample = |cap: usize| -> Vec<f64> {
            abs.iter()
                .step_by(abs.len().div_ceil(cap))
                .copied()
                .collect()
        };
        let mut nodes = sample(MAX_NODES);
        nodes.push(0.0);
        for i in 1..=EXTENSION_POINTS {
            nodes.push(span * 10f64.powf(EXTENSION_DECADES * i as f64 / EXTENSION_POINTS as f64));
        }
        // Re χ diverges logarithmically where the table truncates a nonzero
        // spectrum, so the edges themselves are left to interpolation
        let edges = [self.omega[0].abs(), self.omega[self.len() - 1].abs()];
        nodes.retain(|w| edges.iter().all(|e| (w - e).abs() > 1e-12 * span));
        nodes.sort_by(f64::total_cmp);
        nodes.dedup();

        // every table node is a kink of the interpolant
        let mut settings = KkSettings::new(abs.clone(), span);
        settings.rel_tol = 1e-7;
        let values = nodes
            .iter()
            .map(|&w| kk_response(|x| self.spectrum(x), w, &settings).map(|c| c.re))
            .collect::<Result<Vec<_>>>()?;

        // M₁ = ∫ x A(x) dx over the table, trapezoid-exact for piecewise-linear S
        let mut m1 = 0.0;
        for k in 0..self.len() - 1 {
            let (x0, x1) = (self.omega[k], self.omega[k + 1]);
            let (s0, s1) = (self.spectrum[k], self.spectrum[k + 1]);
            // ∫ x S(x) dx on a linear segment, times 2 because A(x) = S(x) - S(-x)
            let h = x1 - x0;
            m1 += 2.0 * h * (s0 * (2.0 * x0 + x1) + s1 * (x0 + 2.0 * x1)) / 6.0;
        }
        self.re_nodes = nodes;
        self.re_values = values;
        self.first_moment = m1;
        Ok(())
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    if x < xs[0] || x > xs[xs.len() - 1] {
        return None;
    }
    let i = xs.partition_point(|v| *v <= x).clamp(1, xs.len() - 1);
    let (x0, x1) = (xs[i - 1], xs[i]);
    let t = (x - x0) / (x1 - x0);
    Some(ys[i - 1] + t * (ys[i] - ys[i - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{cavity_response, cavity_spectrum, CavityParams};

    #[test]
    fn parses_and_interpolates() {
        let t = TabulatedBath::from_text("# ω S\n-1 0\n0 1.0\n1, 3.0\n\n2 0 # end\n").unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.spectrum(0.5), 2.0);
        assert_eq!(t.spectrum(5.0), 0.0);
        assert_eq!(t.spectrum(-2.0), 0.0);
        assert!((t.response(0.5).im + 0.5 * (2.0 - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(TabulatedBath::from_text("1 2\n").is_err());
        assert!(TabulatedBath::from_text("1 2\n0 1\n").is_err());
        assert!(TabulatedBath::from_text("0 1\n1 -1\n").is_err());
        assert!(TabulatedBath::from_text("0 1 2\n1 1 1\n").is_err());
        assert!(TabulatedBath::from_text("0 x\n1 1\n").is_err());
    }

    #[test]
    fn finely_tabulated_lorentzian_matches_closed_form() {
        let p = CavityParams::new(0.05, 0.2, -1.0, 0.7).unwrap();
        let n = 801;
        let omega: Vec<f64> = (0..n)
            .map(|i| -8.0 + 16.0 * i as f64 / (n - 1) as f64)
            .collect();
        let spectrum: Vec<f64> = omega.iter().map(|w| cavity_spectrum(*w, &p)).collect();
        let t = TabulatedBath::from_points(omega, spectrum).unwrap();
        let scale = cavity_response(1.0, &p).norm();
        for w in [0.0, 0.3, 0.9, 1.0, 1.1, 2.5] {
            let d = (t.response(w) - cavity_response(w, &p)).norm();
            // truncating the Lorentzian at |ω| = 8 shifts Re χ by O(κ/8²)
            assert!(d < 1e-2 * scale, "ω={w}: {d}");
        }
    }
}
