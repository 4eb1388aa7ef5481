// SPDX-License-Identifier: Apache-2.0

//! Response function rebuilt from a noise spectrum by a Kramers–Kronig
//! transform.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, panels_between, Panel};

#[derive(Debug, Clone, PartialEq)]
pub struct KkSettings {
    /// Frequencies (positive) where the spectrum has structure.
    pub breakpoints: Vec<f64>,
    /// Start of the algebraic tail map.
    pub extent: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Achieved accuracy above which the transform is refused.
    pub max_error: f64,
}

impl KkSettings {
    pub fn new(breakpoints: Vec<f64>, extent: f64) -> Self {
        Self {
            breakpoints,
            extent,
            rel_tol: 1e-9,
            max_subdivisions: 4000,
            max_error: 1e-3,
        }
    }
}

/// `χ(ω)` with `Im χ = -(S(ω) - S(-ω))/2` and `Re χ` its principal-value
/// transform, `Re χ(ω) = (1/2π) P∫ A(x)/(ω - x) dx` for `A(x) = S(x) - S(-x)`.
///
/// `A` is odd, so the transform folds onto `x > 0` with kernel
/// `2x/(ω² - x²)`. The pole at `x = |ω|` is handled by subtracting the
/// residue over the symmetric window `[0, 2|ω|]`.
pub fn kk_response<F>(spectrum: F, omega: f64, settings: &KkSettings) -> Result<Complex64>
where
    F: Fn(f64) -> f64,
{
    let odd = |x: f64| spectrum(x) - spectrum(-x);
    let w = omega.abs();
    let extent = settings.extent.max(4.0 * w);

    // g(x) = A(x) 2x/(w + x); integrand g(x)/(w - x)
    let g = |x: f64| odd(x) * 2.0 * x / (w + x);
    let gw = if w > 0.0 { g(w) } else { 0.0 };
    let window = 2.0 * w;

    let integrand = |x: f64| -> [f64; 2] {
        let v = if w == 0.0 {
            -2.0 * odd(x) / x
        } else if x == w {
            // removable singularity: the limit is -g'(w)
            let h = 1e-7 * w;
            (g(w - h) - g(w + h)) / (2.0 * h)
        } else if x < window {
            (g(x) - gw) / (w - x)
        } else {
            g(x) / (w - x)
        };
        [v, v.abs()]
    };

    let mut bps: Vec<f64> = settings.breakpoints.iter().map(|b| b.abs()).collect();
    if w > 0.0 {
        bps.push(w);
        bps.push(window);
    }
    let mut panels = panels_between(0.0, extent, &bps);
    panels.push(Panel::tail(extent));

    let q = integrate(
        integrand,
        &panels,
        settings.rel_tol,
        settings.max_subdivisions,
        1e-300,
        |v| [v[0].abs().max(1e-8 * v[1]), v[1]],
    );
    if !q.value[0].is_finite()
        || !q.relative_error.is_finite()
        || q.relative_error > settings.max_error
    {
        return Err(Error::GridTooCoarse(q.relative_error));
    }
    Ok(Complex64::new(q.value[0] / (2.0 * PI), -0.5 * odd(omega)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{
        cavity_response, cavity_spectrum, ohmic_response, ohmic_spectrum, CavityParams, OhmicParams,
    };

    fn grid() -> Vec<f64> {
        (0..200)
            .map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / 199.0))
            .collect()
    }

    #[test]
    fn cavity_transform_reproduces_closed_form() {
        let p = CavityParams::new(0.05, 0.067, -1.0, 0.7).unwrap();
        let settings = KkSettings::new(vec![1.0 - 0.335, 1.0, 1.0 + 0.335], 10.0);
        for w in grid().into_iter().chain([0.0, 1.0, -1.0, 0.9999]) {
            let kk = kk_response(|x| cavity_spectrum(x, &p), w, &settings).unwrap();
            let exact = cavity_response(w, &p);
            let scale = exact.norm().max(1e-12);
            assert!((kk - exact).norm() / scale < 1e-4, "ω={w}: {kk} vs {exact}");
        }
    }

    #[test]
    fn ohmic_transform_differs_by_static_offset() {
        for t in [0.0, 0.5] {
            let p = OhmicParams::new(1.0, 0.1, 10.0, t).unwrap();
            let settings = KkSettings::new(vec![t, 10.0], 100.0);
            for w in grid() {
                let kk = kk_response(|x| ohmic_spectrum(x, &p), w, &settings).unwrap();
                let closed = ohmic_response(w, &p);
                let shifted = kk + p.mass * p.damping * p.cutoff;
                let scale = closed.norm().max(1e-9);
                assert!(
                    (shifted - closed).norm() / scale < 1e-4,
                    "T={t} ω={w}: {shifted} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn zero_spectrum_gives_zero_response() {
        let settings = KkSettings::new(vec![], 10.0);
        assert_eq!(
            kk_response(|_| 0.0, 0.7, &settings).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }
}
