// SPDX-License-Identifier: Apache-2.0

//! Self-check battery run by `validate`: response transforms, solver
//! cross-checks and regressions against the analytic formulas.

use std::fmt::Write as _;

use crate::bath::{
    cavity_response, cavity_spectrum, kk_response, ohmic_response, ohmic_spectrum,
    resonance_thermal_bath, BathModel, CavityParams, KkSettings, OhmicParams, ResponseConvention,
};
use crate::closed_forms::ohmic_t0_variances;
use crate::error::Result;
use crate::gaussian::{covariance_from_mode_variances, ModeVariances, OscillatorPair};
use crate::langevin::{
    stability_check, steady_covariance, BathLayout, QuadratureSettings, SystemSpec,
};
use crate::lindblad::{lindblad_covariance, LindbladRates};

use super::config::{Method, RunConfig};
use super::evaluate::evaluate_with;

/// Quadrature tolerance above which tolerance-sensitive failures only warn.
pub const STRICT_REL_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationOptions {
    pub rel_tol: f64,
    pub convention: ResponseConvention,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            rel_tol: QuadratureSettings::default().rel_tol,
            convention: ResponseConvention::Retarded,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Warn => "WARN",
            Self::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<width$}  {}  {}",
                c.name,
                c.status.as_str(),
                c.detail
            );
        }
        out
    }
}

struct Battery {
    opts: ValidationOptions,
    checks: Vec<Check>,
}

impl Battery {
    fn push(
        &mut self,
        name: &'static str,
        tolerance_sensitive: bool,
        outcome: Result<(bool, String)>,
    ) {
        let (ok, detail) = match outcome {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let status = match (
            ok,
            tolerance_sensitive && self.opts.rel_tol > STRICT_REL_TOL,
        ) {
            (true, _) => Status::Pass,
            (false, true) => Status::Warn,
            (false, false) => Status::Fail,
        };
        self.checks.push(Check {
            name,
            status,
            detail,
        });
    }

    fn settings(&self) -> QuadratureSettings {
        QuadratureSettings::with_rel_tol(self.opts.rel_tol)
    }
}

fn log_grid(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
}

fn kk_cavity() -> Result<(bool, String)> {
    let p = CavityParams::new(0.05, 0.067, -1.0, 0.7)?;
    let settings = KkSettings::new(vec![1.0 - 0.335, 1.0, 1.0 + 0.335], 10.0);
    let mut worst: f64 = 0.0;
    for w in log_grid(80, 1e-2, 1e2).chain([1.0, -1.0, -0.5]) {
        let kk = kk_response(|x| cavity_spectrum(x, &p), w, &settings)?;
        let exact = cavity_response(w, &p);
        worst = worst.max((kk - exact).norm() / exact.norm().max(1e-12));
    }
    Ok((
        worst < 1e-4,
        format!("max relative deviation {worst:.2e} (limit 1e-4)"),
    ))
}

fn kk_ohmic() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for t in [0.0, 0.5] {
        let p = OhmicParams::new(1.0, 0.1, 10.0, t)?;
        let settings = KkSettings::new(vec![t, 10.0], 100.0);
        let offset = p.mass * p.damping * p.cutoff;
        for w in log_grid(60, 1e-2, 1e2) {
            let kk = kk_response(|x| ohmic_spectrum(x, &p), w, &settings)? + offset;
            let exact = ohmic_response(w, &p);
            worst = worst.max((kk - exact).norm() / exact.norm().max(1e-9));
        }
    }
    Ok((
        worst < 1e-4,
        format!("max relative deviation after static offset {worst:.2e} (limit 1e-4)"),
    ))
}

fn ohmic_config() -> RunConfig {
    RunConfig::from_json(r#"{"system": {"G": 0.2}, "bath": {"kind": "ohmic", "gamma_m": 0.1, "omega_c": 10, "T": 0}}"#)
        .expect("built-in config")
}

fn cavity_config() -> RunConfig {
    RunConfig::from_json(
        r#"{"system": {"G": 0.02}, "bath": {"kind": "cavity", "gamma_opt": 0.01, "kappa": 0.067, "gamma_m_n_th": 1e-4}}"#,
    )
    .expect("built-in config")
}

fn stability(opts: &ValidationOptions) -> Result<(bool, String)> {
    let pair = OscillatorPair::symmetric(1.0, 1.0, 0.2)?;
    let bath = BathModel::ohmic(OhmicParams::new(1.0, 0.1, 10.0, 0.0)?);
    let spec = SystemSpec::symmetric(pair, bath)?.with_convention(opts.convention);
    let r = stability_check(&spec);
    Ok((r.stable, r.diagnostic))
}

/// Resonance-approximated thermal baths make the Langevin problem
/// Markovian, where it agrees with the Lindblad steady state exactly.
fn lyapunov_vs_exact(b: &Battery) -> Result<(bool, String)> {
    let (damping, n) = (1e-3, 0.3);
    let pair = OscillatorPair::symmetric(1.0, 1.0, 0.2)?;
    let modes = pair.mode_frequencies();
    let spec = SystemSpec::new(
        pair,
        BathLayout::NormalModes {
            plus: resonance_thermal_bath(damping, n, 1.0, modes.plus)?,
            minus: resonance_thermal_bath(damping, n, 1.0, modes.minus)?,
        },
    )?
    .with_convention(b.opts.convention);
    let exact = steady_covariance(&spec, &b.settings())?.covariance;
    let markov = lindblad_covariance(&LindbladRates::new(&pair)?.with_thermal(damping, n, n)?)?;
    let (x, y) = (exact.matrix(), markov.matrix());
    let dev = (x - y).amax() / y.amax();
    Ok((
        dev < 1e-4,
        format!("max deviation {dev:.2e} of the largest entry (limit 1e-4)"),
    ))
}

fn ohmic_regression(b: &Battery) -> Result<(bool, String)> {
    let cfg = ohmic_config();
    let r = evaluate_with(&cfg, Method::Exact, b.opts.convention)?;
    let p = OhmicParams::new(1.0, 0.1, 10.0, 0.0)?;
    let w = OscillatorPair::symmetric(1.0, 1.0, 0.2)?
        .mode_frequencies()
        .plus;
    let (x0, p0) = ohmic_t0_variances(&p, w);
    let mv = &r.mode_variances;
    let (x, q) = (2.0 * w * mv.eta_plus_sq, 2.0 * mv.pi_plus_sq / w);
    let ok = (x - x0).abs() <= 0.01 && (q - p0).abs() <= 0.02;
    Ok((
        ok,
        format!("position {x:.5} vs {x0:.5} (±0.01), momentum {q:.5} vs {p0:.5} (±0.02)"),
    ))
}

fn cavity_regression(b: &Battery) -> Result<(bool, String)> {
    let cfg = cavity_config();
    let exact = evaluate_with(&cfg, Method::Exact, b.opts.convention)?;
    let closed = evaluate_with(&cfg, Method::ClosedForm, b.opts.convention)?;
    let w = OscillatorPair::symmetric(1.0, 1.0, 0.02)?.mode_frequencies();
    let norm = |mv: &ModeVariances| {
        [
            2.0 * w.plus * mv.eta_plus_sq,
            2.0 * w.minus * mv.eta_minus_sq,
            2.0 * mv.pi_plus_sq / w.plus,
            2.0 * mv.pi_minus_sq / w.minus,
        ]
    };
    let dev = norm(&exact.mode_variances)
        .iter()
        .zip(norm(&closed.mode_variances))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok((
        dev <= 5e-3,
        format!("max absolute deviation of scaled variances {dev:.2e} (limit 5e-3)"),
    ))
}

fn symplectic_shortcut() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for (g, n_plus, n_minus) in [
        (0.2, 0.0, 0.0),
        (0.1, 0.05, 0.2),
        (0.3, 1.0, 0.0),
        (0.02, 0.01, 0.01),
    ] {
        let modes = OscillatorPair::symmetric(1.0, 1.0, g)?.mode_frequencies();
        let mv = ModeVariances::thermal(1.0, modes, n_plus, n_minus);
        let (a1, a2) = mv.pt_symplectic_pair();
        let (b1, b2) = covariance_from_mode_variances(&mv)
            .partial_transpose()
            .symplectic_eigenvalues()?;
        worst = worst.max((a1 - b1).abs()).max((a2 - b2).abs());
    }
    Ok((
        worst < 1e-12,
        format!("max difference {worst:.2e} (limit 1e-12)"),
    ))
}

fn physicality(b: &Battery) -> Result<(bool, String)> {
    let mut margins = Vec::new();
    for cfg in [ohmic_config(), cavity_config()] {
        let r = evaluate_with(&cfg, Method::Exact, b.opts.convention)?;
        if !r.covariance.is_physical() {
            return Ok((
                false,
                format!(
                    "uncertainty margin {:.3e}",
                    r.covariance.uncertainty_margin()
                ),
            ));
        }
        margins.push(r.covariance.uncertainty_margin());
    }
    let least = margins.into_iter().fold(f64::INFINITY, f64::min);
    Ok((true, format!("smallest uncertainty margin {least:.3e}")))
}

pub fn run_validation(opts: ValidationOptions) -> ValidationReport {
    let mut b = Battery {
        opts,
        checks: Vec::new(),
    };
    b.push("kk-cavity", false, kk_cavity());
    b.push("kk-ohmic-offset", false, kk_ohmic());
    b.push("stability-ohmic", false, stability(&opts));
    let r = lyapunov_vs_exact(&b);
    b.push("lyapunov-vs-exact-markov", true, r);
    let r = ohmic_regression(&b);
    b.push("ohmic-first-order", true, r);
    let r = cavity_regression(&b);
    b.push("cavity-variances", true, r);
    b.push("symplectic-shortcut", false, symplectic_shortcut());
    let r = physicality(&b);
    b.push("physicality", false, r);
    ValidationReport { checks: b.checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_battery_passes() {
        let report = run_validation(ValidationOptions::default());
        assert!(report.passed(), "{}", report.to_table());
        assert!(
            report.checks.iter().all(|c| c.status == Status::Pass),
            "{}",
            report.to_table()
        );
    }

    #[test]
    fn flipped_response_sign_fails_stability() {
        let report = run_validation(ValidationOptions {
            convention: ResponseConvention::AsPrinted,
            ..Default::default()
        });
        assert!(!report.passed());
        assert_eq!(report.get("stability-ohmic").unwrap().status, Status::Fail);
    }
}
