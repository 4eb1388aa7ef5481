// SPDX-License-Identifier: Apache-2.0

//! Markovian baseline: normal modes damped by rotating-wave Lindblad terms.
//!
//! Each mode `±` has a lowering rate `down` (coefficient of `D[A]`) and a
//! raising rate `up` (coefficient of `D[A†]`). The second moments obey
//! `dγ/dt = Aγ + γAᵀ + D`, solved here directly for the steady state.

use nalgebra::{DMatrix, DVector, Matrix4};

use crate::bath::{cavity_spectrum, CavityParams};
use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, ModeFrequencies, OscillatorPair, P_A, P_B, Q_A, Q_B};

const RESIDUAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModeRates {
    pub down: f64,
    pub up: f64,
}

impl ModeRates {
    /// Energy damping rate `2(down - up)`.
    pub fn effective_damping(&self) -> f64 {
        2.0 * (self.down - self.up)
    }

    pub fn occupation(&self) -> f64 {
        self.up / (self.down - self.up)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladRates {
    pub plus: ModeRates,
    pub minus: ModeRates,
    pub modes: ModeFrequencies,
    pub mass: f64,
}

impl LindbladRates {
    pub fn new(pair: &OscillatorPair) -> Result<Self> {
        if !pair.is_symmetric() {
            return Err(Error::InvalidParameter(
                "Lindblad normal-mode rates need identical oscillators".into(),
            ));
        }
        Ok(Self {
            plus: ModeRates::default(),
            minus: ModeRates::default(),
            modes: pair.mode_frequencies(),
            mass: pair.mass_a,
        })
    }

    /// Equilibrium bath: `(Γ_m/2)(n+1)` down, `(Γ_m/2)n` up.
    pub fn with_thermal(mut self, damping: f64, n_plus: f64, n_minus: f64) -> Result<Self> {
        if !(damping >= 0.0) || !(n_plus >= 0.0) || !(n_minus >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "thermal rates need Γ_m, n_± >= 0 (got {damping}, {n_plus}, {n_minus})"
            )));
        }
        self.plus.down += 0.5 * damping * (n_plus + 1.0);
        self.plus.up += 0.5 * damping * n_plus;
        self.minus.down += 0.5 * damping * (n_minus + 1.0);
        self.minus.up += 0.5 * damping * n_minus;
        Ok(self)
    }

    /// `Γ_m → 0` at fixed `Γ_m n_th`: equal up and down rates `Γ_m n_th / 2`.
    pub fn with_thermal_load(mut self, load: f64) -> Result<Self> {
        if !(load >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "thermal load must be >= 0, got {load}"
            )));
        }
        for r in [&mut self.plus, &mut self.minus] {
            r.down += 0.5 * load;
            r.up += 0.5 * load;
        }
        Ok(self)
    }

    /// Cavity terms `S(±Ω_i) Ω_i ℓ_m² / 2Ω` with `ℓ_m` and `Ω` the bare
    /// oscillator values carried by the cavity parameters.
    pub fn with_cavity(
        mut self,
        plus: &CavityParams,
        minus: &CavityParams,
        omega: f64,
    ) -> Result<Self> {
        for (rates, p, w) in [
            (&mut self.plus, plus, self.modes.plus),
            (&mut self.minus, minus, self.modes.minus),
        ] {
            let factor = w * p.zero_point_width.powi(2) / (2.0 * omega);
            rates.down += cavity_spectrum(w, p) * factor;
            rates.up += cavity_spectrum(-w, p) * factor;
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.plus.down > self.plus.up) {
            return Err(Error::NoSteadyState(
                "mode + is not cooled (down-rate <= up-rate)",
            ));
        }
        if !(self.minus.down > self.minus.up) {
            return Err(Error::NoSteadyState(
                "mode - is not cooled (down-rate <= up-rate)",
            ));
        }
        Ok(())
    }
}

/// Drift and diffusion in the mode ordering `(π_+, η_+, π_-, η_-)`.
pub fn build_drift_diffusion(r: &LindbladRates) -> (Matrix4<f64>, Matrix4<f64>) {
    let mut a = Matrix4::zeros();
    let mut d = Matrix4::zeros();
    let m = r.mass;
    for (k, (rates, w)) in [(r.plus, r.modes.plus), (r.minus, r.modes.minus)]
        .into_iter()
        .enumerate()
    {
        let (p, q) = (2 * k, 2 * k + 1);
        let half = 0.5 * rates.effective_damping();
        let diff = rates.down + rates.up;
        a[(p, p)] = -half;
        a[(q, q)] = -half;
        a[(p, q)] = -m * w * w;
        a[(q, p)] = 1.0 / m;
        d[(p, p)] = m * w * diff;
        d[(q, q)] = diff / (m * w);
    }
    (a, d)
}

/// Unique `γ` with `Aγ + γAᵀ + D = 0`, via `(I⊗A + A⊗I) vec γ = -vec D`.
pub fn solve_lyapunov(a: &Matrix4<f64>, d: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let max_re = a
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if !(max_re < 0.0) {
        return Err(Error::NotHurwitz(max_re));
    }
    let ad = DMatrix::from_column_slice(4, 4, a.as_slice());
    let id = DMatrix::<f64>::identity(4, 4);
    let system = id.kronecker(&ad) + ad.kronecker(&id);
    let lu = system.lu();
    let rhs = -DVector::from_column_slice(d.as_slice());
    let mut x = lu
        .solve(&rhs)
        .ok_or(Error::NoSteadyState("singular Lyapunov operator"))?;

    let residual = |x: &DVector<f64>| {
        let g = Matrix4::from_column_slice(x.as_slice());
        a * g + g * a.transpose() + d
    };
    // one step of iterative refinement
    let r = residual(&x);
    if let Some(dx) = lu.solve(&-DVector::from_column_slice(r.as_slice())) {
        x += dx;
    }
    let g = Matrix4::from_column_slice(x.as_slice());
    let g = 0.5 * (g + g.transpose());
    let res = (a * g + g * a.transpose() + d).norm();
    let scale = d.norm() + 2.0 * a.norm() * g.norm();
    if res > RESIDUAL_TOL * scale {
        return Err(Error::ToleranceNotMet {
            achieved: res / scale,
            reason: "Lyapunov residual above 1e-12".into(),
        });
    }
    Ok(g)
}

/// Mode-basis `(π_+, η_+, π_-, η_-)` to oscillator-basis `(p_A, q_A, p_B, q_B)`.
pub fn mode_to_oscillator() -> Matrix4<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut t = Matrix4::zeros();
    t[(P_A, 0)] = s;
    t[(P_A, 2)] = s;
    t[(P_B, 0)] = s;
    t[(P_B, 2)] = -s;
    t[(Q_A, 1)] = s;
    t[(Q_A, 3)] = s;
    t[(Q_B, 1)] = s;
    t[(Q_B, 3)] = -s;
    t
}

pub fn lindblad_covariance(r: &LindbladRates) -> Result<CovarianceMatrix> {
    r.validate()?;
    let (a, d) = build_drift_diffusion(r);
    let g_mode = solve_lyapunov(&a, &d)?;
    let t = mode_to_oscillator();
    CovarianceMatrix::new(t * g_mode * t.transpose())
}

pub fn lindblad_negativity(r: &LindbladRates) -> Result<f64> {
    lindblad_covariance(r)?.log_negativity()
}
