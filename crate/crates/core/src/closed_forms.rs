// SPDX-License-Identifier: Apache-2.0

//! Analytic benchmarks: dissipationless thermal entanglement, weak-coupling
//! Ohmic variances and the optomechanical cooling formulas.

use std::f64::consts::{LN_2, PI};

use crate::bath::{optomechanical_rates, CavityParams, OhmicParams};
use crate::error::{Error, Result};
use crate::gaussian::{ModeVariances, OscillatorPair};

/// Exact log negativity of two thermal normal modes with `n_± = n_th`.
pub fn en_dissipationless(coupling_rate: f64, n_th: f64, omega: f64) -> Result<f64> {
    if !(coupling_rate >= 0.0) || !(n_th >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need G >= 0, n_th >= 0 (got {coupling_rate}, {n_th})"
        )));
    }
    let modes = OscillatorPair::symmetric(1.0, omega, coupling_rate)?.mode_frequencies();
    Ok(ModeVariances::thermal(1.0, modes, n_th, n_th).log_negativity())
}

/// Occupation at which [`en_dissipationless`] drops to zero.
pub fn threshold_occupation(coupling_rate: f64, omega: f64) -> Result<f64> {
    let entangled = |n: f64| en_dissipationless(coupling_rate, n, omega).map(|e| e > 0.0);
    if !entangled(0.0)? {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while entangled(hi)? {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::NoBracket(hi));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if entangled(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First-order Ohmic variances at `T = 0`: `2mΩ<η²> ≈ 1 - Γ_m/πΩ` and
/// `2<π²>/mΩ ≈ 1 + (Γ_m/πΩ)(2 ln(ω_c/Ω) - 1)`.
pub fn ohmic_t0_variances(p: &OhmicParams, omega_mode: f64) -> (f64, f64) {
    let x = p.damping / (PI * omega_mode);
    (
        1.0 - x,
        1.0 + x * (2.0 * (p.cutoff / omega_mode).ln() - 1.0),
    )
}

/// Ohmic-bath mode variances for identical oscillators at `T = 0`.
pub fn ohmic_t0_mode_variances(pair: &OscillatorPair, p: &OhmicParams) -> Result<ModeVariances> {
    let m = pair.mass_a;
    let modes = pair.mode_frequencies();
    let (xp, pp) = ohmic_t0_variances(p, modes.plus);
    let (xm, pm) = ohmic_t0_variances(p, modes.minus);
    ModeVariances::new(
        xp / (2.0 * m * modes.plus),
        xm / (2.0 * m * modes.minus),
        pp * m * modes.plus / 2.0,
        pm * m * modes.minus / 2.0,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub value: f64,
    /// The formula went negative and was clamped to zero.
    pub clamped: bool,
}

/// `G_min = (Γ_m/π)(ln(ω_c/Ω) - 1)`.
pub fn gmin_ohmic(p: &OhmicParams, omega: f64) -> Threshold {
    let raw = p.damping / PI * ((p.cutoff / omega).ln() - 1.0);
    if raw > 0.0 {
        Threshold {
            value: raw,
            clamped: false,
        }
    } else {
        Threshold {
            value: 0.0,
            clamped: true,
        }
    }
}

/// Drop of `E_N` caused by an Ohmic bath at `T = 0`:
/// `Γ_m (ln(ω_c/Ω) - 1) / (πΩ ln 2)`.
pub fn en_reduction_ohmic_t0(p: &OhmicParams, omega: f64) -> f64 {
    p.damping * ((p.cutoff / omega).ln() - 1.0) / (PI * omega * LN_2)
}

/// Rates entering the optomechanical formulas. `n_eff` and `δn` are
/// derived on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptomechDerived {
    pub gamma_opt: f64,
    pub n_opt: f64,
    /// Thermal load `Γ_m n_th`.
    pub load: f64,
    pub kappa: f64,
}

impl OptomechDerived {
    /// Resolved-sideband values at optimal detuning: `n_opt = (κ/4Ω)²`.
    pub fn nominal(gamma_opt: f64, kappa: f64, load: f64, omega: f64) -> Self {
        Self {
            gamma_opt,
            n_opt: (kappa / (4.0 * omega)).powi(2),
            load,
            kappa,
        }
    }

    /// Rates computed from the cavity spectrum at `omega_mode`.
    pub fn from_cavity(p: &CavityParams, omega_mode: f64, load: f64) -> Result<Self> {
        let r = optomechanical_rates(p, omega_mode)?;
        Ok(Self {
            gamma_opt: r.cooling_rate,
            n_opt: r.occupation,
            load,
            kappa: p.linewidth,
        })
    }

    pub fn n_eff(&self) -> f64 {
        self.load / self.gamma_opt + self.n_opt
    }

    pub fn delta_n(&self) -> f64 {
        self.load / self.kappa
    }

    /// Conditions under which the compact formulas hold.
    pub fn regime_warnings(&self, coupling: f64, omega: f64) -> Vec<String> {
        let mut w = Vec::new();
        if self.kappa >= 0.3 * omega {
            w.push(format!(
                "κ = {} is not small against Ω = {omega}",
                self.kappa
            ));
        }
        if coupling >= 0.3 * omega {
            w.push(format!("g = {coupling} is not small against Ω = {omega}"));
        }
        w
    }
}

/// `(2mΩ<η²>, 2<π²>/mΩ)` under sideband cooling: momentum
/// `1 + 2(n_eff + δn)`, position adds `g²/Ω²`.
pub fn optomech_variances(d: &OptomechDerived, coupling: f64, omega_mode: f64) -> (f64, f64) {
    let mom = 1.0 + 2.0 * (d.n_eff() + d.delta_n());
    (mom + (coupling / omega_mode).powi(2), mom)
}

pub fn optomech_mode_variances(
    pair: &OscillatorPair,
    plus: &OptomechDerived,
    minus: &OptomechDerived,
    coupling: f64,
) -> Result<ModeVariances> {
    let m = pair.mass_a;
    let modes = pair.mode_frequencies();
    let (xp, pp) = optomech_variances(plus, coupling, modes.plus);
    let (xm, pm) = optomech_variances(minus, coupling, modes.minus);
    ModeVariances::new(
        xp / (2.0 * m * modes.plus),
        xm / (2.0 * m * modes.minus),
        pp * m * modes.plus / 2.0,
        pm * m * modes.minus / 2.0,
    )
}

/// `G_min/Ω ≈ 2(n_eff + δn) + Γ_opt κ / 8Ω²`.
pub fn gmin_optomech(d: &OptomechDerived, omega: f64) -> f64 {
    omega * (2.0 * (d.n_eff() + d.delta_n()) + d.gamma_opt * d.kappa / (8.0 * omega * omega))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ohmic(damping: f64, cutoff: f64) -> OhmicParams {
        OhmicParams::new(1.0, damping, cutoff, 0.0).unwrap()
    }

    #[test]
    fn dissipationless_examples() {
        assert_eq!(en_dissipationless(0.0, 0.0, 1.0).unwrap(), 0.0);
        assert!((en_dissipationless(0.2, 0.0, 1.0).unwrap() - 0.2120).abs() < 1e-4);
        let n = threshold_occupation(0.2, 1.0).unwrap();
        assert!(en_dissipationless(0.2, n * 0.999, 1.0).unwrap() > 0.0);
        assert_eq!(en_dissipationless(0.2, n * 1.001, 1.0).unwrap(), 0.0);
        // same order as G/2Ω, lowered by the O(G/Ω) correction
        assert!(n > 0.05 && n < 0.1, "{n}");
        assert!(en_dissipationless(-0.1, 0.0, 1.0).is_err());
    }

    #[test]
    fn ohmic_examples() {
        let (x, p) = ohmic_t0_variances(&ohmic(0.1, 10.0), 1.0);
        assert!((x - 0.96817).abs() < 1e-5);
        assert!((p - 1.11476).abs() < 1e-5);
        let (x, p) = ohmic_t0_variances(
            &OhmicParams {
                damping: 0.0,
                ..ohmic(0.1, 10.0)
            },
            1.0,
        );
        assert_eq!((x, p), (1.0, 1.0));
        let (_, p) = ohmic_t0_variances(&ohmic(0.1, std::f64::consts::E), 1.0);
        assert!((p - 1.0 - 0.1 / PI).abs() < 1e-15);

        assert!((gmin_ohmic(&ohmic(0.1, 10.0), 1.0).value - 0.041_462_6).abs() < 1e-7);
        let edge = gmin_ohmic(&ohmic(0.1, std::f64::consts::E), 1.0);
        assert!(edge.value.abs() < 1e-16);
        let below = gmin_ohmic(&ohmic(0.1, 2.0), 1.0);
        assert!(below.clamped && below.value == 0.0);

        assert!((en_reduction_ohmic_t0(&ohmic(0.1, 10.0), 1.0) - 0.059_818).abs() < 1e-6);
        let step = en_reduction_ohmic_t0(&ohmic(0.1, 20.0), 1.0)
            - en_reduction_ohmic_t0(&ohmic(0.1, 10.0), 1.0);
        assert!((step - 0.031_831).abs() < 1e-6);
    }

    #[test]
    fn optomech_examples() {
        let d = OptomechDerived::nominal(0.01, 0.067, 1e-4, 1.0);
        assert!((d.n_eff() - 0.010_281).abs() < 1e-6);
        assert!((d.delta_n() - 0.001_492_5).abs() < 1e-7);
        let g = (0.01f64 * 0.067 / 4.0).sqrt();
        let (x, p) = optomech_variances(&d, g, 1.0);
        assert!((p - 1.023_546).abs() < 1e-6);
        assert!((x - 1.023_714).abs() < 1e-6);
        assert!((gmin_optomech(&d, 1.0) - 0.023_630).abs() < 1e-6);

        let (x, p) = optomech_variances(&d, 0.0, 1.0);
        assert_eq!(x, p);
        let ideal = OptomechDerived::nominal(0.01, 1e-9, 0.0, 1.0);
        let (x, p) = optomech_variances(&ideal, 0.0, 1.0);
        assert!((x - 1.0).abs() < 1e-12 && (p - 1.0).abs() < 1e-12);
        assert!(gmin_optomech(&ideal, 1.0) < 1e-11);

        let cav = CavityParams::from_cooling_rate(0.01, 0.067, -1.0, 1.0, 1.0).unwrap();
        let exact = OptomechDerived::from_cavity(&cav, 1.0, 1e-4).unwrap();
        assert!((exact.n_opt - d.n_opt).abs() < 1e-15);
        assert!((exact.gamma_opt / d.gamma_opt - 1.0).abs() < 1e-3);
    }

    #[test]
    fn optimal_cooling_rate_is_interior() {
        let kappa = 0.067;
        let g = |rate: f64| gmin_optomech(&OptomechDerived::nominal(rate, kappa, 1e-4, 1.0), 1.0);
        let rates: Vec<f64> = (0..60)
            .map(|i| 10f64.powf(-3.0 + 3.0 * i as f64 / 59.0))
            .collect();
        let values: Vec<f64> = rates.iter().map(|r| g(*r)).collect();
        let (imin, _) = values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        assert!(imin > 0 && imin < rates.len() - 1);
        // dG/dΓ_opt changes sign
        assert!(values[1] < values[0] && values[59] > values[58]);
    }
}
