// SPDX-License-Identifier: Apache-2.0

//! Frequency-domain bath descriptions.
//!
//! A bath is characterised by its (non-symmetrised) force noise spectrum
//! `S(ω) = ∫dt e^{iωt} <F(t)F(0)>` and its retarded force response
//! `χ^F(ω)`, the Fourier transform of `-iθ(t)<[F(t), F(0)]>`. With this
//! convention `Im χ^F(ω) = -(S(ω) - S(-ω))/2`, and `S(ω > 0)` is the rate at
//! which the bath absorbs energy from the system.
//!
//! Responses are stored in this retarded convention. How they enter the
//! equations of motion is decided by [`ResponseConvention`].

mod kk;
mod tabulated;

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use kk::{kk_response, KkSettings};
pub use tabulated::TabulatedBath;

/// How `χ^F` enters the inverse susceptibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResponseConvention {
    /// `m(Ω² - ω²) + k + χ^F`: a bath with `S(Ω) > S(-Ω)` damps the
    /// oscillator at rate `ℓ²(S(Ω) - S(-Ω))`.
    #[default]
    Retarded,
    /// `m(Ω² - ω²) + k - χ^F`, the sign as it is usually printed next to
    /// the memory integral. Every dissipative bath becomes anti-damping.
    AsPrinted,
}

impl ResponseConvention {
    pub fn sign(self) -> f64 {
        match self {
            Self::Retarded => 1.0,
            Self::AsPrinted => -1.0,
        }
    }
}

/// Ohmic bath with a Drude cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhmicParams {
    pub mass: f64,
    pub damping: f64,
    pub cutoff: f64,
    pub temperature: f64,
}

impl OhmicParams {
    pub fn new(mass: f64, damping: f64, cutoff: f64, temperature: f64) -> Result<Self> {
        if !(mass > 0.0) || !(damping > 0.0) || !(cutoff > 0.0) || !(temperature >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ohmic bath needs m > 0, Γ_m > 0, ω_c > 0, T >= 0 (got m={mass}, Γ_m={damping}, ω_c={cutoff}, T={temperature})"
            )));
        }
        Ok(Self {
            mass,
            damping,
            cutoff,
            temperature,
        })
    }

    /// Warnings for parameters outside `Γ_m < Ω`, `ω_c ≫ Ω`.
    pub fn regime_warnings(&self, omega: f64) -> Vec<String> {
        let mut w = Vec::new();
        if self.damping >= omega {
            w.push(format!("Γ_m = {} is not below Ω = {omega}", self.damping));
        }
        if self.cutoff < 5.0 * omega {
            w.push(format!(
                "ω_c = {} is not much larger than Ω = {omega}",
                self.cutoff
            ));
        }
        w
    }
}

/// Cavity shot-noise bath seen by one mechanical mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// Optomechanical coupling rate `g`.
    pub coupling: f64,
    /// Cavity decay rate `κ`.
    pub linewidth: f64,
    /// Laser detuning `Δ`.
    pub detuning: f64,
    /// Mechanical zero-point width `ℓ_m = 1/sqrt(2mΩ)`.
    pub zero_point_width: f64,
}

impl CavityParams {
    pub fn new(
        coupling: f64,
        linewidth: f64,
        detuning: f64,
        zero_point_width: f64,
    ) -> Result<Self> {
        if !(coupling >= 0.0)
            || !(linewidth > 0.0)
            || !(zero_point_width > 0.0)
            || !detuning.is_finite()
        {
            return Err(Error::InvalidParameter(format!(
                "cavity bath needs g >= 0, κ > 0, ℓ_m > 0 (got g={coupling}, κ={linewidth}, ℓ_m={zero_point_width})"
            )));
        }
        Ok(Self {
            coupling,
            linewidth,
            detuning,
            zero_point_width,
        })
    }

    /// `ℓ_m` taken from an oscillator of mass `mass` and frequency `omega`.
    pub fn for_oscillator(
        coupling: f64,
        linewidth: f64,
        detuning: f64,
        mass: f64,
        omega: f64,
    ) -> Result<Self> {
        Self::new(coupling, linewidth, detuning, zero_point_width(mass, omega))
    }

    /// Drive strength fixed through the nominal cooling rate `Γ_opt = 4g²/κ`.
    pub fn from_cooling_rate(
        cooling_rate: f64,
        linewidth: f64,
        detuning: f64,
        mass: f64,
        omega: f64,
    ) -> Result<Self> {
        if !(cooling_rate >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Γ_opt must be >= 0, got {cooling_rate}"
            )));
        }
        Self::for_oscillator(
            (cooling_rate * linewidth / 4.0).sqrt(),
            linewidth,
            detuning,
            mass,
            omega,
        )
    }

    /// `(g/ℓ_m)²`.
    pub fn force_scale_sq(&self) -> f64 {
        (self.coupling / self.zero_point_width).powi(2)
    }
}

pub fn zero_point_width(mass: f64, omega: f64) -> f64 {
    1.0 / (2.0 * mass * omega).sqrt()
}

/// Bose occupation `1/(e^{ω/T} - 1)`; zero at `T = 0`.
pub fn bose_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (omega / temperature).exp_m1()
}

/// `S(ω) = mΓ_m ω (coth(ω/2T) + 1) / (1 + ω²/ω_c²)`.
pub fn ohmic_spectrum(omega: f64, p: &OhmicParams) -> f64 {
    let drude = 1.0 / (1.0 + (omega / p.cutoff).powi(2));
    let t = p.temperature;
    // ω (coth(ω/2T) + 1) = 2ω / (1 - e^{-ω/T})
    let thermal = if t == 0.0 {
        if omega > 0.0 {
            2.0 * omega
        } else {
            0.0
        }
    } else if omega == 0.0 {
        2.0 * t
    } else {
        2.0 * omega / -(-omega / t).exp_m1()
    };
    p.mass * p.damping * thermal * drude
}

/// Drude-regularised Ohmic response `-i mΓ_m ω / (1 - iω/ω_c)`.
///
/// The static shift of the bare commutator response is removed so that
/// `χ^F(0) = 0`; the `ω²/ω_c` real part is kept. The transform of
/// `Im χ^F` therefore differs from this function by `mΓ_m ω_c`.
pub fn ohmic_response(omega: f64, p: &OhmicParams) -> Complex64 {
    let num = Complex64::new(0.0, -p.mass * p.damping * omega);
    num / Complex64::new(1.0, -omega / p.cutoff)
}

/// Lorentzian shot-noise spectrum `(g/ℓ_m)² κ / ((ω + Δ)² + κ²/4)`.
pub fn cavity_spectrum(omega: f64, p: &CavityParams) -> f64 {
    let k = p.linewidth;
    p.force_scale_sq() * k / ((omega + p.detuning).powi(2) + 0.25 * k * k)
}

/// `(g/ℓ_m)² [1/(ω + Δ + iκ/2) - 1/(ω - Δ + iκ/2)]`; poles at `∓Δ - iκ/2`.
pub fn cavity_response(omega: f64, p: &CavityParams) -> Complex64 {
    let half = 0.5 * p.linewidth;
    let a = Complex64::new(omega + p.detuning, half).inv();
    let b = Complex64::new(omega - p.detuning, half).inv();
    (a - b) * p.force_scale_sq()
}

/// Cooling rate and residual occupation imposed by a cavity on a mode at
/// `omega_mode`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptomechanicalRates {
    pub cooling_rate: f64,
    pub occupation: f64,
}

/// `Γ_opt = ℓ_m²(S(Ω) - S(-Ω))`, `(n_opt + 1)/n_opt = S(Ω)/S(-Ω)`.
pub fn optomechanical_rates(p: &CavityParams, omega_mode: f64) -> Result<OptomechanicalRates> {
    let emission = cavity_spectrum(omega_mode, p);
    let absorption = cavity_spectrum(-omega_mode, p);
    if !(emission > absorption) {
        return Err(Error::HeatingRegime {
            emission,
            absorption,
        });
    }
    Ok(OptomechanicalRates {
        cooling_rate: p.zero_point_width.powi(2) * (emission - absorption),
        occupation: absorption / (emission - absorption),
    })
}

/// A spectral feature the integrator should resolve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakHint {
    pub center: f64,
    pub width: f64,
}

#[derive(Debug, Clone)]
pub enum BathComponent {
    Ohmic(OhmicParams),
    Cavity(CavityParams),
    /// Thermal noise frozen at its resonance values (`emission` for ω > 0,
    /// `absorption` for ω < 0) with Markovian damping `-i mΓ_m ω`.
    ResonanceThermal {
        mass: f64,
        damping: f64,
        emission: f64,
        absorption: f64,
        resonance: f64,
    },
    Tabulated(Arc<TabulatedBath>),
}

impl BathComponent {
    fn spectrum(&self, omega: f64) -> f64 {
        match self {
            Self::Ohmic(p) => ohmic_spectrum(omega, p),
            Self::Cavity(p) => cavity_spectrum(omega, p),
            Self::ResonanceThermal {
                emission,
                absorption,
                ..
            } => {
                if omega > 0.0 {
                    *emission
                } else if omega < 0.0 {
                    *absorption
                } else {
                    0.5 * (emission + absorption)
                }
            }
            Self::Tabulated(t) => t.spectrum(omega),
        }
    }

    fn response(&self, omega: f64) -> Complex64 {
        match self {
            Self::Ohmic(p) => ohmic_response(omega, p),
            Self::Cavity(p) => cavity_response(omega, p),
            Self::ResonanceThermal { mass, damping, .. } => {
                Complex64::new(0.0, -mass * damping * omega)
            }
            Self::Tabulated(t) => t.response(omega),
        }
    }

    fn peaks(&self, out: &mut Vec<PeakHint>) {
        match self {
            Self::Ohmic(p) => {
                out.push(PeakHint {
                    center: p.cutoff,
                    width: p.cutoff,
                });
                if p.temperature > 0.0 {
                    out.push(PeakHint {
                        center: 0.0,
                        width: p.temperature,
                    });
                }
            }
            Self::Cavity(p) => {
                let w = 0.5 * p.linewidth;
                out.push(PeakHint {
                    center: -p.detuning,
                    width: w,
                });
                out.push(PeakHint {
                    center: p.detuning,
                    width: w,
                });
            }
            Self::ResonanceThermal {
                damping, resonance, ..
            } => {
                out.push(PeakHint {
                    center: *resonance,
                    width: damping.max(1e-9 * resonance),
                });
            }
            Self::Tabulated(t) => out.extend(t.peaks()),
        }
    }

    /// `χ^F(ω) - KK[Im χ^F](ω)`, when that difference is a constant.
    fn static_offset(&self) -> Option<f64> {
        match self {
            Self::Ohmic(p) => Some(p.mass * p.damping * p.cutoff),
            Self::Cavity(_) | Self::Tabulated(_) => Some(0.0),
            Self::ResonanceThermal { .. } => None,
        }
    }
}

/// Sum of independent bath components acting on one coordinate.
#[derive(Debug, Clone)]
pub struct BathModel {
    components: Vec<BathComponent>,
    label: String,
}

impl BathModel {
    pub fn zero() -> Self {
        Self {
            components: Vec::new(),
            label: "zero".into(),
        }
    }

    pub fn ohmic(p: OhmicParams) -> Self {
        Self {
            label: format!(
                "ohmic(Γ_m={}, ω_c={}, T={})",
                p.damping, p.cutoff, p.temperature
            ),
            components: vec![BathComponent::Ohmic(p)],
        }
    }

    pub fn cavity(p: CavityParams) -> Self {
        Self {
            label: format!(
                "cavity(g={}, κ={}, Δ={})",
                p.coupling, p.linewidth, p.detuning
            ),
            components: vec![BathComponent::Cavity(p)],
        }
    }

    pub fn tabulated(t: impl Into<Arc<TabulatedBath>>) -> Self {
        let t = t.into();
        Self {
            label: format!("tabulated({} points)", t.len()),
            components: vec![BathComponent::Tabulated(t)],
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn components(&self) -> &[BathComponent] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn spectrum(&self, omega: f64) -> f64 {
        self.components.iter().map(|c| c.spectrum(omega)).sum()
    }

    pub fn response(&self, omega: f64) -> Complex64 {
        self.components.iter().map(|c| c.response(omega)).sum()
    }

    pub fn peaks(&self) -> Vec<PeakHint> {
        let mut out = Vec::new();
        for c in &self.components {
            c.peaks(&mut out);
        }
        out
    }

    pub fn static_offset(&self) -> Option<f64> {
        self.components
            .iter()
            .map(BathComponent::static_offset)
            .sum()
    }

    /// Largest frequency scale carried by the components.
    pub fn frequency_scale(&self) -> f64 {
        self.peaks()
            .iter()
            .map(|p| p.center.abs() + p.width)
            .fold(0.0, f64::max)
    }
}

/// Thermal bath replaced by its values at `±omega_mode`: `S = 2mΓ_mΩ(n+1)`
/// above zero frequency and `2mΓ_mΩn` below.
pub fn resonance_thermal_bath(
    damping: f64,
    n_th: f64,
    mass: f64,
    omega_mode: f64,
) -> Result<BathModel> {
    if !(damping > 0.0) || !(n_th >= 0.0) || !(mass > 0.0) || !(omega_mode > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "resonance thermal bath needs Γ_m > 0, n_th >= 0, m > 0, Ω > 0 (got Γ_m={damping}, n_th={n_th})"
        )));
    }
    let unit = 2.0 * mass * damping * omega_mode;
    Ok(BathModel {
        label: format!("thermal(Γ_m={damping}, n_th={n_th}, Ω={omega_mode})"),
        components: vec![BathComponent::ResonanceThermal {
            mass,
            damping,
            emission: unit * (n_th + 1.0),
            absorption: unit * n_th,
            resonance: omega_mode,
        }],
    })
}

/// The `Γ_m → 0` limit of [`resonance_thermal_bath`] at fixed `Γ_m n_th`:
/// symmetric white noise `2mΩ Γ_m n_th` and no damping.
pub fn resonance_thermal_load(load: f64, mass: f64, omega_mode: f64) -> Result<BathModel> {
    if !(load >= 0.0) || !(mass > 0.0) || !(omega_mode > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "thermal load Γ_m n_th must be >= 0, got {load}"
        )));
    }
    let s = 2.0 * mass * omega_mode * load;
    Ok(BathModel {
        label: format!("thermal-load(Γ_m n_th={load}, Ω={omega_mode})"),
        components: vec![BathComponent::ResonanceThermal {
            mass,
            damping: 0.0,
            emission: s,
            absorption: s,
            resonance: omega_mode,
        }],
    })
}

pub fn composite_bath(baths: &[BathModel]) -> Result<BathModel> {
    if baths.is_empty() {
        return Err(Error::InvalidParameter(
            "composite bath needs at least one member".into(),
        ));
    }
    if baths.len() == 1 {
        return Ok(baths[0].clone());
    }
    Ok(BathModel {
        components: baths
            .iter()
            .flat_map(|b| b.components.iter().cloned())
            .collect(),
        label: baths
            .iter()
            .map(BathModel::label)
            .collect::<Vec<_>>()
            .join(" + "),
    })
}

/// Total weight `∫ S(ω) dω / 2π` of a Lorentzian cavity spectrum.
pub fn cavity_spectral_weight(p: &CavityParams) -> f64 {
    p.force_scale_sq()
}
