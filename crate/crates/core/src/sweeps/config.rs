// SPDX-License-Identifier: Apache-2.0

//! JSON run configuration. All quantities are in units of the bare
//! oscillator frequency, with `Ω = m = 1` unless overridden.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::langevin::QuadratureSettings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Lindblad,
    ClosedForm,
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Self::Exact),
            "lindblad" => Ok(Self::Lindblad),
            "closed-form" => Ok(Self::ClosedForm),
            other => Err(format!(
                "unknown method `{other}` (exact | lindblad | closed-form)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(default = "one")]
    pub omega: f64,
    #[serde(default = "one")]
    pub mass: f64,
    /// Coupling rate `G = k/2mΩ`.
    #[serde(rename = "G")]
    pub coupling_rate: Option<f64>,
    /// Spring constant `k`.
    pub k: Option<f64>,
}

fn one() -> f64 {
    1.0
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            omega: 1.0,
            mass: 1.0,
            coupling_rate: None,
            k: None,
        }
    }
}

impl SystemConfig {
    pub fn coupling_rate(&self) -> Result<f64> {
        match (self.coupling_rate, self.k) {
            (Some(g), None) => Ok(g),
            (None, Some(k)) => Ok(k / (2.0 * self.mass * self.omega)),
            (None, None) => Err(Error::InvalidParameter(
                "system: one of `G` or `k` is required".into(),
            )),
            (Some(_), Some(_)) => Err(Error::InvalidParameter(
                "system: give `G` or `k`, not both".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Detuning {
    Named(String),
    Fixed(f64),
}

impl Default for Detuning {
    fn default() -> Self {
        Self::Named("optimal".into())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BathConfig {
    None {
        #[serde(default)]
        n_th: f64,
    },
    Ohmic {
        gamma_m: f64,
        omega_c: f64,
        #[serde(rename = "T")]
        temperature: Option<f64>,
        /// Occupation at the bare frequency, converted to a temperature.
        n_th: Option<f64>,
    },
    Cavity {
        gamma_opt: Option<f64>,
        g: Option<f64>,
        kappa: f64,
        #[serde(default)]
        detuning: Detuning,
        #[serde(default)]
        gamma_m_n_th: f64,
        /// Finite intrinsic damping; without it the thermal bath enters only
        /// through the product `Γ_m n_th`.
        gamma_m: Option<f64>,
    },
    Tabulated {
        path: PathBuf,
    },
}

impl Default for BathConfig {
    fn default() -> Self {
        Self::None { n_th: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub peak_pad: Option<f64>,
    pub tail_cut: Option<f64>,
}

impl QuadratureConfig {
    pub fn settings(&self) -> QuadratureSettings {
        let d = QuadratureSettings::default();
        QuadratureSettings {
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            max_subdivisions: self.max_subdivisions.unwrap_or(d.max_subdivisions),
            tail_cut: self.tail_cut.or(d.tail_cut),
            peak_pad: self.peak_pad.unwrap_or(d.peak_pad),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Lin,
    Log,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Lin => self.min + t * (self.max - self.min),
                    Scale::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GminConfig {
    #[serde(default)]
    pub lo: f64,
    #[serde(default = "default_hi")]
    pub hi: f64,
    #[serde(default = "default_g_tol")]
    pub tol: f64,
    #[serde(default = "default_en_tol")]
    pub en_tol: f64,
}

fn default_hi() -> f64 {
    0.1
}
fn default_g_tol() -> f64 {
    1e-4
}
fn default_en_tol() -> f64 {
    1e-3
}

impl Default for GminConfig {
    fn default() -> Self {
        Self {
            lo: 0.0,
            hi: default_hi(),
            tol: default_g_tol(),
            en_tol: default_en_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub system: SystemConfig,
    #[serde(default)]
    pub bath: BathConfig,
    pub method: Option<Method>,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub sweep: Vec<Axis>,
    #[serde(default)]
    pub gmin: GminConfig,
}

/// Names accepted in sweep axes.
pub const PARAMETERS: &[&str] = &[
    "G",
    "k",
    "n_th",
    "gamma_m",
    "omega_c",
    "T",
    "gamma_opt",
    "g",
    "kappa",
    "detuning",
    "gamma_m_n_th",
];

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        // tabulated paths are relative to the config file
        if let BathConfig::Tabulated { path: p } = &mut cfg.bath {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn method(&self) -> Method {
        self.method.unwrap_or(Method::Exact)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.system.omega > 0.0) || !(self.system.mass > 0.0) {
            return Err(Error::InvalidParameter(
                "system: omega and mass must be positive".into(),
            ));
        }
        if self.sweep.len() > 2 {
            return Err(Error::InvalidParameter("sweep: at most two axes".into()));
        }
        for (i, a) in self.sweep.iter().enumerate() {
            if !PARAMETERS.contains(&a.param.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "sweep[{i}].param: unknown parameter `{}` (expected one of {})",
                    a.param,
                    PARAMETERS.join(", ")
                )));
            }
            if a.count < 2 {
                return Err(Error::InvalidParameter(format!(
                    "sweep[{i}].count must be >= 2"
                )));
            }
            if !(a.min.is_finite() && a.max.is_finite())
                || (a.scale == Scale::Log && !(a.min > 0.0 && a.max > 0.0))
            {
                return Err(Error::InvalidParameter(format!(
                    "sweep[{i}]: invalid range [{}, {}]",
                    a.min, a.max
                )));
            }
        }
        if self.sweep.len() == 2 && self.sweep[0].param == self.sweep[1].param {
            return Err(Error::InvalidParameter("sweep: axes must differ".into()));
        }
        let g = &self.gmin;
        if !(g.lo >= 0.0 && g.hi > g.lo && g.tol > 0.0 && g.en_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "gmin: need 0 <= lo < hi, tol > 0, en_tol > 0".into(),
            ));
        }
        if let BathConfig::Cavity {
            gamma_opt,
            g,
            detuning,
            ..
        } = &self.bath
        {
            if gamma_opt.is_some() == g.is_some() {
                return Err(Error::InvalidParameter(
                    "bath: cavity needs exactly one of `gamma_opt` or `g`".into(),
                ));
            }
            if let Detuning::Named(name) = detuning {
                if name != "optimal" {
                    return Err(Error::InvalidParameter(format!(
                        "bath.detuning: expected a number or \"optimal\", got \"{name}\""
                    )));
                }
            }
        }
        if let BathConfig::Ohmic {
            temperature, n_th, ..
        } = &self.bath
        {
            if temperature.is_some() && n_th.is_some() {
                return Err(Error::InvalidParameter(
                    "bath: ohmic takes `T` or `n_th`, not both".into(),
                ));
            }
        }
        self.quadrature.settings().validate()?;
        self.system.coupling_rate()?;
        Ok(())
    }

    /// Copy with one named parameter replaced.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self> {
        let mut c = self.clone();
        let unsupported = || {
            Error::InvalidParameter(format!(
                "parameter `{name}` does not apply to the configured bath"
            ))
        };
        match name {
            "G" => {
                c.system.coupling_rate = Some(value);
                c.system.k = None;
            }
            "k" => {
                c.system.k = Some(value);
                c.system.coupling_rate = None;
            }
            _ => match (&mut c.bath, name) {
                (BathConfig::None { n_th }, "n_th") => *n_th = value,
                (BathConfig::Ohmic { gamma_m, .. }, "gamma_m") => *gamma_m = value,
                (BathConfig::Ohmic { omega_c, .. }, "omega_c") => *omega_c = value,
                (
                    BathConfig::Ohmic {
                        temperature, n_th, ..
                    },
                    "T",
                ) => {
                    *temperature = Some(value);
                    *n_th = None;
                }
                (
                    BathConfig::Ohmic {
                        temperature, n_th, ..
                    },
                    "n_th",
                ) => {
                    *n_th = Some(value);
                    *temperature = None;
                }
                (BathConfig::Cavity { gamma_opt, g, .. }, "gamma_opt") => {
                    *gamma_opt = Some(value);
                    *g = None;
                }
                (BathConfig::Cavity { gamma_opt, g, .. }, "g") => {
                    *g = Some(value);
                    *gamma_opt = None;
                }
                (BathConfig::Cavity { kappa, .. }, "kappa") => *kappa = value,
                (BathConfig::Cavity { detuning, .. }, "detuning") => {
                    *detuning = Detuning::Fixed(value)
                }
                (BathConfig::Cavity { gamma_m_n_th, .. }, "gamma_m_n_th") => *gamma_m_n_th = value,
                (BathConfig::Cavity { gamma_m, .. }, "gamma_m") => *gamma_m = Some(value),
                _ => return Err(unsupported()),
            },
        }
        Ok(c)
    }
}
