// SPDX-License-Identifier: Apache-2.0

//! One configuration, one covariance matrix.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use crate::bath::{
    bose_occupation, composite_bath, resonance_thermal_bath, resonance_thermal_load, BathModel,
    CavityParams, OhmicParams, ResponseConvention, TabulatedBath,
};
use crate::closed_forms::{ohmic_t0_mode_variances, optomech_mode_variances, OptomechDerived};
use crate::error::{Error, Result};
use crate::gaussian::{
    covariance_from_mode_variances, CovarianceMatrix, ModeVariances, OscillatorPair,
};
use crate::langevin::{steady_covariance, BathLayout, SystemSpec};
use crate::lindblad::{lindblad_covariance, LindbladRates};

use super::config::{BathConfig, Detuning, Method, RunConfig};

#[derive(Debug, Clone)]
pub struct PointReport {
    pub method: Method,
    pub coupling_rate: f64,
    pub covariance: CovarianceMatrix,
    pub mode_variances: ModeVariances,
    /// Symplectic eigenvalues of the partial transpose, `c1 <= c2`.
    pub pt_eigenvalues: (f64, f64),
    pub log_negativity: f64,
    /// Propagated quadrature error on `E_N` (exact method only).
    pub error_estimate: Option<f64>,
    pub warnings: Vec<String>,
}

impl PointReport {
    fn from_covariance(
        method: Method,
        coupling_rate: f64,
        covariance: CovarianceMatrix,
        error_estimate: Option<f64>,
        warnings: Vec<String>,
    ) -> Result<Self> {
        let pt_eigenvalues = covariance.partial_transpose().symplectic_eigenvalues()?;
        Ok(Self {
            method,
            coupling_rate,
            mode_variances: covariance.mode_variances(),
            log_negativity: covariance.log_negativity()?,
            covariance,
            pt_eigenvalues,
            error_estimate,
            warnings,
        })
    }

    pub fn entangled(&self) -> bool {
        self.pt_eigenvalues.0 < 0.5
    }
}

fn tabulated_cache() -> &'static Mutex<HashMap<PathBuf, Arc<TabulatedBath>>> {
    static CACHE: OnceLock<Mutex<HashMap<PathBuf, Arc<TabulatedBath>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn load_tabulated(path: &Path) -> Result<Arc<TabulatedBath>> {
    if let Some(t) = tabulated_cache().lock().expect("cache poisoned").get(path) {
        return Ok(t.clone());
    }
    let t = Arc::new(TabulatedBath::from_file(path)?);
    tabulated_cache()
        .lock()
        .expect("cache poisoned")
        .insert(path.to_path_buf(), t.clone());
    Ok(t)
}

/// Temperature whose Bose occupation at `omega` is `n`.
fn temperature_for_occupation(n: f64, omega: f64) -> Result<f64> {
    if !(n >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "n_th must be >= 0, got {n}"
        )));
    }
    Ok(if n == 0.0 {
        0.0
    } else {
        omega / (1.0 + 1.0 / n).ln()
    })
}

struct Resolved {
    pair: OscillatorPair,
    coupling_rate: f64,
}

fn resolve_pair(cfg: &RunConfig) -> Result<Resolved> {
    let s = &cfg.system;
    let coupling_rate = s.coupling_rate()?;
    Ok(Resolved {
        pair: OscillatorPair::symmetric(s.mass, s.omega, coupling_rate)?,
        coupling_rate,
    })
}

/// Cavity parameters seen by the mode at `omega_mode`.
fn cavity_for_mode(cfg: &RunConfig, omega_mode: f64) -> Result<(CavityParams, f64, Option<f64>)> {
    let BathConfig::Cavity {
        gamma_opt,
        g,
        kappa,
        detuning,
        gamma_m_n_th,
        gamma_m,
    } = &cfg.bath
    else {
        unreachable!("cavity_for_mode on a non-cavity bath")
    };
    let (m, w0) = (cfg.system.mass, cfg.system.omega);
    let delta = match detuning {
        Detuning::Fixed(d) => *d,
        Detuning::Named(_) => -omega_mode,
    };
    let p = match (gamma_opt, g) {
        (Some(rate), _) => CavityParams::from_cooling_rate(*rate, *kappa, delta, m, w0)?,
        (None, Some(g)) => CavityParams::for_oscillator(*g, *kappa, delta, m, w0)?,
        (None, None) => unreachable!("validated config"),
    };
    if !(*gamma_m_n_th >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma_m_n_th must be >= 0, got {gamma_m_n_th}"
        )));
    }
    Ok((p, *gamma_m_n_th, *gamma_m))
}

fn ohmic_params(cfg: &RunConfig) -> Result<OhmicParams> {
    let BathConfig::Ohmic {
        gamma_m,
        omega_c,
        temperature,
        n_th,
    } = &cfg.bath
    else {
        unreachable!("ohmic_params on a non-ohmic bath")
    };
    let t = match (temperature, n_th) {
        (Some(t), _) => *t,
        (None, Some(n)) => temperature_for_occupation(*n, cfg.system.omega)?,
        (None, None) => 0.0,
    };
    OhmicParams::new(cfg.system.mass, *gamma_m, *omega_c, t)
}

/// The Langevin problem described by `cfg`; `None` for an isolated pair.
pub fn exact_spec(cfg: &RunConfig, convention: ResponseConvention) -> Result<Option<SystemSpec>> {
    let r = resolve_pair(cfg)?;
    let spec = match &cfg.bath {
        BathConfig::None { .. } => return Ok(None),
        BathConfig::Ohmic { .. } => {
            SystemSpec::symmetric(r.pair, BathModel::ohmic(ohmic_params(cfg)?))?
        }
        BathConfig::Cavity { .. } => {
            let modes = r.pair.mode_frequencies();
            let mode_bath = |w: f64| -> Result<BathModel> {
                let (p, load, gamma_m) = cavity_for_mode(cfg, w)?;
                let mut parts = vec![BathModel::cavity(p)];
                match gamma_m {
                    Some(gm) => {
                        parts.push(resonance_thermal_bath(gm, load / gm, cfg.system.mass, w)?)
                    }
                    None if load > 0.0 => {
                        parts.push(resonance_thermal_load(load, cfg.system.mass, w)?)
                    }
                    None => {}
                }
                composite_bath(&parts)
            };
            SystemSpec::new(
                r.pair,
                BathLayout::NormalModes {
                    plus: mode_bath(modes.plus)?,
                    minus: mode_bath(modes.minus)?,
                },
            )?
        }
        BathConfig::Tabulated { path } => {
            SystemSpec::symmetric(r.pair, BathModel::tabulated(load_tabulated(path)?))?
        }
    };
    Ok(Some(spec.with_convention(convention)))
}

fn isolated_pair(cfg: &RunConfig, method: Method, r: &Resolved) -> Result<PointReport> {
    let BathConfig::None { n_th } = cfg.bath else {
        unreachable!()
    };
    if !(n_th >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "n_th must be >= 0, got {n_th}"
        )));
    }
    let mv = ModeVariances::thermal(r.pair.mass_a, r.pair.mode_frequencies(), n_th, n_th);
    PointReport::from_covariance(
        method,
        r.coupling_rate,
        covariance_from_mode_variances(&mv),
        None,
        Vec::new(),
    )
}

pub fn evaluate(cfg: &RunConfig, method: Method) -> Result<PointReport> {
    evaluate_with(cfg, method, ResponseConvention::Retarded)
}

pub fn evaluate_with(
    cfg: &RunConfig,
    method: Method,
    convention: ResponseConvention,
) -> Result<PointReport> {
    let r = resolve_pair(cfg)?;
    if matches!(cfg.bath, BathConfig::None { .. }) {
        return isolated_pair(cfg, method, &r);
    }
    let mut warnings = Vec::new();
    match &cfg.bath {
        BathConfig::Ohmic { .. } => {
            warnings.extend(ohmic_params(cfg)?.regime_warnings(cfg.system.omega))
        }
        BathConfig::Cavity { .. } => {
            let (p, load, _) = cavity_for_mode(cfg, cfg.system.omega)?;
            if let Ok(d) = OptomechDerived::from_cavity(&p, cfg.system.omega, load) {
                warnings.extend(d.regime_warnings(p.coupling, cfg.system.omega));
            }
        }
        _ => {}
    }
    match method {
        Method::Exact => {
            let spec = exact_spec(cfg, convention)?.expect("bath present");
            let ss = steady_covariance(&spec, &cfg.quadrature.settings())?;
            let (_, err) = ss.log_negativity_with_error()?;
            PointReport::from_covariance(
                method,
                r.coupling_rate,
                ss.covariance,
                Some(err),
                warnings,
            )
        }
        Method::Lindblad => {
            let modes = r.pair.mode_frequencies();
            let rates = LindbladRates::new(&r.pair)?;
            let rates = match &cfg.bath {
                BathConfig::Ohmic { .. } => {
                    let p = ohmic_params(cfg)?;
                    rates.with_thermal(
                        p.damping,
                        bose_occupation(modes.plus, p.temperature),
                        bose_occupation(modes.minus, p.temperature),
                    )?
                }
                BathConfig::Cavity { .. } => {
                    let (pp, load, gamma_m) = cavity_for_mode(cfg, modes.plus)?;
                    let (pm, _, _) = cavity_for_mode(cfg, modes.minus)?;
                    let rates = match gamma_m {
                        Some(gm) => rates.with_thermal(gm, load / gm, load / gm)?,
                        None => rates.with_thermal_load(load)?,
                    };
                    rates.with_cavity(&pp, &pm, cfg.system.omega)?
                }
                BathConfig::Tabulated { .. } => {
                    return Err(Error::InvalidParameter(
                        "the lindblad method does not support tabulated baths".into(),
                    ))
                }
                BathConfig::None { .. } => unreachable!(),
            };
            PointReport::from_covariance(
                method,
                r.coupling_rate,
                lindblad_covariance(&rates)?,
                None,
                warnings,
            )
        }
        Method::ClosedForm => {
            let mv = match &cfg.bath {
                BathConfig::Ohmic { .. } => {
                    let p = ohmic_params(cfg)?;
                    if p.temperature > 0.0 {
                        return Err(Error::InvalidParameter(
                            "closed-form ohmic variances exist only at T = 0; use the exact method"
                                .into(),
                        ));
                    }
                    ohmic_t0_mode_variances(&r.pair, &p)?
                }
                BathConfig::Cavity { .. } => {
                    let modes = r.pair.mode_frequencies();
                    let (pp, load, _) = cavity_for_mode(cfg, modes.plus)?;
                    let (pm, _, _) = cavity_for_mode(cfg, modes.minus)?;
                    let plus = OptomechDerived::from_cavity(&pp, modes.plus, load)?;
                    let minus = OptomechDerived::from_cavity(&pm, modes.minus, load)?;
                    optomech_mode_variances(&r.pair, &plus, &minus, pp.coupling)?
                }
                BathConfig::Tabulated { .. } => {
                    return Err(Error::InvalidParameter(
                        "no closed form exists for tabulated baths".into(),
                    ))
                }
                BathConfig::None { .. } => unreachable!(),
            };
            PointReport::from_covariance(
                method,
                r.coupling_rate,
                covariance_from_mode_variances(&mv),
                None,
                warnings,
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> RunConfig {
        RunConfig::from_json(text).unwrap()
    }

    #[test]
    fn isolated_pair_examples() {
        let c = cfg(r#"{"system": {"G": 0.2}}"#);
        for m in [Method::ClosedForm, Method::Exact, Method::Lindblad] {
            let r = evaluate(&c, m).unwrap();
            assert!((r.log_negativity - 0.2120).abs() < 1e-4);
        }
    }

    #[test]
    fn lindblad_ohmic_ground_state_is_not_reduced() {
        let c = cfg(
            r#"{"system": {"G": 0.2}, "bath": {"kind": "ohmic", "gamma_m": 0.1, "omega_c": 10, "T": 0}}"#,
        );
        let r = evaluate(&c, Method::Lindblad).unwrap();
        assert!((r.log_negativity - 0.211_999_226_638_737_5).abs() < 1e-10);
        assert!(evaluate(&c.with_param("T", 0.1).unwrap(), Method::ClosedForm).is_err());
    }

    #[test]
    fn occupation_to_temperature() {
        let t = temperature_for_occupation(0.5, 1.0).unwrap();
        assert!((bose_occupation(1.0, t) - 0.5).abs() < 1e-12);
        assert_eq!(temperature_for_occupation(0.0, 1.0).unwrap(), 0.0);
    }
}
