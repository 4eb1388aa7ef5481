// SPDX-License-Identifier: Apache-2.0

//! Parameter grids, boundary search and CSV output.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::config::{Method, RunConfig};
use super::evaluate::{evaluate, PointReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    Ok,
    Tolerance,
    Unstable,
    NoBracket,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ok => "ok",
            Self::Tolerance => "tolerance",
            Self::Unstable => "unstable",
            Self::NoBracket => "no-bracket",
        }
    }

    pub fn from_error(e: &Error) -> Self {
        match e {
            Error::ToleranceNotMet { .. } | Error::GridTooCoarse(_) => Self::Tolerance,
            Error::NoBracket(_) => Self::NoBracket,
            _ => Self::Unstable,
        }
    }
}

/// Grid points in row-major order (first axis slowest) with their configs.
pub fn expand_grid(cfg: &RunConfig) -> Result<Vec<(Vec<f64>, RunConfig)>> {
    let mut points = vec![(Vec::new(), cfg.clone())];
    for axis in &cfg.sweep {
        let values = axis.values();
        let mut next = Vec::with_capacity(points.len() * values.len());
        for (coords, c) in &points {
            for v in &values {
                let mut coords = coords.clone();
                coords.push(*v);
                next.push((coords, c.with_param(&axis.param, *v)?));
            }
        }
        points = next;
    }
    Ok(points)
}

fn run_parallel<T, F>(
    items: &[(Vec<f64>, RunConfig)],
    workers: Option<usize>,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&RunConfig) -> T + Sync + Send,
{
    let work = || items.par_iter().map(|(_, c)| f(c)).collect::<Vec<T>>();
    match workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

#[derive(Debug)]
pub struct SweepRow {
    pub coords: Vec<f64>,
    pub report: Option<PointReport>,
    pub flag: Flag,
    pub message: Option<String>,
}

#[derive(Debug)]
pub struct SweepTable {
    pub axes: Vec<String>,
    pub rows: Vec<SweepRow>,
}

pub fn run_sweep(cfg: &RunConfig, method: Method, workers: Option<usize>) -> Result<SweepTable> {
    let points = expand_grid(cfg)?;
    let results = run_parallel(&points, workers, |c| evaluate(c, method))?;
    let mut rows = Vec::with_capacity(points.len());
    for ((coords, _), res) in points.into_iter().zip(results) {
        rows.push(match res {
            Ok(report) => SweepRow {
                coords,
                report: Some(report),
                flag: Flag::Ok,
                message: None,
            },
            Err(e) if e.is_config() => return Err(e),
            Err(e) => SweepRow {
                coords,
                report: None,
                flag: Flag::from_error(&e),
                message: Some(e.to_string()),
            },
        });
    }
    Ok(SweepTable {
        axes: cfg.sweep.iter().map(|a| a.param.clone()).collect(),
        rows,
    })
}

pub const SWEEP_COLUMNS: &[&str] = &[
    "E_N",
    "c1",
    "c2",
    "eta_plus_sq",
    "eta_minus_sq",
    "pi_plus_sq",
    "pi_minus_sq",
    "en_error",
    "flag",
];

fn header(axes: &[String], columns: &[&str]) -> String {
    let mut h: Vec<&str> = axes.iter().map(String::as_str).collect();
    h.extend_from_slice(columns);
    h.join(",")
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = header(&self.axes, SWEEP_COLUMNS);
        out.push('\n');
        for row in &self.rows {
            let mut fields: Vec<String> = row.coords.iter().map(f64::to_string).collect();
            match &row.report {
                Some(r) => {
                    let mv = &r.mode_variances;
                    fields.extend(
                        [
                            r.log_negativity,
                            r.pt_eigenvalues.0,
                            r.pt_eigenvalues.1,
                            mv.eta_plus_sq,
                            mv.eta_minus_sq,
                            mv.pi_plus_sq,
                            mv.pi_minus_sq,
                        ]
                        .map(|x| x.to_string()),
                    );
                    fields.push(opt(r.error_estimate));
                }
                None => fields.extend(std::iter::repeat_n(String::new(), 8)),
            }
            fields.push(row.flag.as_str().into());
            let _ = writeln!(out, "{}", fields.join(","));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GminOutcome {
    pub g_min: f64,
    pub en_at_gmin: f64,
    /// `E_N` at `1.01·G_min`.
    pub en_above: f64,
    /// `E_N(G_min) <= en_tol` and `E_N(1.01·G_min) > 0`.
    pub verified: bool,
    pub evaluations: usize,
}

const MAX_EXPANSIONS: usize = 8;

/// Smallest coupling rate with `c1 < 1/2`, by bisection to `cfg.gmin.tol`.
/// The returned value lies on the entangled side of the boundary.
pub fn find_gmin(cfg: &RunConfig, method: Method) -> Result<GminOutcome> {
    let mut evaluations = 0;
    let mut at = |g: f64| -> Result<PointReport> {
        evaluations += 1;
        evaluate(&cfg.with_param("G", g)?, method)
    };
    let (mut lo, mut hi) = (cfg.gmin.lo, cfg.gmin.hi);
    if at(lo)?.entangled() {
        return Err(Error::NoBracket(lo));
    }
    let mut bracketed = false;
    for _ in 0..=MAX_EXPANSIONS {
        if at(hi)?.entangled() {
            bracketed = true;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if !bracketed {
        return Err(Error::NoBracket(lo));
    }
    while hi - lo > cfg.gmin.tol {
        let mid = 0.5 * (lo + hi);
        if at(mid)?.entangled() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let en_at_gmin = at(hi)?.log_negativity;
    let en_above = at(1.01 * hi)?.log_negativity;
    Ok(GminOutcome {
        g_min: hi,
        en_at_gmin,
        en_above,
        verified: en_at_gmin <= cfg.gmin.en_tol && en_above > 0.0,
        evaluations,
    })
}

#[derive(Debug)]
pub struct BoundaryPoint {
    pub coords: Vec<f64>,
    pub outcome: Option<GminOutcome>,
    pub flag: Flag,
    pub message: Option<String>,
}

#[derive(Debug)]
pub struct BoundaryCurve {
    pub axes: Vec<String>,
    pub points: Vec<BoundaryPoint>,
}

pub fn run_gmin(cfg: &RunConfig, method: Method, workers: Option<usize>) -> Result<BoundaryCurve> {
    let points = expand_grid(cfg)?;
    let results = run_parallel(&points, workers, |c| find_gmin(c, method))?;
    let mut out = Vec::with_capacity(points.len());
    for ((coords, _), res) in points.into_iter().zip(results) {
        out.push(match res {
            Ok(o) => {
                let flag = if o.verified {
                    Flag::Ok
                } else {
                    Flag::Tolerance
                };
                BoundaryPoint {
                    coords,
                    outcome: Some(o),
                    flag,
                    message: None,
                }
            }
            Err(e) if e.is_config() => return Err(e),
            Err(e) => BoundaryPoint {
                coords,
                outcome: None,
                flag: Flag::from_error(&e),
                message: Some(e.to_string()),
            },
        });
    }
    Ok(BoundaryCurve {
        axes: cfg.sweep.iter().map(|a| a.param.clone()).collect(),
        points: out,
    })
}

pub const GMIN_COLUMNS: &[&str] = &["G_min", "E_N_at_G_min", "E_N_above", "flag"];

impl BoundaryCurve {
    pub fn to_csv(&self) -> String {
        let mut out = header(&self.axes, GMIN_COLUMNS);
        out.push('\n');
        for p in &self.points {
            let mut fields: Vec<String> = p.coords.iter().map(f64::to_string).collect();
            let o = p.outcome.as_ref();
            fields.push(opt(o.map(|o| o.g_min)));
            fields.push(opt(o.map(|o| o.en_at_gmin)));
            fields.push(opt(o.map(|o| o.en_above)));
            fields.push(p.flag.as_str().into());
            let _ = writeln!(out, "{}", fields.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_row_major() {
        let cfg = RunConfig::from_json(
            r#"{"system": {"G": 0.1}, "sweep": [
                {"param": "G", "min": 0.1, "max": 0.2, "count": 2},
                {"param": "n_th", "min": 0, "max": 1, "count": 3}]}"#,
        )
        .unwrap();
        let coords: Vec<Vec<f64>> = expand_grid(&cfg)
            .unwrap()
            .into_iter()
            .map(|(c, _)| c)
            .collect();
        assert_eq!(
            coords,
            vec![
                vec![0.1, 0.0],
                vec![0.1, 0.5],
                vec![0.1, 1.0],
                vec![0.2, 0.0],
                vec![0.2, 0.5],
                vec![0.2, 1.0]
            ]
        );
    }

    #[test]
    fn csv_layout() {
        let cfg = RunConfig::from_json(
            r#"{"system": {"G": 0.2}, "sweep": [{"param": "n_th", "min": 0, "max": 0.2, "count": 3}]}"#,
        )
        .unwrap();
        let csv = run_sweep(&cfg, Method::ClosedForm, Some(2))
            .unwrap()
            .to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "n_th,E_N,c1,c2,eta_plus_sq,eta_minus_sq,pi_plus_sq,pi_minus_sq,en_error,flag"
        );
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,0.21199922663873"));
        assert!(lines[3].ends_with(",ok"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn isolated_pair_boundary() {
        let cfg = RunConfig::from_json(r#"{"system": {"G": 0.2}, "bath": {"kind": "none", "n_th": 0.1}, "gmin": {"tol": 1e-8}}"#)
            .unwrap();
        let o = find_gmin(&cfg, Method::ClosedForm).unwrap();
        assert!(o.verified);
        let n = crate::closed_forms::threshold_occupation(o.g_min, 1.0).unwrap();
        assert!((n - 0.1).abs() < 1e-6, "{n}");
    }

    #[test]
    fn flags_from_errors() {
        assert_eq!(Flag::from_error(&Error::NoBracket(1.0)), Flag::NoBracket);
        assert_eq!(
            Flag::from_error(&Error::GridTooCoarse(1.0)),
            Flag::Tolerance
        );
        assert_eq!(
            Flag::from_error(&Error::Unstable("x".into())),
            Flag::Unstable
        );
    }
}
