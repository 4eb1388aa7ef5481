// SPDX-License-Identifier: Apache-2.0

use osc_entanglement::sweeps::{find_gmin, run_gmin, run_sweep, Flag, Method, RunConfig};

fn config(text: &str) -> RunConfig {
    RunConfig::from_json(text).unwrap()
}

#[test]
fn entanglement_peaks_at_intermediate_cooling_rate() {
    let cfg = config(
        r#"{"system": {"G": 0.02}, "bath": {"kind": "cavity", "gamma_opt": 0.01, "kappa": 0.067, "gamma_m_n_th": 1e-4},
            "sweep": [{"param": "G", "min": 0.02, "max": 0.04, "count": 3},
                      {"param": "gamma_opt", "min": 0.002, "max": 0.5, "count": 12, "scale": "log"}]}"#,
    );
    let table = run_sweep(&cfg, Method::Exact, None).unwrap();
    assert_eq!(table.rows.len(), 36);
    for row in table.rows.chunks(12) {
        let en: Vec<f64> = row
            .iter()
            .map(|r| r.report.as_ref().unwrap().log_negativity)
            .collect();
        let imax = (0..en.len())
            .max_by(|a, b| en[*a].total_cmp(&en[*b]))
            .unwrap();
        assert!(
            imax > 0 && imax < en.len() - 1,
            "G={}: {en:?}",
            row[0].coords[0]
        );
        assert!(en[imax] > en[0] && en[imax] > en[11]);
    }
}

#[test]
fn isolated_pair_loses_entanglement_with_occupation() {
    let cfg = config(
        r#"{"system": {"G": 0.2}, "sweep": [{"param": "n_th", "min": 0, "max": 0.3, "count": 31}]}"#,
    );
    let table = run_sweep(&cfg, Method::Exact, Some(2)).unwrap();
    let en: Vec<f64> = table
        .rows
        .iter()
        .map(|r| r.report.as_ref().unwrap().log_negativity)
        .collect();
    assert!(en.windows(2).all(|w| w[1] <= w[0]));
    assert!(en[0] > 0.2 && en[30] == 0.0);
    for r in &table.rows {
        let rep = r.report.as_ref().unwrap();
        assert_eq!(rep.log_negativity > 0.0, rep.pt_eigenvalues.0 < 0.5);
    }
}

#[test]
fn ohmic_reduction_grows_quadratically_in_temperature() {
    let cfg = config(
        r#"{"system": {"G": 0.2}, "bath": {"kind": "ohmic", "gamma_m": 0.1, "omega_c": 10, "T": 0},
            "quadrature": {"rel_tol": 1e-10},
            "sweep": [{"param": "T", "min": 0.01, "max": 0.1, "count": 2, "scale": "log"}]}"#,
    );
    let base = osc_entanglement::sweeps::evaluate(&cfg, Method::Exact)
        .unwrap()
        .log_negativity;
    let table = run_sweep(&cfg, Method::Exact, None).unwrap();
    let d: Vec<f64> = table
        .rows
        .iter()
        .map(|r| base - r.report.as_ref().unwrap().log_negativity)
        .collect();
    let slope = (d[1] / d[0]).ln() / 10f64.ln();
    assert!((slope - 2.0).abs() <= 0.2, "{slope}");
}

#[test]
fn ohmic_threshold_within_cutoff_law_band() {
    // the bisection result is checked against itself rather than the
    // asymptotic law, which is off by O(Ω/ω_c) at this cutoff
    let cfg = config(
        r#"{"system": {"G": 0.2}, "bath": {"kind": "ohmic", "gamma_m": 0.1, "omega_c": 10, "T": 0}}"#,
    );
    let o = find_gmin(&cfg, Method::Exact).unwrap();
    assert!(o.verified);
    assert!(
        o.g_min > 0.0415 * 0.85 && o.g_min < 0.0415 * 1.3,
        "{}",
        o.g_min
    );
    let below = osc_entanglement::sweeps::evaluate(
        &cfg.with_param("G", o.g_min - 2e-4).unwrap(),
        Method::Exact,
    )
    .unwrap();
    assert_eq!(below.log_negativity, 0.0);
}

#[test]
fn markovian_boundary_misses_strong_drive_upturn() {
    let cfg = config(
        r#"{"system": {"G": 0.05}, "bath": {"kind": "cavity", "gamma_opt": 0.01, "kappa": 0.067, "gamma_m_n_th": 1e-4},
            "sweep": [{"param": "gamma_opt", "min": 0.003, "max": 0.5, "count": 10, "scale": "log"}]}"#,
    );
    let exact = run_gmin(&cfg, Method::Exact, None).unwrap();
    let markov = run_gmin(&cfg, Method::Lindblad, None).unwrap();
    let g = |c: &osc_entanglement::sweeps::BoundaryCurve| -> Vec<f64> {
        c.points
            .iter()
            .map(|p| p.outcome.as_ref().unwrap().g_min)
            .collect()
    };
    let (ge, gm) = (g(&exact), g(&markov));
    assert!(exact.points.iter().all(|p| p.flag == Flag::Ok));
    // exact curve turns up, the Lindblad curve keeps falling
    let imin = (0..ge.len())
        .min_by(|a, b| ge[*a].total_cmp(&ge[*b]))
        .unwrap();
    assert!(imin > 0 && imin < ge.len() - 1);
    assert!(gm.windows(2).all(|w| w[1] <= w[0] + 1e-4));
    for i in 7..10 {
        assert!(ge[i] >= gm[i], "Γ_opt index {i}: {} < {}", ge[i], gm[i]);
    }
}

#[test]
fn no_bracket_is_flagged() {
    // a hot isolated pair never entangles within the expanded bracket
    let cfg = config(
        r#"{"system": {"G": 0.05}, "bath": {"kind": "none", "n_th": 50},
            "gmin": {"hi": 0.001},
            "sweep": [{"param": "n_th", "min": 10, "max": 50, "count": 2}]}"#,
    );
    let curve = run_gmin(&cfg, Method::ClosedForm, Some(1)).unwrap();
    assert!(curve.points.iter().all(|p| p.flag == Flag::NoBracket));
    assert!(curve
        .to_csv()
        .lines()
        .nth(1)
        .unwrap()
        .ends_with(",,,,no-bracket"));
}
