// SPDX-License-Identifier: Apache-2.0

use nalgebra::Matrix4;
use proptest::prelude::*;

use osc_entanglement::bath::{
    bose_occupation, cavity_response, cavity_spectrum, kk_response, ohmic_response, ohmic_spectrum,
    CavityParams, KkSettings, OhmicParams,
};
use osc_entanglement::gaussian::{
    covariance_from_mode_variances, CovarianceMatrix, ModeVariances, OscillatorPair,
};
use osc_entanglement::lindblad::{lindblad_covariance, LindbladRates};

fn mode_variances() -> impl Strategy<Value = (f64, ModeVariances)> {
    (
        0.0..0.45f64,
        0.0..3.0f64,
        0.0..3.0f64,
        0.2..5.0f64,
        0.2..5.0f64,
    )
        .prop_map(|(g, n1, n2, s1, s2)| {
            let modes = OscillatorPair::symmetric(1.0, 1.0, g)
                .unwrap()
                .mode_frequencies();
            let t = ModeVariances::thermal(1.0, modes, n1, n2);
            let mv = ModeVariances::new(
                t.eta_plus_sq * s1,
                t.eta_minus_sq * s2,
                t.pi_plus_sq / s1,
                t.pi_minus_sq / s2,
            );
            (g, mv.unwrap())
        })
}

proptest! {
    #[test]
    fn shortcut_matches_general_symplectic_spectrum((_, mv) in mode_variances()) {
        let (a, b) = mv.pt_symplectic_pair();
        let (c1, c2) = covariance_from_mode_variances(&mv).partial_transpose().symplectic_eigenvalues().unwrap();
        prop_assert!((c1 - a.min(b)).abs() <= 1e-10 * c1);
        prop_assert!((c2 - a.max(b)).abs() <= 1e-10 * c2);
    }

    #[test]
    fn mode_variance_states_are_physical((_, mv) in mode_variances()) {
        let cov = covariance_from_mode_variances(&mv);
        prop_assert!(cov.is_physical());
        let (c1, _) = cov.symplectic_eigenvalues().unwrap();
        prop_assert!(c1 >= 0.5 * (1.0 - 1e-12));
    }

    #[test]
    fn log_negativity_is_local_symplectic_invariant((_, mv) in mode_variances(), r in 0.3..3.0f64) {
        // equal local squeezing of both oscillators
        let cov = covariance_from_mode_variances(&mv);
        let s = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0 / r, r, 1.0 / r, r));
        let squeezed = CovarianceMatrix::new(s * cov.matrix() * s).unwrap();
        let (a, b) = (cov.log_negativity().unwrap(), squeezed.log_negativity().unwrap());
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }

    #[test]
    fn partial_transpose_is_involution((_, mv) in mode_variances()) {
        let cov = covariance_from_mode_variances(&mv);
        prop_assert_eq!(cov.partial_transpose().partial_transpose(), cov);
    }

    #[test]
    fn cavity_response_obeys_kramers_kronig(
        g in 0.005..0.1f64, kappa in 0.02..0.3f64, w in -5.0..5.0f64,
    ) {
        let p = CavityParams::new(g, kappa, -1.0, 0.7).unwrap();
        let settings = KkSettings::new(vec![1.0 - kappa / 2.0, 1.0, 1.0 + kappa / 2.0], 10.0);
        let kk = kk_response(|x| cavity_spectrum(x, &p), w, &settings).unwrap();
        let exact = cavity_response(w, &p);
        prop_assert!((kk - exact).norm() <= 1e-3 * exact.norm());
    }

    #[test]
    fn ohmic_response_obeys_kramers_kronig_up_to_offset(
        damping in 0.01..0.3f64, cutoff in 3.0..30.0f64, t in 0.0..1.0f64, w in 0.01..20.0f64,
    ) {
        let p = OhmicParams::new(1.0, damping, cutoff, t).unwrap();
        let settings = KkSettings::new(vec![t, cutoff], 10.0 * cutoff);
        let kk = kk_response(|x| ohmic_spectrum(x, &p), w, &settings).unwrap() + damping * cutoff;
        let exact = ohmic_response(w, &p);
        prop_assert!((kk - exact).norm() <= 1e-3 * exact.norm());
    }

    #[test]
    fn ohmic_spectrum_detailed_balance(damping in 0.01..0.3f64, t in 0.05..2.0f64, w in 0.01..5.0f64) {
        let p = OhmicParams::new(1.0, damping, 10.0, t).unwrap();
        let n = bose_occupation(w, t);
        let ratio = ohmic_spectrum(-w, &p) / ohmic_spectrum(w, &p);
        prop_assert!((ratio - n / (n + 1.0)).abs() <= 1e-12 * ratio.max(1e-300));
    }

    #[test]
    fn lindblad_thermal_state_is_physical(g in 0.0..0.45f64, damping in 1e-4..0.5f64, n1 in 0.0..5.0f64, n2 in 0.0..5.0f64) {
        let pair = OscillatorPair::symmetric(1.0, 1.0, g).unwrap();
        let cov = lindblad_covariance(&LindbladRates::new(&pair).unwrap().with_thermal(damping, n1, n2).unwrap()).unwrap();
        prop_assert!(cov.is_physical());
        let exact = covariance_from_mode_variances(&ModeVariances::thermal(1.0, pair.mode_frequencies(), n1, n2));
        prop_assert!((cov.matrix() - exact.matrix()).amax() <= 1e-9 * exact.matrix().amax());
    }
}
