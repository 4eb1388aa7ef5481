// SPDX-License-Identifier: Apache-2.0

//! Two-mode Gaussian-state algebra.
//!
//! Phase-space vectors are ordered `R = (p_A, q_A, p_B, q_B)`, momentum first
//! within each oscillator. Most of the Gaussian-state literature orders
//! quadratures as `(q, p)`; every matrix in this crate uses the momentum-first
//! convention, including the symplectic form
//! `σ = ⊕ [[0, -1], [1, 0]]` that encodes `[q, p] = i`.
//!
//! Units are ħ = k_B = 1 throughout.

use nalgebra::{Cholesky, Complex, Matrix4};

use crate::error::{Error, Result};

/// Index of `p_A` in the phase-space ordering.
pub const P_A: usize = 0;
/// Index of `q_A` in the phase-space ordering.
pub const Q_A: usize = 1;
/// Index of `p_B` in the phase-space ordering.
pub const P_B: usize = 2;
/// Index of `q_B` in the phase-space ordering.
pub const Q_B: usize = 3;

const SYMMETRY_TOL: f64 = 1e-12;
const PHYSICALITY_TOL: f64 = 1e-10;

/// Two harmonic oscillators coupled by a spring `k (q_A - q_B)² / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorPair {
    pub mass_a: f64,
    pub mass_b: f64,
    pub omega_a: f64,
    pub omega_b: f64,
    pub spring: f64,
}

/// Undamped normal-mode frequencies. For identical oscillators `plus` is the
/// center-of-mass mode and `minus` the relative mode; otherwise they are the
/// lower and upper eigenfrequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFrequencies {
    pub plus: f64,
    pub minus: f64,
}

impl OscillatorPair {
    pub fn new(mass_a: f64, mass_b: f64, omega_a: f64, omega_b: f64, spring: f64) -> Result<Self> {
        for (name, v) in [
            ("mass_a", mass_a),
            ("mass_b", mass_b),
            ("omega_a", omega_a),
            ("omega_b", omega_b),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(spring >= 0.0 && spring.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "spring constant must be >= 0, got {spring}"
            )));
        }
        Ok(Self {
            mass_a,
            mass_b,
            omega_a,
            omega_b,
            spring,
        })
    }

    /// Identical oscillators coupled at rate `G = k / (2 m Ω)`.
    pub fn symmetric(mass: f64, omega: f64, coupling_rate: f64) -> Result<Self> {
        Self::new(mass, mass, omega, omega, 2.0 * mass * omega * coupling_rate)
    }

    pub fn is_symmetric(&self) -> bool {
        self.mass_a == self.mass_b && self.omega_a == self.omega_b
    }

    /// Coupling rate `G = k / (2 m Ω)`; only defined for identical oscillators.
    pub fn coupling_rate(&self) -> Option<f64> {
        self.is_symmetric()
            .then(|| self.spring / (2.0 * self.mass_a * self.omega_a))
    }

    pub fn mode_frequencies(&self) -> ModeFrequencies {
        if self.is_symmetric() {
            let w = self.omega_a;
            return ModeFrequencies {
                plus: w,
                minus: (w * w + 2.0 * self.spring / self.mass_a).sqrt(),
            };
        }
        // eigenvalues of M^{-1/2} K M^{-1/2}
        let a = self.omega_a * self.omega_a + self.spring / self.mass_a;
        let d = self.omega_b * self.omega_b + self.spring / self.mass_b;
        let b = -self.spring / (self.mass_a * self.mass_b).sqrt();
        let mean = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        ModeFrequencies {
            plus: (mean - disc).sqrt(),
            minus: (mean + disc).sqrt(),
        }
    }
}

/// Symplectic form in the `(p_A, q_A, p_B, q_B)` ordering.
pub fn symplectic_form() -> Matrix4<f64> {
    let mut s = Matrix4::zeros();
    s[(P_A, Q_A)] = -1.0;
    s[(Q_A, P_A)] = 1.0;
    s[(P_B, Q_B)] = -1.0;
    s[(Q_B, P_B)] = 1.0;
    s
}

/// Real symmetric matrix of symmetrized second moments
/// `γ_ij = <{R_i, R_j}> / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(Matrix4<f64>);

impl CovarianceMatrix {
    pub fn new(gamma: Matrix4<f64>) -> Result<Self> {
        check_symmetric(&gamma)?;
        Ok(Self(0.5 * (gamma + gamma.transpose())))
    }

    pub fn vacuum(mass: f64, omega: f64) -> Self {
        Self::thermal(mass, omega, 0.0)
    }

    /// Product of two identical uncoupled thermal oscillators.
    pub fn thermal(mass: f64, omega: f64, occupation: f64) -> Self {
        let s = occupation + 0.5;
        Self(Matrix4::from_diagonal(&nalgebra::Vector4::new(
            s * mass * omega,
            s / (mass * omega),
            s * mass * omega,
            s / (mass * omega),
        )))
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn partial_transpose(&self) -> Self {
        partial_transpose(self)
    }

    pub fn symplectic_eigenvalues(&self) -> Result<(f64, f64)> {
        symplectic_eigenvalues(&self.0)
    }

    pub fn log_negativity(&self) -> Result<f64> {
        log_negativity(self)
    }

    /// Smallest eigenvalue of the Hermitian matrix `γ + iσ/2`; a physical
    /// state has it nonnegative.
    pub fn uncertainty_margin(&self) -> f64 {
        let s = symplectic_form();
        let h = Matrix4::from_fn(|i, j| Complex::new(self.0[(i, j)], 0.5 * s[(i, j)]));
        h.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_physical(&self) -> bool {
        self.uncertainty_margin() >= -PHYSICALITY_TOL
    }

    /// Second moments of `η_± = (q_A ± q_B)/√2`, `π_± = (p_A ± p_B)/√2`.
    pub fn mode_variances(&self) -> ModeVariances {
        let g = &self.0;
        ModeVariances {
            eta_plus_sq: 0.5 * (g[(Q_A, Q_A)] + g[(Q_B, Q_B)]) + g[(Q_A, Q_B)],
            eta_minus_sq: 0.5 * (g[(Q_A, Q_A)] + g[(Q_B, Q_B)]) - g[(Q_A, Q_B)],
            pi_plus_sq: 0.5 * (g[(P_A, P_A)] + g[(P_B, P_B)]) + g[(P_A, P_B)],
            pi_minus_sq: 0.5 * (g[(P_A, P_A)] + g[(P_B, P_B)]) - g[(P_A, P_B)],
        }
    }
}

fn check_symmetric(m: &Matrix4<f64>) -> Result<()> {
    let scale = m.amax();
    if !scale.is_finite() {
        return Err(Error::InvalidParameter(
            "covariance contains non-finite entries".into(),
        ));
    }
    let asym = (m - m.transpose()).amax();
    let rel = if scale > 0.0 { asym / scale } else { 0.0 };
    if rel > SYMMETRY_TOL {
        return Err(Error::NonSymmetricInput(rel));
    }
    Ok(())
}

/// Partial transposition of oscillator A: `p_A → -p_A`.
pub fn partial_transpose(gamma: &CovarianceMatrix) -> CovarianceMatrix {
    let mut g = gamma.0;
    for j in 0..4 {
        if j != P_A {
            g[(P_A, j)] = -g[(P_A, j)];
            g[(j, P_A)] = -g[(j, P_A)];
        }
    }
    CovarianceMatrix(g)
}

/// Symplectic eigenvalues `(c1, c2)`, `c1 <= c2`: the moduli of the
/// eigenvalues of `iσγ`. The input does not have to be a physical state.
pub fn symplectic_eigenvalues(gamma: &Matrix4<f64>) -> Result<(f64, f64)> {
    check_symmetric(gamma)?;
    let g = 0.5 * (gamma + gamma.transpose());
    let det = g.determinant();
    if det < 0.0 {
        return Err(Error::DegenerateMatrix(det));
    }
    let sigma = symplectic_form();
    let mut moduli: Vec<f64> = match Cholesky::new(g) {
        Some(chol) => {
            // σγ is similar to the antisymmetric LᵀσL, whose eigenvalues are ±ic.
            let l = chol.l();
            let k = l.transpose() * sigma * l;
            (k.transpose() * k)
                .symmetric_eigenvalues()
                .iter()
                .map(|e| e.max(0.0).sqrt())
                .collect()
        }
        None => (sigma * g)
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .collect(),
    };
    moduli.sort_by(f64::total_cmp);
    Ok((0.5 * (moduli[0] + moduli[1]), 0.5 * (moduli[2] + moduli[3])))
}

/// Contribution `-log₂(2c)` of one symplectic eigenvalue, zero for `c >= 1/2`.
pub fn negativity_term(c: f64) -> f64 {
    if c < 0.5 {
        -(2.0 * c).log2()
    } else {
        0.0
    }
}

pub fn log_negativity(gamma: &CovarianceMatrix) -> Result<f64> {
    let (c1, c2) = symplectic_eigenvalues(&partial_transpose(gamma).0)?;
    Ok(negativity_term(c1) + negativity_term(c2))
}

/// Second moments of the normal-mode coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeVariances {
    pub eta_plus_sq: f64,
    pub eta_minus_sq: f64,
    pub pi_plus_sq: f64,
    pub pi_minus_sq: f64,
}

impl ModeVariances {
    pub fn new(
        eta_plus_sq: f64,
        eta_minus_sq: f64,
        pi_plus_sq: f64,
        pi_minus_sq: f64,
    ) -> Result<Self> {
        let mv = Self {
            eta_plus_sq,
            eta_minus_sq,
            pi_plus_sq,
            pi_minus_sq,
        };
        if [eta_plus_sq, eta_minus_sq, pi_plus_sq, pi_minus_sq]
            .iter()
            .any(|v| !(*v > 0.0 && v.is_finite()))
        {
            return Err(Error::InvalidParameter(format!(
                "mode variances must be positive: {mv:?}"
            )));
        }
        Ok(mv)
    }

    /// Thermal variances `(2n+1)/2mΩ` and `mΩ(2n+1)/2` of two free modes.
    pub fn thermal(mass: f64, modes: ModeFrequencies, n_plus: f64, n_minus: f64) -> Self {
        Self {
            eta_plus_sq: (2.0 * n_plus + 1.0) / (2.0 * mass * modes.plus),
            eta_minus_sq: (2.0 * n_minus + 1.0) / (2.0 * mass * modes.minus),
            pi_plus_sq: mass * modes.plus * (2.0 * n_plus + 1.0) / 2.0,
            pi_minus_sq: mass * modes.minus * (2.0 * n_minus + 1.0) / 2.0,
        }
    }

    /// Symplectic eigenvalues of the partial transpose in the normal-mode
    /// shortcut: `c1 = sqrt(<η_-²><π_+²>)` (the entangling branch for
    /// attractive coupling) and `c2 = sqrt(<η_+²><π_-²>)`.
    pub fn pt_symplectic_pair(&self) -> (f64, f64) {
        (
            (self.eta_minus_sq * self.pi_plus_sq).sqrt(),
            (self.eta_plus_sq * self.pi_minus_sq).sqrt(),
        )
    }

    pub fn log_negativity(&self) -> f64 {
        let (c1, c2) = self.pt_symplectic_pair();
        negativity_term(c1) + negativity_term(c2)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            eta_plus_sq: s * self.eta_plus_sq,
            eta_minus_sq: s * self.eta_minus_sq,
            pi_plus_sq: s * self.pi_plus_sq,
            pi_minus_sq: s * self.pi_minus_sq,
        }
    }
}

pub fn covariance_from_mode_variances(mv: &ModeVariances) -> CovarianceMatrix {
    let q_diag = 0.5 * (mv.eta_plus_sq + mv.eta_minus_sq);
    let q_cross = 0.5 * (mv.eta_plus_sq - mv.eta_minus_sq);
    let p_diag = 0.5 * (mv.pi_plus_sq + mv.pi_minus_sq);
    let p_cross = 0.5 * (mv.pi_plus_sq - mv.pi_minus_sq);
    let mut g = Matrix4::zeros();
    g[(P_A, P_A)] = p_diag;
    g[(P_B, P_B)] = p_diag;
    g[(P_A, P_B)] = p_cross;
    g[(P_B, P_A)] = p_cross;
    g[(Q_A, Q_A)] = q_diag;
    g[(Q_B, Q_B)] = q_diag;
    g[(Q_A, Q_B)] = q_cross;
    g[(Q_B, Q_A)] = q_cross;
    CovarianceMatrix(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    // ¼ log₂ 1.8: the dissipationless ground state at G = 0.2Ω, where
    // c1 = ½ (Ω/Ω_-)^{1/2} and Ω_-² = 1.8 Ω².
    const EN_G02_GROUND: f64 = 0.211_999_226_638_737_5;

    /// Two-mode invariant formula, used only as an oracle.
    fn invariant_eigenvalues(g: &Matrix4<f64>) -> (f64, f64) {
        let a = g.fixed_view::<2, 2>(0, 0).determinant();
        let b = g.fixed_view::<2, 2>(2, 2).determinant();
        let c = g.fixed_view::<2, 2>(0, 2).determinant();
        let delta = a + b + 2.0 * c;
        let det = g.determinant();
        let root = (delta * delta - 4.0 * det).max(0.0).sqrt();
        (((delta - root) / 2.0).sqrt(), ((delta + root) / 2.0).sqrt())
    }

    #[test]
    fn partial_transpose_examples() {
        let d = CovarianceMatrix::new(Matrix4::from_diagonal(&nalgebra::Vector4::new(
            1.0, 2.0, 3.0, 4.0,
        )))
        .unwrap();
        assert_eq!(partial_transpose(&d), d);

        let mut m = Matrix4::identity();
        m[(P_A, Q_B)] = 0.3;
        m[(Q_B, P_A)] = 0.3;
        let pt = partial_transpose(&CovarianceMatrix::new(m).unwrap());
        assert_eq!(pt.matrix()[(P_A, Q_B)], -0.3);
        assert_eq!(pt.matrix()[(Q_B, P_A)], -0.3);
        assert_eq!(pt.matrix()[(P_A, P_A)], 1.0);

        let g = covariance_from_mode_variances(&ModeVariances::new(0.4, 0.6, 0.7, 0.9).unwrap());
        assert_eq!(partial_transpose(&partial_transpose(&g)), g);
    }

    #[test]
    fn vacuum_and_thermal_eigenvalues() {
        let (c1, c2) = symplectic_eigenvalues(&(0.5 * Matrix4::identity())).unwrap();
        assert!((c1 - 0.5).abs() < 1e-14 && (c2 - 0.5).abs() < 1e-14);
        let (c1, c2) = symplectic_eigenvalues(&(1.5 * Matrix4::identity())).unwrap();
        assert!((c1 - 1.5).abs() < 1e-14 && (c2 - 1.5).abs() < 1e-14);
        assert_eq!(
            CovarianceMatrix::vacuum(1.0, 1.0).log_negativity().unwrap(),
            0.0
        );
    }

    #[test]
    fn rejects_asymmetric_and_negative_determinant() {
        let mut m = Matrix4::identity();
        m[(0, 1)] = 1e-6;
        assert!(matches!(
            symplectic_eigenvalues(&m),
            Err(Error::NonSymmetricInput(_))
        ));
        let m = Matrix4::from_diagonal(&nalgebra::Vector4::new(-1.0, 1.0, 1.0, 1.0));
        assert!(matches!(
            symplectic_eigenvalues(&m),
            Err(Error::DegenerateMatrix(_))
        ));
    }

    #[test]
    fn ground_state_at_g_0_2() {
        let pair = OscillatorPair::symmetric(1.0, 1.0, 0.2).unwrap();
        let modes = pair.mode_frequencies();
        assert!((modes.minus - 1.8f64.sqrt()).abs() < 1e-15);
        let mv = ModeVariances::thermal(1.0, modes, 0.0, 0.0);
        let (c1, _) = mv.pt_symplectic_pair();
        assert!((c1 - 0.431_670).abs() < 1e-6);
        let en = covariance_from_mode_variances(&mv)
            .log_negativity()
            .unwrap();
        assert!((en - EN_G02_GROUND).abs() < 1e-12, "{en}");
        assert!((mv.log_negativity() - EN_G02_GROUND).abs() < 1e-12);
    }

    #[test]
    fn coupling_rate_round_trip() {
        for g in [0.0, 0.013, 0.2, 1.7] {
            let pair = OscillatorPair::symmetric(2.5, 0.7, g).unwrap();
            assert!(
                (pair.coupling_rate().unwrap() - g).abs() <= 4.0 * f64::EPSILON * g.max(1e-300)
            );
        }
        assert!(OscillatorPair::new(1.0, 2.0, 1.0, 1.0, 0.1)
            .unwrap()
            .coupling_rate()
            .is_none());
    }

    #[test]
    fn asymmetric_modes_reduce_to_symmetric_formula() {
        let pair = OscillatorPair::new(1.0, 1.0 + 1e-12, 1.0, 1.0, 0.4).unwrap();
        let m = pair.mode_frequencies();
        assert!((m.plus - 1.0).abs() < 1e-9);
        assert!((m.minus - 1.8f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn diagonal_mode_variances_give_uncorrelated_blocks() {
        let g = covariance_from_mode_variances(&ModeVariances::new(0.3, 0.3, 0.8, 0.8).unwrap());
        let expect = Matrix4::from_diagonal(&nalgebra::Vector4::new(0.8, 0.3, 0.8, 0.3));
        assert_eq!(*g.matrix(), expect);
        let modes = ModeFrequencies {
            plus: 2.0,
            minus: 2.0,
        };
        let g = covariance_from_mode_variances(&ModeVariances::thermal(1.0, modes, 0.0, 0.0));
        let expect = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 0.25, 1.0, 0.25));
        assert!((g.matrix() - expect).amax() < 1e-15);
    }

    #[test]
    fn boundary_eigenvalue_contributes_zero() {
        assert_eq!(negativity_term(0.5), 0.0);
        assert!(negativity_term(0.25) == 1.0);
    }

    #[test]
    fn general_path_matches_invariant_formula() {
        let mv = ModeVariances::new(0.41, 0.37, 0.72, 0.55).unwrap();
        let pt = partial_transpose(&covariance_from_mode_variances(&mv));
        let (c1, c2) = symplectic_eigenvalues(pt.matrix()).unwrap();
        let (o1, o2) = invariant_eigenvalues(pt.matrix());
        assert!((c1 - o1).abs() < 1e-12 * o1);
        assert!((c2 - o2).abs() < 1e-12 * o2);
    }

    #[test]
    fn uncertainty_margin_flags_unphysical() {
        assert!(
            CovarianceMatrix::vacuum(1.0, 1.0)
                .uncertainty_margin()
                .abs()
                < 1e-14
        );
        assert!(CovarianceMatrix::thermal(1.0, 1.0, 0.3).is_physical());
        let squeezed_too_much = CovarianceMatrix::new(Matrix4::from_diagonal(
            &nalgebra::Vector4::new(0.4, 0.4, 0.5, 0.5),
        ))
        .unwrap();
        assert!(!squeezed_too_much.is_physical());
    }
}
