// SPDX-License-Identifier: Apache-2.0

//! Exact steady state of two coupled oscillators with linear baths.
//!
//! In the frequency domain `q(ω) = χ(ω) F(ω)` with the 2×2 inverse
//! susceptibility
//!
//! ```text
//! D_αα = m_α(Ω_α² - ω²) + k + s χ^F_αα(ω)
//! D_αβ = -k + s χ^F_αβ(ω)
//! ```
//!
//! where `s` is the sign of the active [`ResponseConvention`]. Equal-time
//! moments are frequency integrals of `χ S χ†`.

use std::cell::Cell;
use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::bath::{BathModel, PeakHint, ResponseConvention};
use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, OscillatorPair, P_A, P_B, Q_A, Q_B};
use crate::quadrature::{integrate, panels_between, Panel};

/// How the baths couple to the pair.
#[derive(Debug, Clone)]
pub enum BathLayout {
    /// Forces on `q_A` and `q_B`, with an optional real cross spectrum
    /// `<F_A F_B>_ω = <F_B F_A>_ω`.
    Local {
        a: BathModel,
        b: BathModel,
        cross: Option<BathModel>,
    },
    /// Independent forces on the normal coordinates `η_± = (q_A ± q_B)/√2`.
    /// Only meaningful for identical oscillators.
    NormalModes { plus: BathModel, minus: BathModel },
}

#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub pair: OscillatorPair,
    pub baths: BathLayout,
    pub convention: ResponseConvention,
}

impl SystemSpec {
    pub fn new(pair: OscillatorPair, baths: BathLayout) -> Result<Self> {
        if matches!(baths, BathLayout::NormalModes { .. }) && !pair.is_symmetric() {
            return Err(Error::InvalidParameter(
                "normal-mode baths need identical oscillators".into(),
            ));
        }
        Ok(Self {
            pair,
            baths,
            convention: ResponseConvention::Retarded,
        })
    }

    /// Both oscillators coupled to independent copies of `bath`.
    pub fn symmetric(pair: OscillatorPair, bath: BathModel) -> Result<Self> {
        Self::new(
            pair,
            BathLayout::Local {
                a: bath.clone(),
                b: bath,
                cross: None,
            },
        )
    }

    pub fn with_convention(mut self, convention: ResponseConvention) -> Self {
        self.convention = convention;
        self
    }

    /// Noise spectrum and bath response in the oscillator basis.
    pub fn bath_matrices(&self, omega: f64) -> (Matrix2<f64>, Matrix2<Complex64>) {
        match &self.baths {
            BathLayout::Local { a, b, cross } => {
                let (sc, xc) = cross.as_ref().map_or((0.0, Complex64::new(0.0, 0.0)), |c| {
                    (c.spectrum(omega), c.response(omega))
                });
                let (xa, xb) = (a.response(omega), b.response(omega));
                (
                    Matrix2::new(a.spectrum(omega), sc, sc, b.spectrum(omega)),
                    Matrix2::new(xa, xc, xc, xb),
                )
            }
            BathLayout::NormalModes { plus, minus } => {
                let (sp, sm) = (plus.spectrum(omega), minus.spectrum(omega));
                let (xp, xm) = (plus.response(omega), minus.response(omega));
                let (sd, so) = (0.5 * (sp + sm), 0.5 * (sp - sm));
                let (xd, xo) = ((xp + xm) * 0.5, (xp - xm) * 0.5);
                (Matrix2::new(sd, so, so, sd), Matrix2::new(xd, xo, xo, xd))
            }
        }
    }

    fn baths(&self) -> Vec<&BathModel> {
        match &self.baths {
            BathLayout::Local { a, b, cross } => {
                let mut v = vec![a, b];
                v.extend(cross.iter());
                v
            }
            BathLayout::NormalModes { plus, minus } => vec![plus, minus],
        }
    }

    /// Bath responses projected on the two normal modes (exact for
    /// identical oscillators, the diagonal entries otherwise).
    fn mode_responses(&self, omega: f64) -> [Complex64; 2] {
        match &self.baths {
            BathLayout::NormalModes { plus, minus } => {
                [plus.response(omega), minus.response(omega)]
            }
            BathLayout::Local { .. } => {
                let (_, x) = self.bath_matrices(omega);
                if self.pair.is_symmetric() {
                    let d = (x[(0, 0)] + x[(1, 1)]) * 0.5;
                    [d + x[(0, 1)], d - x[(0, 1)]]
                } else {
                    [x[(0, 0)], x[(1, 1)]]
                }
            }
        }
    }

    /// Renormalised mode resonances with their half widths.
    pub fn resonance_hints(&self) -> [PeakHint; 2] {
        let modes = self.pair.mode_frequencies();
        let masses = [self.pair.mass_a, self.pair.mass_b];
        let s = self.convention.sign();
        let mut out = [
            PeakHint {
                center: modes.plus,
                width: 0.0,
            },
            PeakHint {
                center: modes.minus,
                width: 0.0,
            },
        ];
        for (i, bare) in [modes.plus, modes.minus].into_iter().enumerate() {
            let m = masses[i];
            let mut w = bare;
            for _ in 0..30 {
                let next = bare * bare + s * self.mode_responses(w)[i].re / m;
                if !(next > 0.0) || !next.is_finite() {
                    w = bare;
                    break;
                }
                w = next.sqrt();
            }
            let width = self.mode_responses(w)[i].im.abs() / (m * w);
            out[i] = PeakHint {
                center: w,
                width: width.max(1e-12 * w),
            };
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Start of the algebraic tail; chosen from the spectral scales if absent.
    pub tail_cut: Option<f64>,
    pub peak_pad: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            max_subdivisions: 4000,
            tail_cut: None,
            peak_pad: 10.0,
        }
    }
}

impl QuadratureSettings {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must lie in (0, 1e-2], got {}",
                self.rel_tol
            )));
        }
        if !(self.peak_pad >= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "peak_pad must be >= 2, got {}",
                self.peak_pad
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter(
                "max_subdivisions must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// `χ(ω) = D(ω)⁻¹`.
pub fn susceptibility_matrix(omega: f64, spec: &SystemSpec) -> Result<Matrix2<Complex64>> {
    let d = inverse_susceptibility(omega, spec);
    let det = d[(0, 0)] * d[(1, 1)] - d[(0, 1)] * d[(1, 0)];
    if !(det.norm() >= 1e-300) {
        return Err(Error::SingularAtFrequency(omega));
    }
    Ok(Matrix2::new(d[(1, 1)], -d[(0, 1)], -d[(1, 0)], d[(0, 0)]) / det)
}

pub fn inverse_susceptibility(omega: f64, spec: &SystemSpec) -> Matrix2<Complex64> {
    let p = &spec.pair;
    let s = spec.convention.sign();
    let (_, x) = spec.bath_matrices(omega);
    let k = Complex64::new(p.spring, 0.0);
    let diag = |m: f64, w: f64| Complex64::new(m * (w * w - omega * omega), 0.0) + k;
    Matrix2::new(
        diag(p.mass_a, p.omega_a) + x[(0, 0)] * s,
        -k + x[(0, 1)] * s,
        -k + x[(1, 0)] * s,
        diag(p.mass_b, p.omega_b) + x[(1, 1)] * s,
    )
}

/// Position correlator spectrum `<q_α q_β>_ω = (χ S χ†)_αβ`.
pub fn correlator_spectrum(omega: f64, spec: &SystemSpec) -> Result<Matrix2<Complex64>> {
    let chi = susceptibility_matrix(omega, spec)?;
    let (s, _) = spec.bath_matrices(omega);
    let s = s.map(|v| Complex64::new(v, 0.0));
    Ok(chi * s * chi.adjoint())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub stable: bool,
    /// Zeros of `det D` in the upper half plane implied by the winding.
    pub unstable_zeros: i64,
    /// Frequency interval where the offending phase swing was found.
    pub region: Option<(f64, f64)>,
    pub diagnostic: String,
}

const STABILITY_SAMPLES: usize = 4000;
const MAX_PHASE_STEP: f64 = PI / 4.0;
const MAX_BISECTION_DEPTH: u32 = 60;

/// Counts zeros of `det D(ω)` in the upper half plane by following its
/// phase along the real axis. The large semicircle adds `4π` (det grows as
/// `ω⁴`), so a stable system winds by exactly `-4π` along the axis.
pub fn stability_check(spec: &SystemSpec) -> StabilityReport {
    let p = &spec.pair;
    let scale = p.mode_frequencies().minus.max(p.omega_a).max(p.omega_b);
    let det = |w: f64| {
        let d = inverse_susceptibility(w, spec);
        d[(0, 0)] * d[(1, 1)] - d[(0, 1)] * d[(1, 0)]
    };
    let to_theta = |w: f64| (w / scale).atan();
    let to_omega = |t: f64| scale * t.tan();

    let edge = 0.5 * PI - 1e-9;
    let mut thetas: Vec<f64> = (0..=STABILITY_SAMPLES)
        .map(|i| -edge + 2.0 * edge * i as f64 / STABILITY_SAMPLES as f64)
        .collect();
    let mut hints: Vec<PeakHint> = spec.resonance_hints().to_vec();
    for b in spec.baths() {
        hints.extend(b.peaks());
    }
    for h in &hints {
        for c in [h.center, -h.center] {
            for off in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
                thetas.push(to_theta(c + off * h.width));
            }
        }
    }
    thetas.sort_by(f64::total_cmp);
    thetas.dedup();

    let mut total = 0.0;
    let mut worst: Option<(f64, (f64, f64))> = None;
    let mut unresolved: Option<(f64, f64)> = None;
    for pair in thetas.windows(2) {
        let (t0, t1) = (pair[0], pair[1]);
        let (d0, d1) = (det(to_omega(t0)), det(to_omega(t1)));
        let step = phase_increment(&det, &to_omega, t0, t1, d0, d1, 0, &mut unresolved);
        total += step;
        if step > 0.0 && worst.is_none_or(|(s, _)| step > s) {
            worst = Some((step, (to_omega(t0), to_omega(t1))));
        }
    }

    let windings = total / (2.0 * PI);
    let zeros = (windings + 2.0).round() as i64;
    let resolved = (windings - windings.round()).abs() < 0.05;
    if let Some(region) = unresolved {
        return StabilityReport {
            stable: false,
            unstable_zeros: zeros,
            region: Some(region),
            diagnostic: format!(
                "det χ⁻¹ vanishes on the real axis near ω ∈ [{:.6e}, {:.6e}] (undamped resonance)",
                region.0, region.1
            ),
        };
    }
    if !resolved {
        return StabilityReport {
            stable: false,
            unstable_zeros: zeros,
            region: None,
            diagnostic: format!("phase of det χ⁻¹ not resolved (winding {windings:.3})"),
        };
    }
    if zeros != 0 {
        let region = worst.map(|(_, r)| r);
        return StabilityReport {
            stable: false,
            unstable_zeros: zeros,
            region,
            diagnostic: format!(
                "{zeros} pole(s) of χ in the upper half plane; anti-damped response near ω ∈ {}",
                region.map_or("?".into(), |r| format!("[{:.6e}, {:.6e}]", r.0, r.1))
            ),
        };
    }
    StabilityReport {
        stable: true,
        unstable_zeros: 0,
        region: None,
        diagnostic: "stable".into(),
    }
}

#[allow(clippy::too_many_arguments)]
fn phase_increment<D, M>(
    det: &D,
    to_omega: &M,
    t0: f64,
    t1: f64,
    d0: Complex64,
    d1: Complex64,
    depth: u32,
    unresolved: &mut Option<(f64, f64)>,
) -> f64
where
    D: Fn(f64) -> Complex64,
    M: Fn(f64) -> f64,
{
    if d0.norm() == 0.0 || d1.norm() == 0.0 {
        *unresolved = Some((to_omega(t0), to_omega(t1)));
        return 0.0;
    }
    let step = (d1 / d0).arg();
    if !step.is_finite() {
        *unresolved = Some((to_omega(t0), to_omega(t1)));
        return 0.0;
    }
    if step.abs() <= MAX_PHASE_STEP {
        return step;
    }
    let tm = 0.5 * (t0 + t1);
    if depth >= MAX_BISECTION_DEPTH || tm <= t0 || tm >= t1 {
        if step.abs() > 0.5 * PI {
            *unresolved = Some((to_omega(t0), to_omega(t1)));
        }
        return step;
    }
    let dm = det(to_omega(tm));
    phase_increment(det, to_omega, t0, tm, d0, dm, depth + 1, unresolved)
        + phase_increment(det, to_omega, tm, t1, dm, d1, depth + 1, unresolved)
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub covariance: CovarianceMatrix,
    /// Absolute quadrature error estimate per covariance entry.
    pub error: Matrix4<f64>,
    pub relative_error: f64,
    pub evaluations: usize,
}

impl SteadyState {
    /// Log negativity with an error bound propagated from [`Self::error`].
    pub fn log_negativity_with_error(&self) -> Result<(f64, f64)> {
        let g = *self.covariance.matrix();
        let en = self.covariance.log_negativity()?;
        let mut bound = 0.0;
        for i in 0..4 {
            for j in i..4 {
                let e = self.error[(i, j)];
                if e == 0.0 {
                    continue;
                }
                let h = 1e-6 * g[(i, i)].abs().max(g[(j, j)].abs());
                let mut gp = g;
                gp[(i, j)] += h;
                gp[(j, i)] = gp[(i, j)];
                let slope = (CovarianceMatrix::new(gp)?.log_negativity()? - en) / h;
                bound += slope.abs() * e * if i == j { 1.0 } else { 2.0 };
            }
        }
        Ok((en, bound))
    }
}

const N_COMPONENTS: usize = 7;

/// Integrates the correlator spectra over all frequencies.
pub fn steady_covariance(spec: &SystemSpec, settings: &QuadratureSettings) -> Result<SteadyState> {
    settings.validate()?;
    let report = stability_check(spec);
    if !report.stable {
        return Err(Error::Unstable(report.diagnostic));
    }

    let mut hints: Vec<PeakHint> = spec.resonance_hints().to_vec();
    for b in spec.baths() {
        hints.extend(b.peaks());
    }
    let modes = spec.pair.mode_frequencies();
    let top = modes.minus.max(spec.pair.omega_a).max(spec.pair.omega_b);
    let tail_cut = settings.tail_cut.unwrap_or_else(|| {
        20.0 * hints
            .iter()
            .map(|h| h.center.abs() + h.width)
            .fold(10.0 * top, f64::max)
    });

    // geometric ladder c ± w·pad^j so that Lorentzian wings are resolved
    // at every scale between the width and the tail cut
    let mut breakpoints = Vec::new();
    for h in &hints {
        let c = h.center.abs();
        breakpoints.push(c);
        let mut off = h.width;
        while off < tail_cut {
            breakpoints.push(c - off);
            breakpoints.push(c + off);
            off *= settings.peak_pad;
        }
    }
    let mut panels = panels_between(0.0, tail_cut, &breakpoints);
    panels.push(Panel::tail(tail_cut));

    let singular: Cell<Option<f64>> = Cell::new(None);
    let integrand = |w: f64| -> [f64; N_COMPONENTS] {
        let mut out = [0.0; N_COMPONENTS];
        for x in [w, -w] {
            match correlator_spectrum(x, spec) {
                Ok(q) => {
                    let w2 = x * x;
                    out[0] += q[(0, 0)].re;
                    out[1] += q[(1, 1)].re;
                    out[2] += q[(0, 1)].re;
                    out[3] += w2 * q[(0, 0)].re;
                    out[4] += w2 * q[(1, 1)].re;
                    out[5] += w2 * q[(0, 1)].re;
                    out[6] += x * q[(0, 1)].im;
                }
                Err(_) => {
                    singular.set(Some(x));
                    return [f64::NAN; N_COMPONENTS];
                }
            }
        }
        out
    };

    check_momentum_decay(&integrand, tail_cut)?;

    let q = integrate(
        integrand,
        &panels,
        settings.rel_tol,
        settings.max_subdivisions,
        1e-300,
        |v| {
            let qs = v[0].abs().max(v[1].abs());
            let ps = v[3].abs().max(v[4].abs());
            let pq = (qs * ps).sqrt();
            [qs, qs, qs, ps, ps, ps, pq]
        },
    );
    if let Some(w) = singular.get() {
        return Err(Error::SingularAtFrequency(w));
    }
    if !q.converged {
        return Err(Error::ToleranceNotMet {
            achieved: q.relative_error,
            reason: format!(
                "{} panels after {} evaluations did not reach rel_tol {}",
                q.panels, q.evaluations, settings.rel_tol
            ),
        });
    }

    let (ma, mb) = (spec.pair.mass_a, spec.pair.mass_b);
    let norm = 1.0 / (2.0 * PI);
    let assemble = |v: &[f64; N_COMPONENTS]| {
        let mut g = Matrix4::zeros();
        let mut set = |i: usize, j: usize, x: f64| {
            g[(i, j)] = x;
            g[(j, i)] = x;
        };
        set(Q_A, Q_A, v[0] * norm);
        set(Q_B, Q_B, v[1] * norm);
        set(Q_A, Q_B, v[2] * norm);
        set(P_A, P_A, ma * ma * v[3] * norm);
        set(P_B, P_B, mb * mb * v[4] * norm);
        set(P_A, P_B, ma * mb * v[5] * norm);
        set(P_A, Q_B, ma * v[6] * norm);
        set(P_B, Q_A, -mb * v[6] * norm);
        g
    };
    let gamma = assemble(&q.value);
    let error = assemble(&q.error).abs();
    Ok(SteadyState {
        covariance: CovarianceMatrix::new(gamma)?,
        error,
        relative_error: q.relative_error,
        evaluations: q.evaluations,
    })
}

fn check_momentum_decay<F>(integrand: &F, tail_cut: f64) -> Result<()>
where
    F: Fn(f64) -> [f64; N_COMPONENTS],
{
    let weight = |w: f64| {
        let v = integrand(w);
        w * (v[3].abs() + v[4].abs())
    };
    let (w1, w2) = (1e3 * tail_cut, 1e6 * tail_cut);
    let (r1, r2) = (weight(w1), weight(w2));
    if r1 > 0.0 && r2 > 0.1 * r1 {
        return Err(Error::ToleranceNotMet {
            achieved: f64::INFINITY,
            reason: format!(
                "momentum spectrum does not decay faster than 1/ω (ω·P = {r1:.3e} at {w1:.1e}, {r2:.3e} at {w2:.1e}); the bath needs a cutoff"
            ),
        });
    }
    Ok(())
}
