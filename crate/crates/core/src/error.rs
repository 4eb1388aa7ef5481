// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input matrix is not symmetric (relative asymmetry {0:.3e})")]
    NonSymmetricInput(f64),
    #[error("covariance matrix has negative determinant ({0:.3e})")]
    DegenerateMatrix(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("blue-detuned or undriven cavity: S(Ω)={emission:.6e} <= S(-Ω)={absorption:.6e}, no cooling")]
    HeatingRegime { emission: f64, absorption: f64 },
    #[error("Kramers-Kronig transform did not reach 1e-3 relative accuracy (estimate {0:.3e})")]
    GridTooCoarse(f64),
    #[error("susceptibility is singular at ω = {0}")]
    SingularAtFrequency(f64),
    #[error("system is unstable: {0}")]
    Unstable(String),
    #[error("quadrature tolerance not met (achieved {achieved:.3e}): {reason}")]
    ToleranceNotMet { achieved: f64, reason: String },
    #[error("drift matrix is not Hurwitz (max Re λ = {0:.3e})")]
    NotHurwitz(f64),
    #[error("no steady state: {0}")]
    NoSteadyState(&'static str),
    #[error("entangled/separable boundary not bracketed up to G = {0}")]
    NoBracket(f64),
    #[error("tabulated bath: {0}")]
    Tabulated(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Errors caused by the input rather than by the numerics.
    pub fn is_config(&self) -> bool {
        matches!(self, Self::InvalidParameter(_) | Self::Tabulated(_))
    }
}
