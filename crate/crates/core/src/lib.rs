// SPDX-License-Identifier: Apache-2.0

//! Steady-state entanglement of two coupled harmonic oscillators driven by
//! noisy environments.

// `!(x > 0.0)` is the idiom for rejecting NaN along with bad values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bath;
pub mod closed_forms;
pub mod error;
pub mod gaussian;
pub mod langevin;
pub mod lindblad;
pub mod quadrature;
pub mod sweeps;

pub use error::{Error, Result};
