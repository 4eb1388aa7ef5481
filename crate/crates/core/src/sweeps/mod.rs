// SPDX-License-Identifier: Apache-2.0

//! Configuration-driven runs behind the command-line tool.

pub mod config;
pub mod evaluate;
pub mod grid;
pub mod validate;

pub use config::{Method, RunConfig};
pub use evaluate::{evaluate, evaluate_with, PointReport};
pub use grid::{find_gmin, run_gmin, run_sweep, BoundaryCurve, Flag, GminOutcome, SweepTable};
pub use validate::{run_validation, Status, ValidationOptions, ValidationReport};
