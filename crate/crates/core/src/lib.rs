//! Bilevel scheduling of multi-type buses with a dynamic split of each bus's
//! volume between passengers and parcels.
//!
//! The upper level maximizes operating profit ([`economics`]), the lower
//! level minimizes passenger travel time ([`service_time`]). The two are
//! combined by entropy weighting ([`scalarize`]) and searched with an
//! improved jellyfish search and four baselines ([`solver`]).

pub mod cli;
pub mod economics;
pub mod error;
pub mod evaluate;
pub mod model;
pub mod scalarize;
pub mod service_time;
pub mod solution;
pub mod solver;

pub use error::{EvalError, ModelError, ScalarizeError, SolverError};
pub use evaluate::{EvalOptions, Evaluation, Evaluator};
pub use model::{load_instance, load_instance_file, validate_instance, Instance};
pub use solution::Solution;
