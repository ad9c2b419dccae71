//! Scenario-driven front end for `su11-core`: load, evaluate, write outputs.

// `!(x > 0.0)` style guards deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod output;
pub mod report;
pub mod scenario;

pub use error::CliError;
pub use scenario::Scenario;
