//! Shallow-circuit separation toolkit: problem instances, exact quantum
//! samplers, classical strategy analysis, reductions and XOR-lemma checks.

pub mod classical;
pub mod error;
pub mod f2lin;
pub mod formats;
pub mod graphs;
pub mod problems;
pub mod qsim;
pub mod reductions;
pub mod report;
pub mod repro;
pub mod seeding;
pub mod xorlab;

pub use error::{Error, Result};
