//! Experiments, diagnostics, I/O and the studies reproduced by the CLI.

pub mod config;
pub mod diagnostics;
pub mod experiments;
pub mod output;
pub mod reference;
pub mod riemann;
pub mod run;
pub mod studies;

pub use config::{Scheme, SolverConfig};
pub use run::{run, simulate, RunReport};
