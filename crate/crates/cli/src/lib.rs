//! Batch front end for `mixmult`: one JSON job file in, one deterministic
//! report out.
//!
//! Exit status is 0 on success, 1 on input errors and 2 when a verification
//! assertion fails.

pub mod commands;
pub mod config;

pub use commands::{run, Report, Status};
pub use config::{validate, Command, Format, JobConfig};
