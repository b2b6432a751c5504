//! Batch frontend for `mpinv-core`: reads a problem document, runs one of the
//! commands and writes the result together with every verification residual.

pub mod commands;
pub mod encoding;
pub mod error;
pub mod options;
pub mod run;

pub use commands::Verification;
pub use error::CliError;
pub use options::{parse_blocks, AlgebraKind, Command, Flags, FormKind, Options};
pub use run::{
    numeric_drift, parse_document, reverify, run, run_job, JobSpec, Outcome, OutputDocument, Reverification, Status,
    EXIT_INPUT, EXIT_NOT_MOORE_PENROSE, EXIT_PASS, EXIT_VERIFICATION,
};
