//! Experiment plumbing: freezing-time sweeps, power-law fits, CSV output
//! and the verification suites behind `hkf verify`.

mod emit;
mod fit;
mod sweep;
pub mod verify;

use thiserror::Error;

pub use emit::{emit_trajectory, trajectory_slice, write_trajectory};
pub use fit::{fit_exponent, fit_power_law, FitResult};
pub use sweep::{
    default_mode, freeze_sweep, freeze_sweep_serial, read_sweep_csv, run_family, step_cap,
    write_sweep_csv, SweepRow,
};
pub use verify::{verify, CheckOutcome, Suite, VerifyReport};

use crate::configs::ConfigsError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigsError),
    #[error("fit needs at least 3 rows, got {0}")]
    InsufficientRows(usize),
    #[error("row with n = {n} has no positive freezing time")]
    NonPositive { n: usize },
    #[error("malformed sweep CSV at record {record}: {reason}")]
    BadSweepCsv { record: usize, reason: String },
    #[error("malformed trajectory CSV at line {line}: {reason}")]
    BadTrajectory { line: usize, reason: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
