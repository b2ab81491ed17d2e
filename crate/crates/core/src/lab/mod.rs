//! Growth-exponent experiments: theory exponents, log-log fits and grid runs.

mod experiment;
mod exponent;
mod fit;

pub use experiment::{measure, run_experiment, ExperimentConfig, ExperimentReport, ReportRow, REPORT_HEADER};
pub use exponent::{
    density_log_exponent, q_fn, reference_density, rho, theoretical_exponent, Direction, LogCorrection, Quantity,
    ReferenceBound, RhoVariant, DEFAULT_SLACK,
};
pub use fit::{fit_loglog, FitResult};
