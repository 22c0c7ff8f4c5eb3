//! Verification lab for the SU(n+1) Toda solution family: parameter files,
//! configurable suites, deterministic JSON/CSV reports and the CLI driver.

pub mod config;
pub mod error;
pub mod params_io;
pub mod report;
pub mod runner;
pub mod suites;
pub mod tolerances;

pub use config::{ParamsSource, RunConfig, Suite};
pub use error::{LabError, LabResult};
pub use params_io::{load_params_file, param_cases, ParamCase, ParamSummary, ParamsSpec};
pub use report::{CaseRecord, Check, SuiteReport, VerificationReport};
pub use runner::{emit_plot_data, run, RunOutcome};
pub use tolerances::{Settings, TRoute, Tolerances};
