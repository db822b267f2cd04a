//! Experiment harness for the `randproj` library: data set generation and
//! ingestion, named experiments, and CSV / JSON result tables.

pub mod config;
pub mod dataset;
pub mod error;
pub mod experiments;
pub mod io;
pub mod report;
pub mod timing;

pub use config::Config;
pub use error::{BenchError, Result};
pub use experiments::{run_experiment, Experiment, ExperimentRegistry};
pub use report::{load_report, save_report, ExperimentReport, Format};
