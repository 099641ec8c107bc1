//! File formats, run reports and the experiment runner behind the
//! `active-medoids` binary.

pub mod dataset_io;
pub mod error;
pub mod manifest;
pub mod report;
pub mod runner;

pub use dataset_io::{dump_book, load_csv, write_csv, LabelColumn};
pub use error::{CliError, Result};
pub use manifest::Manifest;
pub use report::{append_ledger, curve_csv, ledger_row, RunReport, LEDGER_HEADER};
pub use runner::{run_detailed, run_once, sweep_budget, Algorithm, BudgetSpec, RunConfig, RunOutput};
