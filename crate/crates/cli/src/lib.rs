//! Command-line front end: JSON specs in, check reports out.

pub mod error;
pub mod report;
pub mod run;
pub mod spec;

pub use error::CliError;
pub use report::{ReportDocument, TensorDocument};
pub use run::{run, Command, Options, Output, TensorKind};
pub use spec::{load_spec, parse_spec, SpecFile};
