//! Instance files and solution records.

mod solution;
mod stp;

pub use solution::{
    parse_solution_json, write_solution, CsvTable, Format, RecordError, RunSummary,
    SolutionRecord, CSV_HEADER,
};
pub use stp::{parse_stp, parse_stp_bytes, parse_stp_with, write_stp, StpError, StpOptions, MAGIC};

pub(crate) use stp::parse_scaled;
