//! File formats, report rendering and the sweep runner behind the `sosdiag`
//! command-line tool. The algorithms live in `sosdiag-core`.

pub mod format;
pub mod report;
pub mod run;

pub use report::{Envelope, Report, SCHEMA};
