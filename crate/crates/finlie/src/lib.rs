//! Command line, file formats and timed suite runs for `finlie-core`.

pub mod cli;
pub mod driver;
pub mod pointset;
pub mod records;
