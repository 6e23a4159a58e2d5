//! Text format, reports, corpus generators and the command driver for
//! `qbif-core`.

pub mod commands;
pub mod format;
pub mod generate;
pub mod report;
pub mod workspace;
