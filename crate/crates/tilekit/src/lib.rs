//! Ingestion, export, figures, reports and the command line for `tilekit`.
//!
//! The numerical work lives in [`tilekit_core`]; this crate reads
//! performance tables, writes tiles and figures, and assembles reports.

mod error;

pub mod cli;
pub mod export;
pub mod format;
pub mod ingest;
pub mod render;
pub mod report;

pub use error::{Error, Result};
pub use tilekit_core as core;
