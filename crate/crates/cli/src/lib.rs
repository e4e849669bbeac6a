//! Command-line front end for the temporal pattern miner: turns CSV time
//! series, synthetic corpora, or saved databases into sequence databases,
//! mines them, and renders line-oriented reports.
//!
//! The modules mirror the run pipeline:
//! - [`config`]: the JSON run configuration and time/tick parsing,
//! - [`ingest`]: CSV to raw time series,
//! - [`synth`]: seeded corpora with planted ground truth,
//! - [`dbfile`]: sequence-database save/load,
//! - [`run`]: orchestration (assemble, mine, cross-check, render),
//! - [`report`]: report line formats and the volatile-line stripper,
//! - [`bench`]: the pruning-mode sweep,
//! - [`memory`]: process peak-RSS introspection.

pub mod bench;
pub mod config;
pub mod dbfile;
pub mod error;
pub mod ingest;
pub mod memory;
pub mod report;
pub mod run;
pub mod synth;

pub use error::CliError;
