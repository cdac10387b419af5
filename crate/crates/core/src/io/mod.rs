//! Configuration files, run output and the command-line front end.

pub mod cli;
pub mod config;
pub mod output;

pub use config::{Config, ConfigError, ProtocolSettings};
pub use output::{read_snapshot, write_run, write_snapshot, RunManifest, Snapshot, SnapshotKind};
