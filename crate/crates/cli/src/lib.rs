//! Batch front end: configuration, sweeps, CSV and SVG output.

pub mod commands;
pub mod config;
pub mod emit;
pub mod svg;
pub mod sweep;

pub use config::RunConfig;
pub use sweep::{run_sweep, AlphaRange, Analyses, SweepRow, SweepSpec};
