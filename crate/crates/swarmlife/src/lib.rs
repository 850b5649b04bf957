//! Experiment front end for `swarmlife-core`: TOML configuration, genome
//! files, CSV tables, checkpoints, SVG plots, episode replay, a rayon
//! executor and the runner behind the `swarmlife` CLI.

pub mod checkpoint;
pub mod config;
pub mod exec;
pub mod genome_io;
pub mod plot;
pub mod replay;
pub mod run;
pub mod tables;

pub use config::{ConfigError, ExperimentConfig};
pub use exec::Rayon;
pub use run::{evolve, sweep_lambda, RunManifest};
