//! Lifelong neuroevolution of homogeneous swarm controllers.
//!
//! This crate is `no_std` (with `alloc`) and holds the pure algorithmic
//! parts: the NEAT genetic substrate, feedforward phenotypes, the episodic
//! swarm-foraging arena and the lifelong generation loop with its retention
//! and forgetting metrics. IO, configuration files and the CLI live in the
//! `swarmlife` crate.
#![no_std]

extern crate alloc;

pub mod arena;
pub mod error;
pub mod evolve;
pub mod neat;
pub mod phenotype;
pub mod seed;
#[cfg(feature = "serde")]
mod serde_pairs;

pub use error::{Error, Result};
