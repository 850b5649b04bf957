//! Genetic substrate: genomes, innovation tracking, variation operators,
//! genetic distance, speciation and reproduction.

mod config;
mod crossover;
mod distance;
mod genome;
mod innovation;
mod mutation;
mod population;
mod reproduction;
mod species;

pub use config::{DistanceConfig, NeatConfig};
pub use crossover::crossover;
pub use distance::genetic_distance;
pub use genome::{ConnectionGene, Genome, GenomeId, Innovation, NodeGene, NodeId, NodeKind};
pub use innovation::InnovationRegistry;
pub use mutation::{mutate, mutate_in_place, MutationReport};
pub use population::{initial_population, Population};
pub use reproduction::reproduce;
pub use species::{speciate, Species, SpeciesId};

use rand_distr::{Distribution, StandardNormal};

pub(crate) fn gaussian<R: rand::Rng + ?Sized>(rng: &mut R, mean: f64, stdev: f64) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    mean + stdev * z
}

pub(crate) fn clamp(x: f64, lo: f64, hi: f64) -> f64 {
    if x < lo {
        lo
    } else if x > hi {
        hi
    } else {
        x
    }
}

pub(crate) fn unit<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>()
}
