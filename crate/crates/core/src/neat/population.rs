use alloc::vec::Vec;

use super::config::NeatConfig;
use super::genome::{Genome, GenomeId, NodeId, NodeKind};
use super::innovation::InnovationRegistry;
use super::species::{speciate, Species, SpeciesId};
use super::{clamp, gaussian, unit};
use crate::{seed, Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Population {
    pub genomes: Vec<Genome>,
    pub species: Vec<Species>,
    pub size: usize,
    pub generation: usize,
    pub registry: InnovationRegistry,
    pub next_genome_id: GenomeId,
    pub next_species_id: SpeciesId,
}

impl Population {
    pub fn genome(&self, id: GenomeId) -> Option<&Genome> {
        self.genomes.iter().find(|g| g.id == id)
    }

    pub fn species_of(&self, id: GenomeId) -> Option<&Species> {
        self.species.iter().find(|s| s.members.contains(&id))
    }

    pub(crate) fn fresh_genome_id(&mut self) -> GenomeId {
        let id = self.next_genome_id;
        self.next_genome_id += 1;
        id
    }
}

/// Builds and speciates generation 0.
///
/// Node ids: inputs `0..w`, outputs `w..w+k`, then the initial hidden
/// nodes. Eligible initial connections are input->output, input->hidden
/// and hidden->output; each is present with probability
/// `initial_connection_fraction`. Weights and biases are drawn from their
/// init Gaussians and clamped.
pub fn initial_population(seed_value: u64, input_width: usize, size: usize, cfg: &NeatConfig) -> Result<Population> {
    if input_width == 0 {
        return Err(Error::config("input width must be positive"));
    }
    if size < 2 {
        return Err(Error::config("population size must be at least 2"));
    }
    cfg.validate()?;

    let w = input_width as NodeId;
    let outputs: Vec<NodeId> = (w..w + cfg.num_outputs as NodeId).collect();
    let first_hidden = w + cfg.num_outputs as NodeId;
    let hidden: Vec<NodeId> = (first_hidden..first_hidden + cfg.num_hidden as NodeId).collect();
    let mut registry = InnovationRegistry::new(first_hidden + cfg.num_hidden as NodeId);

    let mut eligible = Vec::new();
    for i in 0..w {
        for &o in &outputs {
            eligible.push((i, o));
        }
    }
    for i in 0..w {
        for &h in &hidden {
            eligible.push((i, h));
        }
    }
    for &h in &hidden {
        for &o in &outputs {
            eligible.push((h, o));
        }
    }
    let eligible: Vec<_> = eligible
        .into_iter()
        .map(|(s, t)| (registry.register_initial(s, t), s, t))
        .collect();

    let mut rng = seed::rng(seed::derive(seed_value, seed::Stream::Init, &[]));
    let mut genomes = Vec::with_capacity(size);
    for id in 0..size as GenomeId {
        let mut g = Genome::new(id);
        for i in 0..w {
            g.add_node(i, NodeKind::Input, 0.0);
        }
        let parametric = outputs
            .iter()
            .map(|&n| (n, NodeKind::Output))
            .chain(hidden.iter().map(|&n| (n, NodeKind::Hidden)));
        for (n, kind) in parametric
        {
            let bias = clamp(
                gaussian(&mut rng, cfg.bias_init_mean, cfg.bias_init_stdev),
                cfg.bias_min_value,
                cfg.bias_max_value,
            );
            g.add_node(n, kind, bias);
        }
        for &(innov, s, t) in &eligible {
            if unit(&mut rng) < cfg.initial_connection_fraction {
                let weight = clamp(
                    gaussian(&mut rng, cfg.weight_init_mean, cfg.weight_init_stdev),
                    cfg.weight_min_value,
                    cfg.weight_max_value,
                );
                g.add_connection(innov, s, t, weight, true);
            }
        }
        genomes.push(g);
    }

    let mut population = Population {
        genomes,
        species: Vec::new(),
        size,
        generation: 0,
        registry,
        next_genome_id: size as GenomeId,
        next_species_id: 0,
    };
    speciate(&mut population, cfg.compatibility_threshold, &cfg.distance);
    Ok(population)
}
