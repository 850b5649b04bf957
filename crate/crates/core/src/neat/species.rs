use alloc::vec::Vec;

use super::config::DistanceConfig;
use super::distance::genetic_distance;
use super::genome::{Genome, GenomeId};
use super::population::Population;

pub type SpeciesId = u64;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Species {
    pub id: SpeciesId,
    pub representative: Genome,
    pub members: Vec<GenomeId>,
    /// Species fitness (max member fitness) of every generation it was scored.
    pub best_fitness_history: Vec<f64>,
    pub last_improved: usize,
    pub stagnation: usize,
    pub created_at: usize,
    pub extinct_at: Option<usize>,
}

impl Species {
    fn new(id: SpeciesId, representative: Genome, generation: usize) -> Self {
        Species {
            id,
            members: alloc::vec![representative.id],
            representative,
            best_fitness_history: Vec::new(),
            last_improved: generation,
            stagnation: 0,
            created_at: generation,
            extinct_at: None,
        }
    }

    pub fn best_fitness(&self) -> Option<f64> {
        self.best_fitness_history.iter().copied().reduce(f64::max)
    }
}

/// Assigns every genome to the first species whose representative is
/// closer than `threshold`, founding a new species otherwise. Each
/// surviving species then takes as representative the member closest to
/// its previous one. Species left without members are removed, stamped
/// extinct at the population's generation and returned.
pub fn speciate(population: &mut Population, threshold: f64, cfg: &DistanceConfig) -> Vec<Species> {
    let generation = population.generation;
    for s in &mut population.species {
        s.members.clear();
    }
    for g in &population.genomes {
        let home = population
            .species
            .iter_mut()
            .find(|s| genetic_distance(&s.representative, g, cfg) < threshold);
        match home {
            Some(s) => s.members.push(g.id),
            None => {
                let id = population.next_species_id;
                population.next_species_id += 1;
                population.species.push(Species::new(id, g.clone(), generation));
            }
        }
    }

    let mut extinct = Vec::new();
    let mut alive = Vec::with_capacity(population.species.len());
    for mut s in core::mem::take(&mut population.species) {
        if s.members.is_empty() {
            s.extinct_at = Some(generation);
            extinct.push(s);
            continue;
        }
        let mut best: Option<(f64, &Genome)> = None;
        for id in &s.members {
            let g = population.genome(*id).expect("member is in population");
            let d = genetic_distance(&s.representative, g, cfg);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, g));
            }
        }
        s.representative = best.expect("non-empty").1.clone();
        alive.push(s);
    }
    population.species = alive;
    extinct
}
