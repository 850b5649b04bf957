use alloc::string::String;
use alloc::vec::Vec;

use crate::neat::{GenomeId, SpeciesId};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenerationRow {
    pub generation: usize,
    pub task_id: String,
    /// Best raw fitness on the current task.
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub n_species: usize,
    pub champion: GenomeId,
    /// Mean genetic distance to the frozen reference, when there is one.
    pub mean_reference_distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RetentionRow {
    pub generation: usize,
    pub eval_task_id: String,
    pub r_pop: f64,
    pub r_top: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ForgettingRow {
    pub boundary_generation: usize,
    pub task_id: String,
    pub f_pop: f64,
    pub f_top: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CensusRow {
    pub generation: usize,
    /// (species id, member count), ascending id.
    pub species: Vec<(SpeciesId, usize)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LifelongMetrics {
    pub generations: Vec<GenerationRow>,
    pub retention: Vec<RetentionRow>,
    pub forgetting: Vec<ForgettingRow>,
    pub census: Vec<CensusRow>,
}

/// Index of the best entry, lowest index on ties.
pub fn champion_index(fitness: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &f) in fitness.iter().enumerate() {
        if best.is_none_or(|b| f > fitness[b]) {
            best = Some(i);
        }
    }
    best
}

/// Population-level and champion-level retention on a previous task:
/// the best previous-task fitness in the population, and the
/// previous-task fitness of the current-task champion.
pub fn retention(previous: &[f64], champion: usize) -> (f64, f64) {
    let r_pop = previous.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (r_pop, previous[champion])
}

/// Best fitness reached on a task minus what is retained after moving on.
pub fn forgetting(best_before: f64, retained: f64) -> f64 {
    best_before - retained
}
