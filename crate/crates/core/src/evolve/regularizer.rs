use alloc::collections::BTreeMap;

use super::eval::FitnessRecord;
use crate::neat::{genetic_distance, DistanceConfig, Genome, GenomeId};

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegularizerConfig {
    pub enabled: bool,
    pub lambda: f64,
}

/// Penalty `lambda * delta(reference, genome)` subtracted from raw fitness
/// once a reference genome has been frozen.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegularizerState {
    pub enabled: bool,
    pub lambda: f64,
    pub reference: Option<Genome>,
}

impl RegularizerState {
    pub fn new(cfg: &RegularizerConfig) -> Self {
        RegularizerState {
            enabled: cfg.enabled,
            lambda: cfg.lambda,
            reference: None,
        }
    }

    pub fn is_active(&self) -> bool {
        self.enabled && self.reference.is_some()
    }

    pub fn apply(&self, raw: f64, genome: &Genome, distance: &DistanceConfig) -> f64 {
        match &self.reference {
            Some(r) if self.enabled => raw - self.lambda * genetic_distance(r, genome, distance),
            _ => raw,
        }
    }
}

pub fn regularized_fitness(
    record: &FitnessRecord,
    regularizer: &RegularizerState,
    genome: &Genome,
    distance: &DistanceConfig,
) -> f64 {
    regularizer.apply(record.raw, genome, distance)
}

/// Genome with the highest selection fitness, lowest id on ties.
pub fn select_reference<'a>(genomes: &'a [Genome], fitness: &BTreeMap<GenomeId, f64>) -> Option<&'a Genome> {
    genomes.iter().reduce(|best, g| {
        let (fb, fg) = (fitness[&best.id], fitness[&g.id]);
        if fg > fb || fg == fb && g.id < best.id {
            g
        } else {
            best
        }
    })
}
