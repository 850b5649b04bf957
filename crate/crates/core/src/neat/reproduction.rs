use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::config::NeatConfig;
use super::crossover::crossover;
use super::genome::{Genome, GenomeId};
use super::mutation::mutate_in_place;
use super::population::Population;
use super::species::{speciate, Species};
use crate::{Error, Result};

/// Descending fitness, ascending genome id on ties.
fn by_fitness(fitness: &BTreeMap<GenomeId, f64>) -> impl Fn(&GenomeId, &GenomeId) -> Ordering + '_ {
    move |a, b| {
        fitness[b]
            .partial_cmp(&fitness[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(b))
    }
}

/// Splits `total` proportionally to `weights` with largest-remainder
/// rounding; equal shares when every weight is zero.
fn apportion(weights: &[f64], total: usize) -> Vec<usize> {
    let n = weights.len();
    if n == 0 {
        return Vec::new();
    }
    let sum: f64 = weights.iter().sum();
    let quotas: Vec<f64> = if sum > 0.0 {
        weights.iter().map(|w| w / sum * total as f64).collect()
    } else {
        alloc::vec![total as f64 / n as f64; n]
    };
    let mut counts: Vec<usize> = quotas.iter().map(|q| libm::floor(*q) as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - counts[a] as f64;
        let rb = quotas[b] - counts[b] as f64;
        rb.partial_cmp(&ra).unwrap_or(Ordering::Equal).then(a.cmp(&b))
    });
    for &i in order.iter().cycle().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Gives every species `floor` slots when the budget allows, then splits
/// the rest with [`apportion`].
fn allocate(weights: &[f64], total: usize, floor: usize) -> Vec<usize> {
    let base = floor * weights.len();
    if floor == 0 || base > total {
        return apportion(weights, total);
    }
    apportion(weights, total - base).into_iter().map(|c| c + floor).collect()
}

/// Produces the next generation in place and re-speciates it.
///
/// 1. Species fitness is the max member fitness; a species whose fitness
///    has not improved for more than `max_stagnation` generations is
///    removed, except the `species_elitism` best species.
/// 2. The `elitism` best genomes of the surviving species are copied
///    unchanged.
/// 3. The remaining slots go to surviving species in proportion to their
///    mean adjusted fitness, each getting at least `min_species_size`
///    while the budget allows. Parents are drawn from the top
///    `survival_threshold` fraction (at least two when available) of each
///    species; children are crossover + mutation.
///
/// Returns every species that went extinct, through stagnation or through
/// re-speciation.
pub fn reproduce<R: rand::Rng + ?Sized>(
    population: &mut Population,
    fitness: &BTreeMap<GenomeId, f64>,
    cfg: &NeatConfig,
    rng: &mut R,
) -> Result<Vec<Species>> {
    if let Some(g) = population.genomes.iter().find(|g| !fitness.contains_key(&g.id)) {
        return Err(Error::Config(alloc::format!("genome {} has no fitness entry", g.id)));
    }
    let generation = population.generation;

    let mut scored: Vec<(f64, Species)> = core::mem::take(&mut population.species)
        .into_iter()
        .map(|mut s| {
            let f = s
                .members
                .iter()
                .map(|id| fitness[id])
                .fold(f64::NEG_INFINITY, f64::max);
            let improved = s.best_fitness().is_none_or(|best| f > best);
            if improved {
                s.last_improved = generation;
            }
            s.best_fitness_history.push(f);
            s.stagnation = generation - s.last_improved;
            (f, s)
        })
        .collect();

    // Species ranked best first; the leading `species_elitism` are immune.
    let mut rank: Vec<usize> = (0..scored.len()).collect();
    rank.sort_by(|&a, &b| {
        scored[b]
            .0
            .partial_cmp(&scored[a].0)
            .unwrap_or(Ordering::Equal)
            .then(scored[a].1.id.cmp(&scored[b].1.id))
    });
    let mut protected = alloc::vec![false; scored.len()];
    for &i in rank.iter().take(cfg.species_elitism) {
        protected[i] = true;
    }
    let mut extinct = Vec::new();
    let mut surviving = Vec::new();
    for (i, (_, mut s)) in scored.drain(..).enumerate() {
        if !protected[i] && s.stagnation > cfg.max_stagnation {
            // First generation in which the species no longer exists.
            s.extinct_at = Some(generation + 1);
            extinct.push(s);
        } else {
            surviving.push(s);
        }
    }

    let order = by_fitness(fitness);
    let mut candidates: Vec<GenomeId> = surviving.iter().flat_map(|s| s.members.iter().copied()).collect();
    candidates.sort_by(&order);
    let elites: Vec<GenomeId> = candidates.iter().copied().take(cfg.elitism.min(population.size)).collect();

    let (lo, hi) = candidates
        .iter()
        .map(|id| fitness[id])
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), f| (lo.min(f), hi.max(f)));
    let range = (hi - lo).max(1.0);
    let adjusted: Vec<f64> = surviving
        .iter()
        .map(|s| {
            let n = s.members.len() as f64;
            let mean: f64 = s.members.iter().map(|id| fitness[id] / n).sum();
            ((mean - lo) / range).max(0.0)
        })
        .collect();
    let spawn = allocate(&adjusted, population.size - elites.len(), cfg.min_species_size);

    let old = core::mem::take(&mut population.genomes);
    let lookup = |id: GenomeId| old.iter().find(|g| g.id == id).expect("member exists");
    let mut next: Vec<Genome> = elites.iter().map(|&id| lookup(id).clone()).collect();

    population.registry.begin_generation();
    for (s, &count) in surviving.iter().zip(&spawn) {
        if count == 0 {
            continue;
        }
        let mut members = s.members.clone();
        members.sort_by(&order);
        let cutoff = libm::ceil(cfg.survival_threshold * members.len() as f64) as usize;
        let cutoff = cutoff.max(2).min(members.len());
        let parents = &members[..cutoff];
        for _ in 0..count {
            let a = parents[rng.random_range(0..parents.len())];
            let b = parents[rng.random_range(0..parents.len())];
            let (fitter, other) = if fitness[&a] >= fitness[&b] { (a, b) } else { (b, a) };
            let id = population.fresh_genome_id();
            let mut child = crossover(lookup(fitter), lookup(other), id, rng);
            mutate_in_place(&mut child, &mut population.registry, rng, cfg);
            next.push(child);
        }
    }
    debug_assert_eq!(next.len(), population.size);

    population.genomes = next;
    population.species = surviving;
    population.generation += 1;
    extinct.extend(speciate(population, cfg.compatibility_threshold, &cfg.distance));
    Ok(extinct)
}
