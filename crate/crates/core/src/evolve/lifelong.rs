use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::eval::{evaluate_population, retention_seeds, training_seeds, EnvSeedPolicy, EvalConfig};
use super::exec::Executor;
use super::metrics::{
    champion_index, forgetting, retention, CensusRow, ForgettingRow, GenerationRow, LifelongMetrics, RetentionRow,
};
use super::regularizer::{select_reference, RegularizerConfig, RegularizerState};
use super::tracker::SpeciesTracker;
use crate::arena::{observation_width, ArenaConfig, TaskSpec};
use crate::neat::{genetic_distance, initial_population, reproduce, Genome, GenomeId, NeatConfig, Population};
use crate::seed::{self, Stream};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Segment {
    pub task: TaskSpec,
    pub generations: usize,
}

/// Ordered task segments. Consecutive segments must differ and every
/// task must use the same global color set.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TaskSchedule {
    pub segments: Vec<Segment>,
}

impl TaskSchedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let s = TaskSchedule { segments };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let Some(first) = self.segments.first() else {
            return Err(Error::config("schedule has no tasks"));
        };
        for seg in &self.segments {
            seg.task.validate()?;
            if seg.task.colors != first.task.colors {
                return Err(Error::config("all tasks must share one global color set"));
            }
        }
        for pair in self.segments.windows(2) {
            if pair[0].task.id == pair[1].task.id {
                return Err(Error::Config(alloc::format!(
                    "consecutive segments repeat task {}",
                    pair[0].task.id
                )));
            }
        }
        Ok(())
    }

    pub fn total_generations(&self) -> usize {
        self.segments.iter().map(|s| s.generations).sum()
    }

    /// Segment index and offset within it of a global generation.
    pub fn locate(&self, generation: usize) -> Option<(usize, usize)> {
        let mut start = 0;
        for (i, s) in self.segments.iter().enumerate() {
            if generation < start + s.generations {
                return Some((i, generation - start));
            }
            start += s.generations;
        }
        None
    }

    /// Tasks met in earlier (non-empty) segments other than the task of
    /// `segment`, in order of first appearance.
    pub fn previous_tasks(&self, segment: usize) -> Vec<&TaskSpec> {
        let current = &self.segments[segment].task.id;
        let mut out: Vec<&TaskSpec> = Vec::new();
        for s in &self.segments[..segment] {
            if s.generations > 0 && &s.task.id != current && out.iter().all(|t| t.id != s.task.id) {
                out.push(&s.task);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LifelongConfig {
    pub neat: NeatConfig,
    pub arena: ArenaConfig,
    pub eval: EvalConfig,
    pub schedule: TaskSchedule,
    pub population_size: usize,
    pub regularizer: RegularizerConfig,
}

impl LifelongConfig {
    pub fn validate(&self) -> Result<()> {
        self.neat.validate()?;
        self.arena.validate()?;
        self.eval.validate()?;
        self.schedule.validate()?;
        if self.population_size < 2 {
            return Err(Error::config("population size must be at least 2"));
        }
        if !(self.regularizer.lambda >= 0.0 && self.regularizer.lambda.is_finite()) {
            return Err(Error::config("lambda must be a non-negative number"));
        }
        Ok(())
    }

    pub fn input_width(&self) -> usize {
        let c = self.schedule.segments[0].task.n_colors();
        observation_width(c, self.arena.n_neighbors)
    }
}

/// Population and reference frozen at the end of a task segment.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TaskSnapshot {
    pub segment: usize,
    pub task_id: String,
    pub boundary_generation: usize,
    pub genomes: Vec<Genome>,
    pub fitness: Vec<f64>,
    pub reference: Option<Genome>,
}

/// Everything needed to continue a run: with the per-generation seed
/// derivation no random generator state has to be stored.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LifelongState {
    pub generation: usize,
    pub population: Population,
    pub regularizer: RegularizerState,
    pub metrics: LifelongMetrics,
    pub tracker: SpeciesTracker,
    pub best_by_task: BTreeMap<String, f64>,
    pub snapshots: Vec<TaskSnapshot>,
}

/// Result of evaluating one generation on its current task.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationEval {
    pub raw: Vec<f64>,
    /// Regularized fitness when a reference is active, raw otherwise.
    pub selection: BTreeMap<GenomeId, f64>,
    pub row: GenerationRow,
    pub census: CensusRow,
}

fn train_seeds(cfg: &EvalConfig, master: u64, task: &TaskSpec, generation: usize) -> Vec<u64> {
    match cfg.seed_policy {
        EnvSeedPolicy::PerGeneration => training_seeds(master, task, generation as u64, cfg.n_eval_envs),
        EnvSeedPolicy::FixedPerTask => training_seeds(master, task, 0, cfg.n_eval_envs),
    }
}

/// Under a fixed policy a previous task is scored on its own training
/// environments, so forgetting compares like with like.
fn check_seeds(cfg: &EvalConfig, master: u64, task: &TaskSpec, generation: usize) -> Vec<u64> {
    match cfg.seed_policy {
        EnvSeedPolicy::PerGeneration => {
            let bucket = (generation / cfg.retention_cadence) as u64;
            retention_seeds(master, task, bucket, cfg.n_eval_envs)
        }
        EnvSeedPolicy::FixedPerTask => training_seeds(master, task, 0, cfg.n_eval_envs),
    }
}

fn evaluate_generation<E: Executor>(
    population: &Population,
    task: &TaskSpec,
    regularizer: &RegularizerState,
    cfg: &LifelongConfig,
    seeds: &[u64],
    exec: &E,
) -> GenerationEval {
    let genomes = &population.genomes;
    let raw = evaluate_population(genomes, task, &cfg.arena, seeds, exec);
    let selection: BTreeMap<GenomeId, f64> = genomes
        .iter()
        .zip(&raw)
        .map(|(g, &f)| (g.id, regularizer.apply(f, g, &cfg.neat.distance)))
        .collect();
    let champion = champion_index(&raw).expect("population is never empty");
    let n = raw.len() as f64;
    let mean_reference_distance = match &regularizer.reference {
        Some(r) if regularizer.enabled => {
            Some(genomes.iter().map(|g| genetic_distance(r, g, &cfg.neat.distance) / n).sum())
        }
        _ => None,
    };
    let mut species: Vec<_> = population.species.iter().map(|s| (s.id, s.members.len())).collect();
    species.sort_unstable();
    let census = CensusRow {
        generation: population.generation,
        species,
    };
    let row = GenerationRow {
        generation: population.generation,
        task_id: task.id.clone(),
        best_fitness: raw[champion],
        mean_fitness: raw.iter().map(|f| f / n).sum(),
        n_species: census.species.len(),
        champion: genomes[champion].id,
        mean_reference_distance,
    };
    GenerationEval {
        raw,
        selection,
        row,
        census,
    }
}

/// Evaluates the population on `task`, then speciates and reproduces it
/// using the regularized fitness as selection signal when a reference is
/// active.
pub fn run_generation<E: Executor>(
    population: &mut Population,
    task: &TaskSpec,
    regularizer: &RegularizerState,
    cfg: &LifelongConfig,
    master_seed: u64,
    exec: &E,
) -> Result<GenerationEval> {
    let g = population.generation;
    let seeds = train_seeds(&cfg.eval, master_seed, task, g);
    let ev = evaluate_generation(population, task, regularizer, cfg, &seeds, exec);
    let mut rng = seed::rng(seed::derive(master_seed, Stream::Reproduction, &[g as u64]));
    reproduce(population, &ev.selection, &cfg.neat, &mut rng)?;
    Ok(ev)
}

/// A lifelong run that can be advanced one generation at a time and
/// resumed from its [`LifelongState`].
#[derive(Debug, Clone)]
pub struct LifelongRun {
    config: LifelongConfig,
    master_seed: u64,
    state: LifelongState,
}

impl LifelongRun {
    pub fn new(config: LifelongConfig, master_seed: u64) -> Result<Self> {
        config.validate()?;
        let population = initial_population(master_seed, config.input_width(), config.population_size, &config.neat)?;
        let state = LifelongState {
            generation: 0,
            population,
            regularizer: RegularizerState::new(&config.regularizer),
            metrics: LifelongMetrics::default(),
            tracker: SpeciesTracker::default(),
            best_by_task: BTreeMap::new(),
            snapshots: Vec::new(),
        };
        Ok(LifelongRun {
            config,
            master_seed,
            state,
        })
    }

    pub fn resume(config: LifelongConfig, master_seed: u64, state: LifelongState) -> Result<Self> {
        config.validate()?;
        if state.generation > config.schedule.total_generations() {
            return Err(Error::Checkpoint("checkpoint is past the end of the schedule".into()));
        }
        if state.population.size != config.population_size {
            return Err(Error::Checkpoint("checkpoint population size differs from config".into()));
        }
        Ok(LifelongRun {
            config,
            master_seed,
            state,
        })
    }

    pub fn config(&self) -> &LifelongConfig {
        &self.config
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn state(&self) -> &LifelongState {
        &self.state
    }

    pub fn into_state(self) -> LifelongState {
        self.state
    }

    pub fn metrics(&self) -> &LifelongMetrics {
        &self.state.metrics
    }

    pub fn is_finished(&self) -> bool {
        self.state.generation >= self.config.schedule.total_generations()
    }

    /// Runs one generation: evaluation on the current task, retention on
    /// earlier tasks when due (every `retention_cadence` generations and at
    /// the end of each segment), forgetting and reference selection at
    /// segment ends, then reproduction unless this was the final
    /// generation. Returns `false` once the schedule is exhausted.
    pub fn step<E: Executor>(&mut self, exec: &E) -> Result<bool> {
        let cfg = &self.config;
        let schedule = &cfg.schedule;
        let state = &mut self.state;
        let g = state.generation;
        let Some((seg, offset)) = schedule.locate(g) else {
            return Ok(false);
        };
        let segment = &schedule.segments[seg];
        let task = &segment.task;
        let seeds = train_seeds(&cfg.eval, self.master_seed, task, g);
        let ev = evaluate_generation(&state.population, task, &state.regularizer, cfg, &seeds, exec);
        state.tracker.observe(&ev.census);

        let last = offset + 1 == segment.generations;
        let previous = schedule.previous_tasks(seg);
        if !previous.is_empty() && (g % cfg.eval.retention_cadence == 0 || last) {
            let champion = champion_index(&ev.raw).expect("population is never empty");
            for p in previous {
                let seeds = check_seeds(&cfg.eval, self.master_seed, p, g);
                let prev = evaluate_population(&state.population.genomes, p, &cfg.arena, &seeds, exec);
                let (r_pop, r_top) = retention(&prev, champion);
                debug_assert!(r_pop >= r_top);
                state.metrics.retention.push(RetentionRow {
                    generation: g,
                    eval_task_id: p.id.clone(),
                    r_pop,
                    r_top,
                });
                if last {
                    if let Some(&best) = state.best_by_task.get(&p.id) {
                        state.metrics.forgetting.push(ForgettingRow {
                            boundary_generation: g,
                            task_id: p.id.clone(),
                            f_pop: forgetting(best, r_pop),
                            f_top: forgetting(best, r_top),
                        });
                    }
                }
            }
        }

        if last {
            state.best_by_task.insert(task.id.clone(), ev.row.best_fitness);
            if state.regularizer.enabled && seg + 1 < schedule.segments.len() {
                state.regularizer.reference = select_reference(&state.population.genomes, &ev.selection).cloned();
            }
            state.snapshots.push(TaskSnapshot {
                segment: seg,
                task_id: task.id.clone(),
                boundary_generation: g,
                genomes: state.population.genomes.clone(),
                fitness: ev.raw.clone(),
                reference: state.regularizer.reference.clone(),
            });
        }

        state.metrics.generations.push(ev.row);
        state.metrics.census.push(ev.census);

        if g + 1 < schedule.total_generations() {
            let mut rng = seed::rng(seed::derive(self.master_seed, Stream::Reproduction, &[g as u64]));
            reproduce(&mut state.population, &ev.selection, &cfg.neat, &mut rng)?;
        }
        state.generation += 1;
        Ok(true)
    }

    pub fn run<E: Executor>(&mut self, exec: &E) -> Result<()> {
        while self.step(exec)? {}
        Ok(())
    }

    /// Advances until `generation` generations have been completed (or the
    /// schedule ends).
    pub fn run_until<E: Executor>(&mut self, generation: usize, exec: &E) -> Result<()> {
        while self.state.generation < generation && self.step(exec)? {}
        Ok(())
    }
}

pub fn run_lifelong<E: Executor>(config: LifelongConfig, master_seed: u64, exec: &E) -> Result<LifelongRun> {
    let mut run = LifelongRun::new(config, master_seed)?;
    run.run(exec)?;
    Ok(run)
}
