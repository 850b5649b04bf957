use alloc::string::String;
use alloc::vec::Vec;

use super::exec::Executor;
use crate::arena::{observation_width, Arena, ArenaConfig, TaskSpec};
use crate::neat::{Genome, GenomeId};
use crate::phenotype::{to_wheel_velocities, Phenotype};
use crate::seed::{self, Stream};
use crate::Result;

/// Fitness given to genomes that cannot be evaluated.
pub const FAILED_FITNESS: f64 = f64::MIN;

/// How training environments are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EnvSeedPolicy {
    /// Fresh environments every generation, shared by all genomes.
    #[default]
    PerGeneration,
    /// One set of environments per task, reused whenever the task is
    /// trained or checked for retention.
    FixedPerTask,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalConfig {
    pub n_eval_envs: usize,
    pub retention_cadence: usize,
    pub seed_policy: EnvSeedPolicy,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            n_eval_envs: 10,
            retention_cadence: 10,
            seed_policy: EnvSeedPolicy::PerGeneration,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_eval_envs == 0 {
            return Err(crate::Error::config("n_eval_envs must be at least 1"));
        }
        if self.retention_cadence == 0 {
            return Err(crate::Error::config("retention_cadence must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitnessRecord {
    pub genome_id: GenomeId,
    pub task_id: String,
    pub raw: f64,
    pub regularized: f64,
}

/// Episode seeds used to train on `task` at `coordinate` (the generation,
/// or 0 for a fixed set).
pub fn training_seeds(master: u64, task: &TaskSpec, coordinate: u64, n: usize) -> Vec<u64> {
    let t = seed::label_hash(&task.id);
    (0..n as u64)
        .map(|e| seed::derive(master, Stream::TrainingEnv, &[t, coordinate, e]))
        .collect()
}

/// Episode seeds for retention checks, drawn from a stream separate from
/// training and fixed per (task, generation bucket).
pub fn retention_seeds(master: u64, task: &TaskSpec, bucket: u64, n: usize) -> Vec<u64> {
    let t = seed::label_hash(&task.id);
    (0..n as u64)
        .map(|e| seed::derive(master, Stream::RetentionEnv, &[t, bucket, e]))
        .collect()
}

/// Total swarm reward of one episode with every agent running `phenotype`.
pub fn run_episode(phenotype: &Phenotype, arena_cfg: &ArenaConfig, task: &TaskSpec, episode_seed: u64) -> Result<i64> {
    let width = observation_width(task.n_colors(), arena_cfg.n_neighbors);
    if phenotype.input_width() != width {
        return Err(crate::Error::WidthMismatch {
            expected: width,
            actual: phenotype.input_width(),
        });
    }
    let mut arena = Arena::new(arena_cfg.clone(), task.clone())?;
    let mut obs = arena.reset(episode_seed)?;
    let mut scratch = Vec::new();
    let mut raw = [0.0; 3];
    let mut actions = alloc::vec![[0.0; 3]; arena_cfg.n_agents];
    let mut total = 0;
    loop {
        for (a, o) in actions.iter_mut().zip(&obs) {
            phenotype.activate_into(o.as_slice(), &mut scratch, &mut raw)?;
            *a = to_wheel_velocities(raw, arena_cfg.max_wheel_velocity);
        }
        let out = arena.step(&actions)?;
        total += out.reward;
        if out.done {
            return Ok(total);
        }
        obs = out.observations;
    }
}

fn mean_reward(phenotype: &Phenotype, arena_cfg: &ArenaConfig, task: &TaskSpec, seeds: &[u64]) -> f64 {
    let mut total = 0i64;
    for &s in seeds {
        match run_episode(phenotype, arena_cfg, task, s) {
            Ok(r) => total += r,
            Err(e) => {
                log::warn!("evaluation failed: {e}");
                return FAILED_FITNESS;
            }
        }
    }
    total as f64 / seeds.len() as f64
}

/// Raw fitness of one genome: mean episode reward over `seeds`.
pub fn evaluate_fitness(genome: &Genome, task: &TaskSpec, arena_cfg: &ArenaConfig, seeds: &[u64]) -> FitnessRecord {
    let raw = match Phenotype::decode(genome) {
        Ok(p) => mean_reward(&p, arena_cfg, task, seeds),
        Err(e) => {
            log::warn!("genome {} failed to decode: {e}", genome.id);
            FAILED_FITNESS
        }
    };
    FitnessRecord {
        genome_id: genome.id,
        task_id: task.id.clone(),
        raw,
        regularized: raw,
    }
}

/// Raw fitness of every genome on the same set of episodes. Each
/// (genome, episode) pair is an independent job; results are merged in
/// (genome, episode) order so the executor cannot change the outcome.
pub fn evaluate_population<E: Executor>(
    genomes: &[Genome],
    task: &TaskSpec,
    arena_cfg: &ArenaConfig,
    seeds: &[u64],
    exec: &E,
) -> Vec<f64> {
    let phenotypes: Vec<Option<Phenotype>> = exec.map(genomes.len(), |i| match Phenotype::decode(&genomes[i]) {
        Ok(p) => Some(p),
        Err(e) => {
            log::warn!("genome {} failed to decode: {e}", genomes[i].id);
            None
        }
    });
    let n = seeds.len();
    let episodes: Vec<Option<i64>> = exec.map(genomes.len() * n, |job| {
        let (g, e) = (job / n, job % n);
        let p = phenotypes[g].as_ref()?;
        match run_episode(p, arena_cfg, task, seeds[e]) {
            Ok(r) => Some(r),
            Err(err) => {
                log::warn!("genome {} failed evaluation: {err}", genomes[g].id);
                None
            }
        }
    });
    episodes
        .chunks(n.max(1))
        .map(|chunk| match chunk.iter().copied().collect::<Option<Vec<i64>>>() {
            Some(r) if n > 0 => r.iter().sum::<i64>() as f64 / n as f64,
            _ => FAILED_FITNESS,
        })
        .collect()
}
