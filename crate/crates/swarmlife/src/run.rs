//! Experiment runner: one lifelong run per seed, per-run and aggregate
//! artifacts, λ sweeps and standalone evaluation.

use std::path::{Path, PathBuf};

use anyhow::Context as _;
use serde::{Deserialize, Serialize};
use swarmlife_core::arena::TaskSpec;
use swarmlife_core::evolve::{champion_index, run_episode, Executor, LifelongMetrics, LifelongRun, LifelongState};
use swarmlife_core::neat::Genome;
use swarmlife_core::phenotype::Phenotype;
use swarmlife_core::seed::{self, Stream};

use crate::checkpoint::{Checkpoint, FORMAT_VERSION};
use crate::config::ExperimentConfig;
use crate::{genome_io, plot, tables};

pub const OUTPUT_ROOT_ENV: &str = "SWARMLIFE_OUTPUT_ROOT";

/// `output_dir`, placed under `$SWARMLIFE_OUTPUT_ROOT` when that is set
/// and the configured path is relative.
pub fn output_dir(cfg: &ExperimentConfig) -> PathBuf {
    let dir = PathBuf::from(&cfg.output_dir);
    match std::env::var_os(OUTPUT_ROOT_ENV) {
        Some(root) if dir.is_relative() => PathBuf::from(root).join(dir),
        _ => dir,
    }
}

pub fn run_id(seed: u64) -> String {
    format!("seed_{seed}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEntry {
    pub seed: u64,
    pub run_id: String,
    pub lambda: f64,
    pub dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub tool_version: String,
    pub runs: Vec<RunEntry>,
    pub artifacts: Vec<PathBuf>,
}

impl RunManifest {
    pub fn save(&self, path: &Path) -> anyhow::Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")
            .with_context(|| format!("writing {}", path.display()))
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(serde_json::from_str(&text)?)
    }
}

fn write_genomes(path: &Path, genomes: &[Genome]) -> anyhow::Result<()> {
    let text: String = genomes.iter().map(genome_io::to_text).collect();
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_task_checkpoint(dir: &Path, cp: &Checkpoint) -> anyhow::Result<Vec<PathBuf>> {
    let snap = cp.state.snapshots.last().expect("called after a boundary");
    let tdir = dir
        .join("checkpoints")
        .join(format!("task_{:02}_{}", snap.segment, snap.task_id));
    std::fs::create_dir_all(&tdir).with_context(|| format!("creating {}", tdir.display()))?;
    let mut out = Vec::new();
    let p = tdir.join("population.genomes");
    write_genomes(&p, &snap.genomes)?;
    out.push(p);
    if let Some(i) = champion_index(&snap.fitness) {
        let p = tdir.join("champion.genome");
        genome_io::write(&p, &snap.genomes[i])?;
        out.push(p);
    }
    if let Some(r) = &snap.reference {
        let p = tdir.join("reference.genome");
        genome_io::write(&p, r)?;
        out.push(p);
    }
    let p = tdir.join("state.json");
    cp.save(&p)?;
    out.push(p);
    Ok(out)
}

/// Runs (or resumes) one seed into `dir` and writes its artifacts.
pub fn run_seed<E: Executor>(
    cfg: &ExperimentConfig,
    seed: u64,
    dir: &Path,
    resume: bool,
    exec: &E,
) -> anyhow::Result<(LifelongRun, Vec<PathBuf>)> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let lcfg = cfg.lifelong(seed)?;
    let hash = cfg.hash();
    let latest = dir.join("checkpoint.json");
    let mut run = if resume && latest.exists() {
        let cp = Checkpoint::load(&latest)?;
        anyhow::ensure!(
            cp.config_hash == hash && cp.seed == seed,
            "{} belongs to a different configuration or seed",
            latest.display()
        );
        log::info!("seed {seed}: resuming at generation {}", cp.state.generation);
        LifelongRun::resume(lcfg, seed, cp.state)?
    } else {
        LifelongRun::new(lcfg, seed)?
    };
    let checkpoint = |state: &LifelongState| Checkpoint {
        format_version: FORMAT_VERSION,
        config_hash: hash.clone(),
        seed,
        state: state.clone(),
    };
    let mut artifacts = Vec::new();
    while !run.is_finished() {
        let snaps = run.state().snapshots.len();
        run.step(exec)?;
        let state = run.state();
        if let Some(r) = state.metrics.generations.last() {
            log::debug!("seed {seed} gen {} task {} best {}", r.generation, r.task_id, r.best_fitness);
        }
        let boundary = state.snapshots.len() > snaps;
        if boundary {
            artifacts.extend(write_task_checkpoint(dir, &checkpoint(state))?);
        }
        let periodic = cfg.checkpoint_every > 0 && state.generation % cfg.checkpoint_every == 0;
        if boundary || periodic {
            checkpoint(state).save(&latest)?;
        }
    }
    checkpoint(run.state()).save(&latest)?;
    artifacts.push(latest);
    let species = run.state().tracker.table();
    artifacts.extend(tables::write_run_tables(dir, run.metrics(), &species)?);
    artifacts.extend(run_plots(dir, run.metrics(), &species)?);
    Ok((run, artifacts))
}

fn run_plots(
    dir: &Path,
    m: &LifelongMetrics,
    species: &[swarmlife_core::evolve::LifespanRow],
) -> anyhow::Result<Vec<PathBuf>> {
    let agg = tables::aggregate(&[m])?;
    let mut out = curve_plots(dir, &agg)?;
    let p = dir.join("lifespans.svg");
    plot::lifespans(&p, species, m.generations.len())?;
    out.push(p);
    Ok(out)
}

fn curve_plots(dir: &Path, agg: &tables::Aggregate) -> anyhow::Result<Vec<PathBuf>> {
    let pop = dir.join("curves_pop.svg");
    plot::curves(&pop, &agg.fitness, &agg.retention, false)?;
    let top = dir.join("curves_top.svg");
    plot::curves(&top, &agg.fitness, &agg.retention, true)?;
    let sp = dir.join("species.svg");
    let counts = agg.fitness.iter().map(|r| (r.generation, r.n_species)).collect();
    plot::species_counts(&sp, &[("species".into(), counts)])?;
    Ok(vec![pop, top, sp])
}

/// Result of [`evolve`]: the manifest plus the finished runs in seed order.
pub struct Evolved {
    pub manifest: RunManifest,
    pub runs: Vec<LifelongRun>,
    pub root: PathBuf,
}

/// Runs every configured seed under `root`: one directory per seed plus an
/// `aggregate` directory, the canonical config and a manifest.
pub fn evolve<E: Executor>(cfg: &ExperimentConfig, root: &Path, resume: bool, exec: &E) -> anyhow::Result<Evolved> {
    std::fs::create_dir_all(root).with_context(|| format!("creating {}", root.display()))?;
    let config_path = root.join("config.toml");
    std::fs::write(&config_path, cfg.canonical()).with_context(|| format!("writing {}", config_path.display()))?;
    let mut artifacts = vec![config_path];
    let mut entries = Vec::new();
    let mut runs = Vec::new();
    for &seed in &cfg.seeds {
        let id = run_id(seed);
        let dir = root.join(&id);
        log::info!("running {id}");
        let (run, files) = run_seed(cfg, seed, &dir, resume, exec)?;
        artifacts.extend(files);
        entries.push(RunEntry {
            seed,
            run_id: id,
            lambda: run.config().regularizer.lambda,
            dir,
        });
        runs.push(run);
    }
    let adir = root.join("aggregate");
    std::fs::create_dir_all(&adir).with_context(|| format!("creating {}", adir.display()))?;
    let metrics: Vec<&LifelongMetrics> = runs.iter().map(|r| r.metrics()).collect();
    let agg = tables::aggregate(&metrics)?;
    artifacts.extend(tables::write_aggregate(&adir, &agg)?);
    artifacts.extend(curve_plots(&adir, &agg)?);
    let manifest = RunManifest {
        config_hash: cfg.hash(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        runs: entries,
        artifacts,
    };
    manifest.save(&root.join("manifest.json"))?;
    Ok(Evolved {
        manifest,
        runs,
        root: root.to_path_buf(),
    })
}

/// One row of a λ sweep: seed-averaged final current-task fitness and the
/// retention and forgetting of one earlier task at the last boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub task_id: String,
    pub c: f64,
    pub previous_task_id: String,
    pub r_pop: f64,
    pub r_top: f64,
    pub f_pop: f64,
    pub f_top: f64,
}

pub fn sweep_rows(lambda: f64, agg: &tables::Aggregate) -> Vec<SweepRow> {
    let Some(last) = agg.fitness.last() else {
        return Vec::new();
    };
    let Some(boundary) = agg.forgetting.last().map(|f| f.boundary_generation) else {
        return Vec::new();
    };
    agg.forgetting
        .iter()
        .filter(|f| f.boundary_generation == boundary)
        .filter_map(|f| {
            let r = agg
                .retention
                .iter()
                .find(|r| r.generation == boundary && r.eval_task_id == f.task_id)?;
            Some(SweepRow {
                lambda,
                task_id: last.task_id.clone(),
                c: last.best_fitness,
                previous_task_id: f.task_id.clone(),
                r_pop: r.r_pop,
                r_top: r.r_top,
                f_pop: f.f_pop,
                f_top: f.f_top,
            })
        })
        .collect()
}

pub fn lambda_dir(lambda: f64) -> String {
    format!("lambda_{lambda}")
}

/// One full run set per λ (regularizer forced on, per-seed map ignored),
/// followed by `sweep.csv` in `root`.
pub fn sweep_lambda<E: Executor>(
    cfg: &ExperimentConfig,
    lambdas: &[f64],
    root: &Path,
    exec: &E,
) -> anyhow::Result<Vec<SweepRow>> {
    if lambdas.is_empty() {
        return Err(crate::config::ConfigError::new("lambdas", "the λ list is empty").into());
    }
    let mut rows = Vec::new();
    for &lambda in lambdas {
        let mut c = cfg.clone();
        c.regularizer.enabled = true;
        c.regularizer.lambda = lambda;
        c.regularizer.lambda_per_seed.clear();
        c.validate()?;
        let evolved = evolve(&c, &root.join(lambda_dir(lambda)), false, exec)?;
        let metrics: Vec<&LifelongMetrics> = evolved.runs.iter().map(|r| r.metrics()).collect();
        rows.extend(sweep_rows(lambda, &tables::aggregate(&metrics)?));
    }
    tables::write_csv(
        &root.join("sweep.csv"),
        &["lambda", "task_id", "c", "previous_task_id", "r_pop", "r_top", "f_pop", "f_top"],
        &rows,
    )?;
    Ok(rows)
}

/// Episode totals of one genome on one task.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub task_id: String,
    pub episodes: Vec<i64>,
    pub mean: f64,
}

pub fn eval_seeds(seed_value: u64, task: &TaskSpec, n: usize) -> Vec<u64> {
    let label = seed::label_hash(&task.id);
    (0..n as u64)
        .map(|i| seed::derive(seed_value, Stream::Eval, &[label, i]))
        .collect()
}

pub fn evaluate_genome<E: Executor>(
    genome: &Genome,
    cfg: &ExperimentConfig,
    task: &TaskSpec,
    n_envs: usize,
    seed_value: u64,
    exec: &E,
) -> anyhow::Result<EvalReport> {
    anyhow::ensure!(n_envs > 0, "n-envs must be at least 1");
    let phenotype = Phenotype::decode(genome)?;
    let arena = cfg.arena();
    let width = swarmlife_core::arena::observation_width(task.n_colors(), arena.n_neighbors);
    if phenotype.input_width() != width {
        anyhow::bail!(
            "genome {} has {} inputs, but task `{}` over {} colors needs {}",
            genome.id,
            phenotype.input_width(),
            task.id,
            task.n_colors(),
            width
        );
    }
    let seeds = eval_seeds(seed_value, task, n_envs);
    let episodes = exec
        .map(n_envs, |i| run_episode(&phenotype, &arena, task, seeds[i]))
        .into_iter()
        .collect::<swarmlife_core::Result<Vec<i64>>>()?;
    let mean = episodes.iter().sum::<i64>() as f64 / n_envs as f64;
    Ok(EvalReport {
        task_id: task.id.clone(),
        episodes,
        mean,
    })
}
