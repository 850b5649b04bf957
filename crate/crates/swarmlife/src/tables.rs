//! CSV tables. Column order of the four main tables is fixed:
//!
//! * `fitness.csv`: generation, task_id, best_fitness, mean_fitness, n_species
//! * `retention.csv`: generation, eval_task_id, r_pop, r_top
//! * `forgetting.csv`: boundary_generation, task_id, f_pop, f_top
//! * `species.csv`: species_id, created_at, extinct_at, peak_size
//!
//! Per-run directories also get `census.csv` (generation, species_id, size)
//! and, for regularized runs, `reference_distance.csv`
//! (generation, mean_distance).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use swarmlife_core::evolve::{LifelongMetrics, LifespanRow};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitnessCsv {
    pub generation: usize,
    pub task_id: String,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub n_species: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetentionCsv {
    pub generation: usize,
    pub eval_task_id: String,
    pub r_pop: f64,
    pub r_top: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForgettingCsv {
    pub boundary_generation: usize,
    pub task_id: String,
    pub f_pop: f64,
    pub f_top: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesCsv {
    pub species_id: u64,
    pub created_at: usize,
    pub extinct_at: Option<usize>,
    pub peak_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusCsv {
    pub generation: usize,
    pub species_id: u64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceCsv {
    pub generation: usize,
    pub mean_distance: f64,
}

/// Per-run integer species counts are written as integers.
#[derive(Serialize)]
struct FitnessRunCsv<'a> {
    generation: usize,
    task_id: &'a str,
    best_fitness: f64,
    mean_fitness: f64,
    n_species: usize,
}

pub fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = T>) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> anyhow::Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<Vec<T>, _>>()?)
}

pub const FITNESS_HEADER: [&str; 5] = ["generation", "task_id", "best_fitness", "mean_fitness", "n_species"];
pub const RETENTION_HEADER: [&str; 4] = ["generation", "eval_task_id", "r_pop", "r_top"];
pub const FORGETTING_HEADER: [&str; 4] = ["boundary_generation", "task_id", "f_pop", "f_top"];
pub const SPECIES_HEADER: [&str; 4] = ["species_id", "created_at", "extinct_at", "peak_size"];

fn retention_rows(m: &LifelongMetrics) -> Vec<RetentionCsv> {
    m.retention
        .iter()
        .map(|r| RetentionCsv {
            generation: r.generation,
            eval_task_id: r.eval_task_id.clone(),
            r_pop: r.r_pop,
            r_top: r.r_top,
        })
        .collect()
}

fn forgetting_rows(m: &LifelongMetrics) -> Vec<ForgettingCsv> {
    m.forgetting
        .iter()
        .map(|f| ForgettingCsv {
            boundary_generation: f.boundary_generation,
            task_id: f.task_id.clone(),
            f_pop: f.f_pop,
            f_top: f.f_top,
        })
        .collect()
}

/// Writes the per-run tables and returns their paths.
pub fn write_run_tables(dir: &Path, m: &LifelongMetrics, species: &[LifespanRow]) -> anyhow::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let p = dir.join("fitness.csv");
    write_csv(
        &p,
        &FITNESS_HEADER,
        m.generations.iter().map(|r| FitnessRunCsv {
            generation: r.generation,
            task_id: &r.task_id,
            best_fitness: r.best_fitness,
            mean_fitness: r.mean_fitness,
            n_species: r.n_species,
        }),
    )?;
    out.push(p);
    let p = dir.join("retention.csv");
    write_csv(&p, &RETENTION_HEADER, retention_rows(m))?;
    out.push(p);
    let p = dir.join("forgetting.csv");
    write_csv(&p, &FORGETTING_HEADER, forgetting_rows(m))?;
    out.push(p);
    let p = dir.join("species.csv");
    write_csv(
        &p,
        &SPECIES_HEADER,
        species.iter().map(|s| SpeciesCsv {
            species_id: s.species_id,
            created_at: s.created_at,
            extinct_at: s.extinct_at,
            peak_size: s.peak_size,
        }),
    )?;
    out.push(p);
    let p = dir.join("census.csv");
    write_csv(
        &p,
        &["generation", "species_id", "size"],
        m.census.iter().flat_map(|c| {
            c.species.iter().map(move |&(species_id, size)| CensusCsv {
                generation: c.generation,
                species_id,
                size,
            })
        }),
    )?;
    out.push(p);
    let distances: Vec<DistanceCsv> = m
        .generations
        .iter()
        .filter_map(|r| {
            r.mean_reference_distance.map(|d| DistanceCsv {
                generation: r.generation,
                mean_distance: d,
            })
        })
        .collect();
    if !distances.is_empty() {
        let p = dir.join("reference_distance.csv");
        write_csv(&p, &["generation", "mean_distance"], distances)?;
        out.push(p);
    }
    Ok(out)
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut n) = (0.0, 0usize);
    for x in xs {
        s += x;
        n += 1;
    }
    s / n as f64
}

/// Seed-averaged tables. Rows are matched by position, which is valid
/// because every seed shares the schedule.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Aggregate {
    pub fitness: Vec<FitnessCsv>,
    pub retention: Vec<RetentionCsv>,
    pub forgetting: Vec<ForgettingCsv>,
}

pub fn aggregate(runs: &[&LifelongMetrics]) -> anyhow::Result<Aggregate> {
    anyhow::ensure!(!runs.is_empty(), "nothing to aggregate");
    let first = runs[0];
    for r in runs {
        anyhow::ensure!(
            r.generations.len() == first.generations.len()
                && r.retention.len() == first.retention.len()
                && r.forgetting.len() == first.forgetting.len(),
            "runs have different shapes"
        );
    }
    let fitness = (0..first.generations.len())
        .map(|i| {
            let rows = || runs.iter().map(move |m| &m.generations[i]);
            FitnessCsv {
                generation: first.generations[i].generation,
                task_id: first.generations[i].task_id.clone(),
                best_fitness: mean(rows().map(|r| r.best_fitness)),
                mean_fitness: mean(rows().map(|r| r.mean_fitness)),
                n_species: mean(rows().map(|r| r.n_species as f64)),
            }
        })
        .collect();
    let retention = (0..first.retention.len())
        .map(|i| {
            let rows = || runs.iter().map(move |m| &m.retention[i]);
            RetentionCsv {
                generation: first.retention[i].generation,
                eval_task_id: first.retention[i].eval_task_id.clone(),
                r_pop: mean(rows().map(|r| r.r_pop)),
                r_top: mean(rows().map(|r| r.r_top)),
            }
        })
        .collect();
    let forgetting = (0..first.forgetting.len())
        .map(|i| {
            let rows = || runs.iter().map(move |m| &m.forgetting[i]);
            ForgettingCsv {
                boundary_generation: first.forgetting[i].boundary_generation,
                task_id: first.forgetting[i].task_id.clone(),
                f_pop: mean(rows().map(|r| r.f_pop)),
                f_top: mean(rows().map(|r| r.f_top)),
            }
        })
        .collect();
    Ok(Aggregate {
        fitness,
        retention,
        forgetting,
    })
}

pub fn write_aggregate(dir: &Path, a: &Aggregate) -> anyhow::Result<Vec<PathBuf>> {
    let fitness = dir.join("fitness.csv");
    write_csv(&fitness, &FITNESS_HEADER, &a.fitness)?;
    let retention = dir.join("retention.csv");
    write_csv(&retention, &RETENTION_HEADER, &a.retention)?;
    let forgetting = dir.join("forgetting.csv");
    write_csv(&forgetting, &FORGETTING_HEADER, &a.forgetting)?;
    Ok(vec![fitness, retention, forgetting])
}
