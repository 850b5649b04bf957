//! Episode replay: a JSON-lines trajectory log and one PNG per step.

use std::io::{BufRead as _, BufWriter, Write as _};
use std::path::{Path, PathBuf};

use anyhow::Context as _;
use image::{Rgb, RgbImage};
use imageproc::drawing::{draw_filled_circle_mut, draw_filled_rect_mut, draw_line_segment_mut};
use imageproc::rect::Rect;
use swarmlife_core::arena::{Arena, ArenaConfig, ArenaState, BoxStatus, TaskSpec, TrajectoryRecord};
use swarmlife_core::neat::Genome;
use swarmlife_core::phenotype::{to_wheel_velocities, Phenotype};

use crate::plot::task_color;

pub const PIXELS_PER_UNIT: f64 = 24.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub records: Vec<TrajectoryRecord>,
    pub total_reward: i64,
}

/// Runs one episode and calls `frame` with the arena after every step.
pub fn record(
    genome: &Genome,
    arena_cfg: &ArenaConfig,
    task: &TaskSpec,
    episode_seed: u64,
    mut frame: impl FnMut(&TrajectoryRecord, &ArenaState) -> anyhow::Result<()>,
) -> anyhow::Result<Replay> {
    let phenotype = Phenotype::decode(genome)?;
    let mut arena = Arena::new(arena_cfg.clone(), task.clone())?;
    let mut obs = arena.reset(episode_seed)?;
    let width = obs[0].as_slice().len();
    if phenotype.input_width() != width {
        anyhow::bail!(
            "genome {} expects {} inputs but task `{}` with {} colors produces {}",
            genome.id,
            phenotype.input_width(),
            task.id,
            task.n_colors(),
            width
        );
    }
    let mut scratch = Vec::new();
    let mut raw = [0.0; 3];
    let mut actions = vec![[0.0; 3]; arena_cfg.n_agents];
    let mut records = Vec::with_capacity(arena_cfg.duration);
    let mut total = 0;
    loop {
        for (a, o) in actions.iter_mut().zip(&obs) {
            phenotype.activate_into(o.as_slice(), &mut scratch, &mut raw)?;
            *a = to_wheel_velocities(raw, arena_cfg.max_wheel_velocity);
        }
        let out = arena.step(&actions)?;
        total += out.reward;
        let rec = arena.snapshot(&out.events);
        frame(&rec, arena.state().expect("arena was reset"))?;
        records.push(rec);
        if out.done {
            break;
        }
        obs = out.observations;
    }
    Ok(Replay {
        records,
        total_reward: total,
    })
}

/// Reward recomputed from the events in a trajectory log.
pub fn reward_from_log(records: &[TrajectoryRecord]) -> i64 {
    records
        .iter()
        .flat_map(|r| r.agents.iter())
        .filter_map(|a| a.event)
        .map(|k| k.reward())
        .sum()
}

pub fn write_log(path: &Path, records: &[TrajectoryRecord]) -> anyhow::Result<()> {
    let f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(f);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_log(path: &Path) -> anyhow::Result<Vec<TrajectoryRecord>> {
    let f = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    std::io::BufReader::new(f)
        .lines()
        .enumerate()
        .map(|(i, line)| {
            let line = line?;
            serde_json::from_str(&line).with_context(|| format!("{}:{}", path.display(), i + 1))
        })
        .collect()
}

pub fn render_frame(cfg: &ArenaConfig, task: &TaskSpec, state: &ArenaState) -> RgbImage {
    let side = (cfg.size * PIXELS_PER_UNIT).ceil() as u32;
    let mut img = RgbImage::from_pixel(side, side, Rgb([250, 250, 250]));
    let px = |p: [f64; 2]| {
        (
            (p[0] * PIXELS_PER_UNIT) as f32,
            (side as f64 - p[1] * PIXELS_PER_UNIT) as f32,
        )
    };
    let zone = (cfg.drop_zone_depth * PIXELS_PER_UNIT).round() as u32;
    draw_filled_rect_mut(&mut img, Rect::at(0, 0).of_size(side, zone.max(1)), Rgb([215, 215, 215]));
    let rgb = |color: usize| {
        let name = task.colors.name(color).unwrap_or("");
        let c = task_color(name, color);
        Rgb([c.0, c.1, c.2])
    };
    let box_r = (0.25 * PIXELS_PER_UNIT) as i32;
    for b in &state.boxes {
        if b.status == BoxStatus::Free {
            let (x, y) = px(b.position);
            draw_filled_circle_mut(&mut img, (x as i32, y as i32), box_r, rgb(b.color));
        }
    }
    let agent_r = (0.5 * PIXELS_PER_UNIT) as i32;
    for a in &state.agents {
        let (x, y) = px(a.position);
        draw_filled_circle_mut(&mut img, (x as i32, y as i32), agent_r, Rgb([60, 60, 60]));
        if let Some(b) = a.carrying {
            draw_filled_circle_mut(&mut img, (x as i32, y as i32), box_r, rgb(state.boxes[b].color));
        }
        let tip = (
            x + (a.heading.cos() * agent_r as f64) as f32,
            y - (a.heading.sin() * agent_r as f64) as f32,
        );
        draw_line_segment_mut(&mut img, (x, y), tip, Rgb([255, 255, 255]));
    }
    img
}

/// Replays an episode into `out`: `trajectory.jsonl` plus, unless
/// `frames` is false, `frames/frame_NNNNN.png` for every step.
pub fn replay_to_dir(
    genome: &Genome,
    arena_cfg: &ArenaConfig,
    task: &TaskSpec,
    episode_seed: u64,
    out: &Path,
    frames: bool,
) -> anyhow::Result<(Replay, PathBuf)> {
    let frame_dir = out.join("frames");
    std::fs::create_dir_all(if frames { &frame_dir } else { out })
        .with_context(|| format!("creating {}", out.display()))?;
    let replay = record(genome, arena_cfg, task, episode_seed, |rec, state| {
        if frames {
            let p = frame_dir.join(format!("frame_{:05}.png", rec.step));
            render_frame(arena_cfg, task, state)
                .save(&p)
                .with_context(|| format!("writing {}", p.display()))?;
        }
        Ok(())
    })?;
    let log = out.join("trajectory.jsonl");
    write_log(&log, &replay.records)?;
    Ok((replay, log))
}
