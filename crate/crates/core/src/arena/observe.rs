use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use super::sim::{ArenaState, BoxStatus};
use super::task::TaskSpec;
use super::ArenaConfig;

/// Sensor input vector of one agent, in [0, 1] componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation(pub Vec<f64>);

impl Observation {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Entity types of a neighbor slot, in one-hot order. Colors follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EntityKind {
    None,
    Wall,
    Agent,
    Box(usize),
}

impl EntityKind {
    fn one_hot_index(self) -> usize {
        match self {
            EntityKind::None => 0,
            EntityKind::Wall => 1,
            EntityKind::Agent => 2,
            EntityKind::Box(c) => 3 + c,
        }
    }
}

/// Offsets of the feature groups inside an observation:
/// neighbor types (`n` groups of `c + 3`), distances (`n`), directions
/// (`n` sin/cos pairs), heading (sin, cos), carried color (`c + 1`,
/// index 0 = none) and target color (`c`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObservationLayout {
    pub n_colors: usize,
    pub n_neighbors: usize,
}

impl ObservationLayout {
    pub fn types(&self, slot: usize) -> usize {
        slot * (self.n_colors + 3)
    }
    pub fn distance(&self, slot: usize) -> usize {
        self.n_neighbors * (self.n_colors + 3) + slot
    }
    pub fn direction(&self, slot: usize) -> usize {
        self.n_neighbors * (self.n_colors + 4) + 2 * slot
    }
    pub fn heading(&self) -> usize {
        self.n_neighbors * (self.n_colors + 6)
    }
    pub fn carrying(&self) -> usize {
        self.heading() + 2
    }
    pub fn target(&self) -> usize {
        self.carrying() + self.n_colors + 1
    }
    pub fn width(&self) -> usize {
        self.target() + self.n_colors
    }
}

/// `(c + 3) n + n + 2n + 2 + (c + 1) + c`.
pub fn observation_width(n_colors: usize, n_neighbors: usize) -> usize {
    ObservationLayout { n_colors, n_neighbors }.width()
}

fn encode_angle(a: f64) -> (f64, f64) {
    ((libm::sin(a) + 1.0) / 2.0, (libm::cos(a) + 1.0) / 2.0)
}

/// Builds the observation of `agent`. Perceivable entities within sensor
/// range are free boxes, the nearest wall and (when enabled) other agents;
/// the closest `n_neighbors` fill the slots nearest first.
pub(crate) fn observe(cfg: &ArenaConfig, task: &TaskSpec, state: &ArenaState, agent: usize) -> Observation {
    let layout = ObservationLayout {
        n_colors: task.n_colors(),
        n_neighbors: cfg.n_neighbors,
    };
    let mut v = alloc::vec![0.0; layout.width()];
    let me = &state.agents[agent];
    let [x, y] = me.position;

    // (distance, kind, tie-break index, world angle)
    let mut seen: Vec<(f64, EntityKind, usize, f64)> = Vec::new();

    let walls = [
        (x, PI),
        (cfg.size - x, 0.0),
        (y, -FRAC_PI_2),
        (cfg.size - y, FRAC_PI_2),
    ];
    let (wall_d, wall_a) = walls
        .iter()
        .copied()
        .fold((f64::INFINITY, 0.0), |best, w| if w.0 < best.0 { w } else { best });
    if wall_d <= cfg.sensor_range {
        seen.push((wall_d, EntityKind::Wall, 0, wall_a));
    }
    for (i, b) in state.boxes.iter().enumerate() {
        if b.status != BoxStatus::Free {
            continue;
        }
        let (dx, dy) = (b.position[0] - x, b.position[1] - y);
        let d = libm::hypot(dx, dy);
        if d <= cfg.sensor_range {
            seen.push((d, EntityKind::Box(b.color), i, libm::atan2(dy, dx)));
        }
    }
    if cfg.see_other_agents {
        for (i, other) in state.agents.iter().enumerate() {
            if i == agent {
                continue;
            }
            let (dx, dy) = (other.position[0] - x, other.position[1] - y);
            let d = libm::hypot(dx, dy);
            if d <= cfg.sensor_range {
                seen.push((d, EntityKind::Agent, i, libm::atan2(dy, dx)));
            }
        }
    }
    seen.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    for slot in 0..cfg.n_neighbors {
        let (kind, dist, dir) = match seen.get(slot) {
            Some(&(d, k, _, a)) => (k, (d / cfg.sensor_range).min(1.0), encode_angle(a - me.heading)),
            None => (EntityKind::None, 0.0, (0.5, 0.5)),
        };
        v[layout.types(slot) + kind.one_hot_index()] = 1.0;
        v[layout.distance(slot)] = dist;
        v[layout.direction(slot)] = dir.0;
        v[layout.direction(slot) + 1] = dir.1;
    }
    let (hs, hc) = encode_angle(me.heading);
    v[layout.heading()] = hs;
    v[layout.heading() + 1] = hc;
    let carried = me.carrying.map_or(0, |b| state.boxes[b].color + 1);
    v[layout.carrying() + carried] = 1.0;
    v[layout.target() + task.target] = 1.0;
    Observation(v)
}
