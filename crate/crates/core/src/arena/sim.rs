use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand::Rng as _;

use super::config::ArenaConfig;
use super::kinematics::kinematics;
use super::observe::{observe, Observation};
use super::task::{ColorId, TaskSpec};
use crate::seed::{self, Rng};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum EventKind {
    PickupTarget,
    PickupWrong,
    DeliveryTarget,
    DeliveryWrong,
}

impl EventKind {
    pub fn reward(self) -> i64 {
        match self {
            EventKind::PickupTarget => 1,
            EventKind::PickupWrong => -1,
            EventKind::DeliveryTarget => 2,
            EventKind::DeliveryWrong => 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::PickupTarget => "pickup-target",
            EventKind::PickupWrong => "pickup-wrong",
            EventKind::DeliveryTarget => "delivery-target",
            EventKind::DeliveryWrong => "delivery-wrong",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Event {
    pub agent: usize,
    pub kind: EventKind,
    pub box_id: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxStatus {
    Free,
    Carried(usize),
    Retrieved,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    pub position: [f64; 2],
    pub heading: f64,
    pub carrying: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxState {
    pub position: [f64; 2],
    pub color: ColorId,
    pub status: BoxStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArenaState {
    pub agents: Vec<AgentState>,
    pub boxes: Vec<BoxState>,
    pub step: usize,
    pub retrieved: usize,
    rng: Rng,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub observations: Vec<Observation>,
    pub reward: i64,
    pub events: Vec<Event>,
    pub done: bool,
}

/// One agent in one line of a trajectory log.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AgentSnapshot {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub carrying: Option<ColorId>,
    pub event: Option<EventKind>,
}

/// Everything that happened in one step.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectoryRecord {
    pub step: usize,
    pub agents: Vec<AgentSnapshot>,
}

/// Swarm-foraging simulator.
///
/// The task can be switched with [`Arena::change_task`]; the switch takes
/// effect at the next [`Arena::reset`].
#[derive(Debug, Clone)]
pub struct Arena {
    config: ArenaConfig,
    task: TaskSpec,
    pending: Option<TaskSpec>,
    state: Option<ArenaState>,
}

impl Arena {
    pub fn new(config: ArenaConfig, task: TaskSpec) -> Result<Self> {
        config.validate()?;
        task.validate()?;
        Ok(Arena {
            config,
            task,
            pending: None,
            state: None,
        })
    }

    pub fn config(&self) -> &ArenaConfig {
        &self.config
    }

    pub fn task(&self) -> &TaskSpec {
        &self.task
    }

    pub fn state(&self) -> Option<&ArenaState> {
        self.state.as_ref()
    }

    /// Direct access for scripted scenarios and tests.
    pub fn state_mut(&mut self) -> Option<&mut ArenaState> {
        self.state.as_mut()
    }

    pub fn change_task(&mut self, task: TaskSpec) -> Result<()> {
        task.validate()?;
        if task.colors != self.task.colors {
            return Err(Error::config("new task uses a different global color set"));
        }
        self.pending = Some(task);
        Ok(())
    }

    pub fn reset(&mut self, episode_seed: u64) -> Result<Vec<Observation>> {
        if let Some(t) = self.pending.take() {
            self.task = t;
        }
        let cfg = &self.config;
        let mut rng = seed::rng(episode_seed);
        let floor = cfg.size - cfg.drop_zone_depth;

        let mut agents: Vec<AgentState> = Vec::with_capacity(cfg.n_agents);
        for _ in 0..cfg.n_agents {
            let spot = (0..cfg.placement_retries)
                .map(|_| [rng.random::<f64>() * cfg.size, rng.random::<f64>() * floor])
                .find(|p| agents.iter().all(|a| dist(a.position, *p) >= cfg.min_agent_separation))
                .ok_or_else(|| Error::config("arena too crowded to place agents"))?;
            agents.push(AgentState {
                position: spot,
                heading: rng.random::<f64>() * TAU,
                carrying: None,
            });
        }

        let n_target = cfg.n_target_boxes();
        let distractors: Vec<ColorId> = self.task.distractors().collect();
        let mut boxes = Vec::with_capacity(cfg.n_boxes);
        for i in 0..cfg.n_boxes {
            let color = if i < n_target {
                self.task.target
            } else {
                distractors[(i - n_target) % distractors.len()]
            };
            let position = if cfg.boxes_in_line {
                [(i as f64 + 0.5) * cfg.size / cfg.n_boxes as f64, floor / 2.0]
            } else {
                (0..cfg.placement_retries)
                    .map(|_| [rng.random::<f64>() * cfg.size, rng.random::<f64>() * floor])
                    .find(|p| clear_of_agents(cfg, &agents, *p))
                    .ok_or_else(|| Error::config("arena too crowded to place boxes"))?
            };
            boxes.push(BoxState {
                position,
                color,
                status: BoxStatus::Free,
            });
        }

        self.state = Some(ArenaState {
            agents,
            boxes,
            step: 0,
            retrieved: 0,
            rng,
        });
        Ok(self.observe_all())
    }

    pub fn observe(&self, agent: usize) -> Observation {
        let state = self.state.as_ref().expect("arena was reset");
        observe(&self.config, &self.task, state, agent)
    }

    pub fn observe_all(&self) -> Vec<Observation> {
        (0..self.config.n_agents).map(|i| self.observe(i)).collect()
    }

    pub fn is_done(&self) -> bool {
        self.state.as_ref().is_some_and(|s| self.done(s))
    }

    fn done(&self, s: &ArenaState) -> bool {
        s.step >= self.config.duration || s.retrieved >= self.config.max_retrieves
    }

    /// Advances every agent by one time step, in index order.
    ///
    /// After moving, a carrying agent inside the drop zone delivers its box
    /// (target: +2, other colors: 0, both count as retrieves); an empty
    /// agent picks up the nearest free box within `sensitivity` (target:
    /// +1, other colors: -1). Delivered boxes are re-placed at random.
    pub fn step(&mut self, actions: &[[f64; 3]]) -> Result<StepOutcome> {
        let state = self.state.as_ref().ok_or(Error::EpisodeFinished)?;
        if self.done(state) {
            return Err(Error::EpisodeFinished);
        }
        if actions.len() != self.config.n_agents {
            return Err(Error::ActionCount {
                expected: self.config.n_agents,
                actual: actions.len(),
            });
        }
        let cfg = &self.config;
        let target = self.task.target;
        let state = self.state.as_mut().expect("checked");
        state.step += 1;
        let mut events = Vec::new();
        let v_max = cfg.max_wheel_velocity;

        for (i, action) in actions.iter().enumerate() {
            let mut wheels = *action;
            for w in &mut wheels {
                if !(w.abs() <= v_max) {
                    log::warn!("agent {i}: wheel velocity {w} clamped to +/-{v_max}");
                    *w = if w.is_nan() { 0.0 } else { w.max(-v_max).min(v_max) };
                }
            }
            let agent = &mut state.agents[i];
            let (position, heading) = kinematics(cfg, agent.position, agent.heading, wheels);
            agent.position = position;
            agent.heading = heading;

            if let Some(b) = agent.carrying {
                state.boxes[b].position = position;
                if position[1] >= cfg.size - cfg.drop_zone_depth && state.retrieved < cfg.max_retrieves {
                    let kind = if state.boxes[b].color == target {
                        EventKind::DeliveryTarget
                    } else {
                        EventKind::DeliveryWrong
                    };
                    agent.carrying = None;
                    state.retrieved += 1;
                    events.push(Event { agent: i, kind, box_id: b });
                    if cfg.repositioning {
                        let spot = free_spot(cfg, &state.agents, &mut state.rng);
                        state.boxes[b].position = spot;
                        state.boxes[b].status = BoxStatus::Free;
                    } else {
                        state.boxes[b].status = BoxStatus::Retrieved;
                    }
                }
            } else {
                let nearest = state
                    .boxes
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| b.status == BoxStatus::Free)
                    .map(|(k, b)| (dist(b.position, position), k))
                    .filter(|(d, _)| *d <= cfg.sensitivity)
                    .min_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
                if let Some((_, k)) = nearest {
                    state.boxes[k].status = BoxStatus::Carried(i);
                    state.boxes[k].position = position;
                    agent.carrying = Some(k);
                    let kind = if state.boxes[k].color == target {
                        EventKind::PickupTarget
                    } else {
                        EventKind::PickupWrong
                    };
                    events.push(Event { agent: i, kind, box_id: k });
                }
            }
        }

        let reward = events.iter().map(|e| e.kind.reward()).sum();
        let done = {
            let s = self.state.as_ref().expect("checked");
            self.done(s)
        };
        Ok(StepOutcome {
            observations: self.observe_all(),
            reward,
            events,
            done,
        })
    }

    /// Positions, carried colors and events of every agent after a step.
    pub fn snapshot(&self, events: &[Event]) -> TrajectoryRecord {
        let state = self.state.as_ref().expect("arena was reset");
        TrajectoryRecord {
            step: state.step,
            agents: state
                .agents
                .iter()
                .enumerate()
                .map(|(id, a)| AgentSnapshot {
                    id,
                    x: a.position[0],
                    y: a.position[1],
                    heading: a.heading,
                    carrying: a.carrying.map(|b| state.boxes[b].color),
                    event: events.iter().find(|e| e.agent == id).map(|e| e.kind),
                })
                .collect(),
        }
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    libm::hypot(a[0] - b[0], a[1] - b[1])
}

/// Boxes never appear within pickup reach of an agent, so nothing is
/// collected without motion.
fn clear_of_agents(cfg: &ArenaConfig, agents: &[AgentState], p: [f64; 2]) -> bool {
    agents.iter().all(|a| dist(a.position, p) > cfg.sensitivity)
}

fn free_spot(cfg: &ArenaConfig, agents: &[AgentState], rng: &mut Rng) -> [f64; 2] {
    let floor = cfg.size - cfg.drop_zone_depth;
    let mut p = [0.0; 2];
    for _ in 0..cfg.placement_retries {
        p = [rng.random::<f64>() * cfg.size, rng.random::<f64>() * floor];
        if clear_of_agents(cfg, agents, p) {
            break;
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::ColorSet;

    fn task() -> TaskSpec {
        let colors = ColorSet::new(["red", "blue", "green", "yellow"]);
        TaskSpec::from_names(&colors, "red", &["blue"]).unwrap()
    }

    fn arena() -> Arena {
        let mut a = Arena::new(ArenaConfig::default(), task()).unwrap();
        a.reset(17).unwrap();
        a
    }

    #[test]
    fn reset_places_half_target_boxes() {
        let a = arena();
        let s = a.state().unwrap();
        assert_eq!(s.boxes.iter().filter(|b| b.color == 0).count(), 10);
        assert_eq!(s.boxes.iter().filter(|b| b.color == 1).count(), 10);
        assert!(s.agents.iter().all(|a| a.carrying.is_none()));
        for b in &s.boxes {
            assert!(b.position[1] < 19.0);
        }
        for (i, x) in s.agents.iter().enumerate() {
            for y in &s.agents[i + 1..] {
                assert!(dist(x.position, y.position) >= 1.0);
            }
        }
    }

    #[test]
    fn reset_is_deterministic() {
        let mut a = Arena::new(ArenaConfig::default(), task()).unwrap();
        let mut b = a.clone();
        assert_eq!(a.reset(5).unwrap(), b.reset(5).unwrap());
        assert_eq!(a.state(), b.state());
    }

    #[test]
    fn crowded_arena_is_a_config_error() {
        let cfg = ArenaConfig {
            size: 2.0,
            drop_zone_depth: 1.0,
            n_agents: 20,
            ..ArenaConfig::default()
        };
        let mut a = Arena::new(cfg, task()).unwrap();
        assert!(matches!(a.reset(1), Err(Error::Config(_))));
    }

    #[test]
    fn pickup_and_delivery_rewards() {
        let mut a = arena();
        {
            let s = a.state_mut().unwrap();
            s.agents[0].position = [5.0, 5.0];
            s.agents[0].heading = 0.0;
            s.boxes[0].position = [5.0, 5.3];
            for b in s.boxes.iter_mut().skip(1) {
                b.position = [15.0, 2.0];
            }
            for (k, ag) in s.agents.iter_mut().enumerate().skip(1) {
                ag.position = [1.0 + k as f64, 10.0];
            }
        }
        let still = [[0.0; 3]; 5];
        let out = a.step(&still).unwrap();
        assert_eq!(out.reward, 1);
        assert_eq!(out.events, alloc::vec![Event { agent: 0, kind: EventKind::PickupTarget, box_id: 0 }]);

        a.state_mut().unwrap().agents[0].position = [5.0, 19.5];
        let out = a.step(&still).unwrap();
        assert_eq!(out.reward, 2);
        assert_eq!(out.events[0].kind, EventKind::DeliveryTarget);
        let s = a.state().unwrap();
        assert_eq!(s.boxes[0].status, BoxStatus::Free);
        assert!(s.boxes[0].position[1] < 19.0);
        assert_eq!(s.retrieved, 1);

        let out = a.step(&still).unwrap();
        assert_eq!((out.reward, out.events.len()), (0, 0));
    }

    #[test]
    fn wrong_pickup_costs_a_point() {
        let mut a = arena();
        {
            let s = a.state_mut().unwrap();
            let wrong = s.boxes.iter().position(|b| b.color != 0).unwrap();
            s.agents[0].position = s.boxes[wrong].position;
        }
        let out = a.step(&[[0.0; 3]; 5]).unwrap();
        assert_eq!(out.reward, -1);
        assert_eq!(out.events[0].kind, EventKind::PickupWrong);
    }

    #[test]
    fn change_task_applies_at_reset() {
        let mut a = arena();
        let colors = task().colors;
        let green = TaskSpec::from_names(&colors, "green", &["yellow"]).unwrap();
        a.change_task(green).unwrap();
        assert_eq!(a.task().id, "red");
        let before = a.observe(0).len();
        a.reset(3).unwrap();
        assert_eq!(a.task().id, "green");
        let s = a.state().unwrap();
        assert!(s.boxes.iter().all(|b| b.color == 2 || b.color == 3));
        assert_eq!(a.observe(0).len(), before);

        let other = ColorSet::new(["red", "blue"]);
        let foreign = TaskSpec::from_names(&other, "red", &["blue"]).unwrap();
        assert!(a.change_task(foreign).is_err());
    }

    #[test]
    fn velocities_are_clamped() {
        let mut a = arena();
        let before = a.state().unwrap().agents[0].clone();
        a.step(&[[100.0, 100.0, 100.0]; 5]).unwrap();
        let after = &a.state().unwrap().agents[0];
        let turned = super::super::kinematics::wrap_angle(before.heading + 0.1 * 2.0 / 0.5);
        assert!((after.heading - turned).abs() < 1e-12);
    }

    #[test]
    fn finished_episode_rejects_steps() {
        let cfg = ArenaConfig { duration: 2, ..ArenaConfig::default() };
        let mut a = Arena::new(cfg, task()).unwrap();
        a.reset(0).unwrap();
        assert!(!a.step(&[[0.0; 3]; 5]).unwrap().done);
        assert!(a.step(&[[0.0; 3]; 5]).unwrap().done);
        assert_eq!(a.step(&[[0.0; 3]; 5]), Err(Error::EpisodeFinished));
    }
}
