//! Episodic 2D swarm-foraging arena.
//!
//! Coordinates are in arena units (1 unit = 250 mm, one robot diameter),
//! with `y` growing toward the upper edge where the drop zone lies.
//! Headings are radians counter-clockwise from `+x`.

mod config;
mod kinematics;
mod observe;
mod sim;
mod task;

pub use config::{ArenaConfig, METERS_PER_UNIT};
pub use kinematics::{body_twist, kinematics, WHEEL_ANGLES};
pub use observe::{observation_width, EntityKind, Observation, ObservationLayout};
pub use sim::{
    AgentSnapshot, AgentState, Arena, ArenaState, BoxState, BoxStatus, Event, EventKind, StepOutcome,
    TrajectoryRecord,
};
pub use task::{ColorId, ColorSet, TaskSpec};
