use crate::{Error, Result};

/// Length of one arena unit in metres.
pub const METERS_PER_UNIT: f64 = 0.25;

/// Simulator parameters. Defaults are the reference experiment settings.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArenaConfig {
    pub size: f64,
    pub n_agents: usize,
    pub n_boxes: usize,
    pub n_neighbors: usize,
    pub sensor_range: f64,
    pub max_wheel_velocity: f64,
    /// Pickup radius around a box centre.
    pub sensitivity: f64,
    pub time_step: f64,
    /// Episode length K in steps.
    pub duration: usize,
    pub max_retrieves: usize,
    pub rate_target_block: f64,
    pub repositioning: bool,
    pub efficiency_reward: bool,
    pub see_other_agents: bool,
    pub boxes_in_line: bool,
    /// Distance from the robot centre to each wheel.
    pub body_radius: f64,
    /// Depth of the delivery strip along the upper edge.
    pub drop_zone_depth: f64,
    pub min_agent_separation: f64,
    pub placement_retries: usize,
}

impl Default for ArenaConfig {
    fn default() -> Self {
        ArenaConfig {
            size: 20.0,
            n_agents: 5,
            n_boxes: 20,
            n_neighbors: 3,
            sensor_range: 4.0,
            max_wheel_velocity: 2.0,
            sensitivity: 0.5,
            time_step: 0.1,
            duration: 500,
            max_retrieves: 20,
            rate_target_block: 0.5,
            repositioning: true,
            efficiency_reward: false,
            see_other_agents: false,
            boxes_in_line: false,
            body_radius: 0.5,
            drop_zone_depth: 1.0,
            min_agent_separation: 1.0,
            placement_retries: 1000,
        }
    }
}

impl ArenaConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("size", self.size),
            ("sensor_range", self.sensor_range),
            ("max_wheel_velocity", self.max_wheel_velocity),
            ("sensitivity", self.sensitivity),
            ("time_step", self.time_step),
            ("body_radius", self.body_radius),
            ("drop_zone_depth", self.drop_zone_depth),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(alloc::format!("{name} must be positive")));
            }
        }
        let counts = [
            ("n_agents", self.n_agents),
            ("n_boxes", self.n_boxes),
            ("n_neighbors", self.n_neighbors),
            ("duration", self.duration),
            ("max_retrieves", self.max_retrieves),
            ("placement_retries", self.placement_retries),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::config(alloc::format!("{name} must be positive")));
            }
        }
        if !(0.0..=1.0).contains(&self.rate_target_block) {
            return Err(Error::config("rate_target_block must lie in [0, 1]"));
        }
        if self.drop_zone_depth >= self.size {
            return Err(Error::config("drop_zone_depth must be smaller than size"));
        }
        if self.min_agent_separation < 0.0 {
            return Err(Error::config("min_agent_separation must be non-negative"));
        }
        if self.efficiency_reward {
            return Err(Error::config("efficiency_reward is not supported"));
        }
        Ok(())
    }

    /// Number of target-colored boxes placed at reset.
    pub fn n_target_boxes(&self) -> usize {
        libm::round(self.rate_target_block * self.n_boxes as f64) as usize
    }
}
