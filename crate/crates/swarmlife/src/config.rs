//! Experiment configuration: a TOML file whose keys mirror the NEAT
//! parameter table and the environment constructor arguments.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use swarmlife_core::arena::{ArenaConfig, ColorSet, TaskSpec};
use swarmlife_core::evolve::{EnvSeedPolicy, EvalConfig, LifelongConfig, RegularizerConfig, Segment, TaskSchedule};
use swarmlife_core::neat::{DistanceConfig, NeatConfig};

/// A configuration problem, attributed to a dotted key.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{key}: {message}")]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            key: key.into(),
            message: message.into(),
        }
    }
}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub seeds: Vec<u64>,
    pub population_size: usize,
    /// Relative paths are resolved against `SWARMLIFE_OUTPUT_ROOT` when set.
    pub output_dir: String,
    /// Write a resumable checkpoint every this many generations (0 = only at
    /// task boundaries).
    pub checkpoint_every: usize,
    pub environment: EnvironmentSection,
    pub neat: NeatSection,
    pub evaluation: EvaluationSection,
    pub regularizer: RegularizerSection,
    pub tasks: Vec<TaskEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvironmentSection {
    pub size: f64,
    pub n_agents: usize,
    pub n_boxes: usize,
    pub n_neighbors: usize,
    pub sensor_range: f64,
    pub max_wheel_velocity: f64,
    pub sensitivity: f64,
    pub time_step: f64,
    pub duration: usize,
    pub max_retrieves: usize,
    pub colors: Vec<String>,
    pub rate_target_block: f64,
    pub repositioning: bool,
    pub efficiency_reward: bool,
    pub see_other_agents: bool,
    pub boxes_in_line: bool,
    pub body_radius: f64,
    pub drop_zone_depth: f64,
    pub min_agent_separation: f64,
    pub placement_retries: usize,
}

impl Default for EnvironmentSection {
    fn default() -> Self {
        let a = ArenaConfig::default();
        EnvironmentSection {
            size: a.size,
            n_agents: a.n_agents,
            n_boxes: a.n_boxes,
            n_neighbors: a.n_neighbors,
            sensor_range: a.sensor_range,
            max_wheel_velocity: a.max_wheel_velocity,
            sensitivity: a.sensitivity,
            time_step: a.time_step,
            duration: a.duration,
            max_retrieves: a.max_retrieves,
            colors: ["red", "blue", "green", "yellow"].map(String::from).to_vec(),
            rate_target_block: a.rate_target_block,
            repositioning: a.repositioning,
            efficiency_reward: a.efficiency_reward,
            see_other_agents: a.see_other_agents,
            boxes_in_line: a.boxes_in_line,
            body_radius: a.body_radius,
            drop_zone_depth: a.drop_zone_depth,
            min_agent_separation: a.min_agent_separation,
            placement_retries: a.placement_retries,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NeatSection {
    pub num_hidden: usize,
    pub num_outputs: usize,
    pub initial_connection: String,
    pub feed_forward: bool,
    pub compatibility_disjoint_coefficient: f64,
    pub compatibility_excess_coefficient: f64,
    pub compatibility_weight_coefficient: f64,
    pub conn_add_prob: f64,
    pub conn_delete_prob: f64,
    pub node_add_prob: f64,
    pub node_delete_prob: f64,
    pub activation_default: String,
    pub activation_options: String,
    pub activation_mutate_rate: f64,
    pub bias_init_mean: f64,
    pub bias_init_stdev: f64,
    pub bias_replace_rate: f64,
    pub bias_mutate_rate: f64,
    pub bias_mutate_power: f64,
    pub bias_max_value: f64,
    pub bias_min_value: f64,
    pub response_init_mean: f64,
    pub response_init_stdev: f64,
    pub response_replace_rate: f64,
    pub response_mutate_rate: f64,
    pub response_mutate_power: f64,
    pub response_max_value: f64,
    pub response_min_value: f64,
    pub weight_max_value: f64,
    pub weight_min_value: f64,
    pub weight_init_mean: f64,
    pub weight_init_stdev: f64,
    pub weight_mutate_rate: f64,
    pub weight_replace_rate: f64,
    pub weight_mutate_power: f64,
    pub enabled_default: bool,
    pub enabled_mutate_rate: f64,
    pub compatibility_threshold: f64,
    pub species_fitness_func: String,
    pub max_stagnation: usize,
    pub species_elitism: usize,
    pub elitism: usize,
    pub survival_threshold: f64,
    pub min_species_size: usize,
}

impl Default for NeatSection {
    fn default() -> Self {
        let n = NeatConfig::default();
        NeatSection {
            num_hidden: n.num_hidden,
            num_outputs: n.num_outputs,
            initial_connection: format!("partial_direct {}", n.initial_connection_fraction),
            feed_forward: true,
            compatibility_disjoint_coefficient: n.distance.disjoint,
            compatibility_excess_coefficient: n.distance.excess,
            compatibility_weight_coefficient: n.distance.weight,
            conn_add_prob: n.conn_add_prob,
            conn_delete_prob: n.conn_delete_prob,
            node_add_prob: n.node_add_prob,
            node_delete_prob: n.node_delete_prob,
            activation_default: "neat_sigmoid".into(),
            activation_options: "neat_sigmoid".into(),
            activation_mutate_rate: 0.0,
            bias_init_mean: n.bias_init_mean,
            bias_init_stdev: n.bias_init_stdev,
            bias_replace_rate: n.bias_replace_rate,
            bias_mutate_rate: n.bias_mutate_rate,
            bias_mutate_power: n.bias_mutate_power,
            bias_max_value: n.bias_max_value,
            bias_min_value: n.bias_min_value,
            response_init_mean: 1.0,
            response_init_stdev: 0.0,
            response_replace_rate: 0.0,
            response_mutate_rate: 0.0,
            response_mutate_power: 0.0,
            response_max_value: 5.0,
            response_min_value: -5.0,
            weight_max_value: n.weight_max_value,
            weight_min_value: n.weight_min_value,
            weight_init_mean: n.weight_init_mean,
            weight_init_stdev: n.weight_init_stdev,
            weight_mutate_rate: n.weight_mutate_rate,
            weight_replace_rate: n.weight_replace_rate,
            weight_mutate_power: n.weight_mutate_power,
            enabled_default: true,
            enabled_mutate_rate: n.enabled_mutate_rate,
            compatibility_threshold: n.compatibility_threshold,
            species_fitness_func: "max".into(),
            max_stagnation: n.max_stagnation,
            species_elitism: n.species_elitism,
            elitism: n.elitism,
            survival_threshold: n.survival_threshold,
            min_species_size: n.min_species_size,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvaluationSection {
    pub n_eval_envs: usize,
    pub retention_cadence: usize,
    pub seed_policy: EnvSeedPolicy,
}

impl Default for EvaluationSection {
    fn default() -> Self {
        let e = EvalConfig::default();
        EvaluationSection {
            n_eval_envs: e.n_eval_envs,
            retention_cadence: e.retention_cadence,
            seed_policy: e.seed_policy,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegularizerSection {
    pub enabled: bool,
    pub lambda: f64,
    /// Seed (as a string key) to coefficient, overriding `lambda`.
    pub lambda_per_seed: BTreeMap<String, f64>,
}

impl Default for RegularizerSection {
    fn default() -> Self {
        RegularizerSection {
            enabled: false,
            lambda: 11.0,
            lambda_per_seed: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskEntry {
    pub target_color: String,
    pub season_colors: Vec<String>,
    pub generations: usize,
}

impl TaskEntry {
    pub fn new(target: &str, distractors: &[&str], generations: usize) -> Self {
        let mut season_colors = vec![target.to_string()];
        season_colors.extend(distractors.iter().map(|s| s.to_string()));
        TaskEntry {
            target_color: target.into(),
            season_colors,
            generations,
        }
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seeds: vec![13, 17, 24, 31, 42],
            population_size: 300,
            output_dir: "runs".into(),
            checkpoint_every: 10,
            environment: EnvironmentSection::default(),
            neat: NeatSection::default(),
            evaluation: EvaluationSection::default(),
            regularizer: RegularizerSection::default(),
            tasks: vec![
                TaskEntry::new("red", &["blue"], 200),
                TaskEntry::new("green", &["yellow"], 200),
                TaskEntry::new("red", &["blue"], 200),
            ],
        }
    }
}

/// Spelling used by the original environment class, accepted as an alias.
const MISSPELLED_EFFICIENCY: &str = "efficency_reward";

/// Overlays `top` onto `base`; tables merge key by key, anything else
/// replaces.
fn merge(base: &mut toml::Table, top: toml::Table) {
    for (k, v) in top {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(t)) => merge(b, t),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn parse_value(raw: &str) -> toml::Value {
    match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

/// Applies `key=value` with a dotted key; numeric segments index arrays.
pub fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| ConfigError::new(assignment, "override must look like key=value"))?;
    let key = key.trim();
    let key = &key.replace(MISSPELLED_EFFICIENCY, "efficiency_reward");
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(ConfigError::new(key, "empty key segment"));
    }
    let value = parse_value(raw.trim());
    let mut slot: &mut toml::Value = table
        .entry(parts[0].to_string())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    for part in &parts[1..] {
        slot = match slot {
            toml::Value::Table(t) => t
                .entry(part.to_string())
                .or_insert_with(|| toml::Value::Table(toml::Table::new())),
            toml::Value::Array(a) => {
                let i: usize = part
                    .parse()
                    .map_err(|_| ConfigError::new(key, format!("`{part}` is not an array index")))?;
                let len = a.len();
                a.get_mut(i)
                    .ok_or_else(|| ConfigError::new(key, format!("index {i} out of range (length {len})")))?
            }
            _ => return Err(ConfigError::new(key, format!("cannot descend into `{part}`"))),
        };
    }
    *slot = value;
    Ok(())
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::with_overrides(text, &[])
    }

    pub fn with_overrides(text: &str, overrides: &[String]) -> Result<Self> {
        let mut file: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            ConfigError::new("<file>", e.message().to_string())
        })?;
        let mut table: toml::Table = ExperimentConfig::default()
            .canonical()
            .parse()
            .expect("canonical text parses");
        if let Some(toml::Value::Table(env)) = file.get_mut("environment") {
            if let Some(v) = env.remove(MISSPELLED_EFFICIENCY) {
                env.insert("efficiency_reward".into(), v);
            }
        }
        merge(&mut table, file);
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(toml::Value::Table(table)).map_err(|e| {
            let key = e.path().to_string();
            let message = e.into_inner().to_string();
            ConfigError::new(key, message.lines().next().unwrap_or_default())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("<file>", format!("{}: {e}", path.display())))?;
        Self::with_overrides(&text, overrides)
    }

    /// Deterministic TOML rendering; parsing it gives back the same config.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("config always serializes")
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn lambda_for(&self, seed: u64) -> f64 {
        self.regularizer
            .lambda_per_seed
            .get(&seed.to_string())
            .copied()
            .unwrap_or(self.regularizer.lambda)
    }

    pub fn color_set(&self) -> ColorSet {
        ColorSet::new(self.environment.colors.iter().cloned())
    }

    pub fn task(&self, index: usize) -> Result<TaskSpec> {
        let key = |k: &str| format!("tasks.{index}.{k}");
        let t = &self.tasks[index];
        if !t.season_colors.contains(&t.target_color) {
            return Err(ConfigError::new(key("season_colors"), "must contain target_color"));
        }
        let distractors: Vec<&str> = t
            .season_colors
            .iter()
            .filter(|c| **c != t.target_color)
            .map(String::as_str)
            .collect();
        TaskSpec::from_names(&self.color_set(), &t.target_color, &distractors)
            .map_err(|e| ConfigError::new(key("season_colors"), e.to_string()))
    }

    /// Task by its id (the target color), first occurrence in the schedule.
    pub fn task_by_id(&self, id: &str) -> Result<TaskSpec> {
        let i = self
            .tasks
            .iter()
            .position(|t| t.target_color == id)
            .ok_or_else(|| ConfigError::new("tasks", format!("no task with id `{id}`")))?;
        self.task(i)
    }

    pub fn arena(&self) -> ArenaConfig {
        let e = &self.environment;
        ArenaConfig {
            size: e.size,
            n_agents: e.n_agents,
            n_boxes: e.n_boxes,
            n_neighbors: e.n_neighbors,
            sensor_range: e.sensor_range,
            max_wheel_velocity: e.max_wheel_velocity,
            sensitivity: e.sensitivity,
            time_step: e.time_step,
            duration: e.duration,
            max_retrieves: e.max_retrieves,
            rate_target_block: e.rate_target_block,
            repositioning: e.repositioning,
            efficiency_reward: e.efficiency_reward,
            see_other_agents: e.see_other_agents,
            boxes_in_line: e.boxes_in_line,
            body_radius: e.body_radius,
            drop_zone_depth: e.drop_zone_depth,
            min_agent_separation: e.min_agent_separation,
            placement_retries: e.placement_retries,
        }
    }

    pub fn neat_config(&self) -> NeatConfig {
        let n = &self.neat;
        NeatConfig {
            num_outputs: n.num_outputs,
            num_hidden: n.num_hidden,
            initial_connection_fraction: initial_fraction(&n.initial_connection).unwrap_or(0.5),
            distance: DistanceConfig {
                excess: n.compatibility_excess_coefficient,
                disjoint: n.compatibility_disjoint_coefficient,
                weight: n.compatibility_weight_coefficient,
            },
            compatibility_threshold: n.compatibility_threshold,
            conn_add_prob: n.conn_add_prob,
            conn_delete_prob: n.conn_delete_prob,
            node_add_prob: n.node_add_prob,
            node_delete_prob: n.node_delete_prob,
            bias_init_mean: n.bias_init_mean,
            bias_init_stdev: n.bias_init_stdev,
            bias_replace_rate: n.bias_replace_rate,
            bias_mutate_rate: n.bias_mutate_rate,
            bias_mutate_power: n.bias_mutate_power,
            bias_max_value: n.bias_max_value,
            bias_min_value: n.bias_min_value,
            weight_init_mean: n.weight_init_mean,
            weight_init_stdev: n.weight_init_stdev,
            weight_replace_rate: n.weight_replace_rate,
            weight_mutate_rate: n.weight_mutate_rate,
            weight_mutate_power: n.weight_mutate_power,
            weight_max_value: n.weight_max_value,
            weight_min_value: n.weight_min_value,
            enabled_mutate_rate: n.enabled_mutate_rate,
            max_stagnation: n.max_stagnation,
            species_elitism: n.species_elitism,
            elitism: n.elitism,
            survival_threshold: n.survival_threshold,
            min_species_size: n.min_species_size,
        }
    }

    pub fn eval_config(&self) -> EvalConfig {
        EvalConfig {
            n_eval_envs: self.evaluation.n_eval_envs,
            retention_cadence: self.evaluation.retention_cadence,
            seed_policy: self.evaluation.seed_policy,
        }
    }

    pub fn schedule(&self) -> Result<TaskSchedule> {
        let segments = (0..self.tasks.len())
            .map(|i| {
                Ok(Segment {
                    task: self.task(i)?,
                    generations: self.tasks[i].generations,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        TaskSchedule::new(segments).map_err(|e| ConfigError::new("tasks", e.to_string()))
    }

    /// Engine configuration for one seed.
    pub fn lifelong(&self, seed: u64) -> Result<LifelongConfig> {
        let cfg = LifelongConfig {
            neat: self.neat_config(),
            arena: self.arena(),
            eval: self.eval_config(),
            schedule: self.schedule()?,
            population_size: self.population_size,
            regularizer: RegularizerConfig {
                enabled: self.regularizer.enabled,
                lambda: self.lambda_for(seed),
            },
        };
        cfg.validate().map_err(|e| ConfigError::new("<config>", e.to_string()))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(ConfigError::new("seeds", "at least one seed is required"));
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(ConfigError::new("seeds", "seeds must be distinct"));
        }
        if self.population_size < 2 {
            return Err(ConfigError::new("population_size", "must be at least 2"));
        }
        self.validate_environment()?;
        self.validate_neat()?;
        if self.evaluation.n_eval_envs == 0 {
            return Err(ConfigError::new("evaluation.n_eval_envs", "must be at least 1"));
        }
        if self.evaluation.retention_cadence == 0 {
            return Err(ConfigError::new("evaluation.retention_cadence", "must be at least 1"));
        }
        let lambda_ok = |l: f64| l >= 0.0 && l.is_finite();
        if !lambda_ok(self.regularizer.lambda) {
            return Err(ConfigError::new("regularizer.lambda", "must be a non-negative number"));
        }
        for (k, &l) in &self.regularizer.lambda_per_seed {
            let key = format!("regularizer.lambda_per_seed.{k}");
            if k.parse::<u64>().is_err() {
                return Err(ConfigError::new(key, "keys must be seeds"));
            }
            if !lambda_ok(l) {
                return Err(ConfigError::new(key, "must be a non-negative number"));
            }
        }
        if self.tasks.is_empty() {
            return Err(ConfigError::new("tasks", "at least one task is required"));
        }
        for i in 0..self.tasks.len() {
            self.task(i)?;
            if i > 0 && self.tasks[i].target_color == self.tasks[i - 1].target_color {
                return Err(ConfigError::new(
                    format!("tasks.{i}.target_color"),
                    "consecutive tasks must differ",
                ));
            }
        }
        for seed in &self.seeds {
            self.lifelong(*seed)?;
        }
        Ok(())
    }

    fn validate_environment(&self) -> Result<()> {
        let e = &self.environment;
        let key = |k: &str| format!("environment.{k}");
        for (k, v) in [
            ("size", e.size),
            ("sensor_range", e.sensor_range),
            ("max_wheel_velocity", e.max_wheel_velocity),
            ("sensitivity", e.sensitivity),
            ("time_step", e.time_step),
            ("body_radius", e.body_radius),
            ("drop_zone_depth", e.drop_zone_depth),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::new(key(k), "must be positive"));
            }
        }
        for (k, v) in [
            ("n_agents", e.n_agents),
            ("n_boxes", e.n_boxes),
            ("n_neighbors", e.n_neighbors),
            ("duration", e.duration),
            ("max_retrieves", e.max_retrieves),
            ("placement_retries", e.placement_retries),
        ] {
            if v == 0 {
                return Err(ConfigError::new(key(k), "must be positive"));
            }
        }
        if !(0.0..=1.0).contains(&e.rate_target_block) {
            return Err(ConfigError::new(key("rate_target_block"), "must lie in [0, 1]"));
        }
        if e.drop_zone_depth >= e.size {
            return Err(ConfigError::new(key("drop_zone_depth"), "must be smaller than size"));
        }
        if !(e.min_agent_separation >= 0.0) {
            return Err(ConfigError::new(key("min_agent_separation"), "must be non-negative"));
        }
        if e.efficiency_reward {
            return Err(ConfigError::new(key("efficiency_reward"), "only false is supported"));
        }
        if e.colors.len() < 2 {
            return Err(ConfigError::new(key("colors"), "at least two colors are required"));
        }
        let mut c = e.colors.clone();
        c.sort();
        if c.windows(2).any(|w| w[0] == w[1]) {
            return Err(ConfigError::new(key("colors"), "colors must be distinct"));
        }
        Ok(())
    }

    fn validate_neat(&self) -> Result<()> {
        let n = &self.neat;
        let key = |k: &str| format!("neat.{k}");
        if initial_fraction(&n.initial_connection).is_none() {
            return Err(ConfigError::new(
                key("initial_connection"),
                "expected `partial_direct P` with P in [0, 1] or `full_direct`",
            ));
        }
        if !n.feed_forward {
            return Err(ConfigError::new(key("feed_forward"), "only feed-forward networks are supported"));
        }
        for (k, v) in [("activation_default", &n.activation_default), ("activation_options", &n.activation_options)] {
            if v != "neat_sigmoid" {
                return Err(ConfigError::new(key(k), "only neat_sigmoid is supported"));
            }
        }
        if n.species_fitness_func != "max" {
            return Err(ConfigError::new(key("species_fitness_func"), "only max is supported"));
        }
        if !n.enabled_default {
            return Err(ConfigError::new(key("enabled_default"), "only true is supported"));
        }
        for (k, v, fixed) in [
            ("activation_mutate_rate", n.activation_mutate_rate, 0.0),
            ("response_init_mean", n.response_init_mean, 1.0),
            ("response_init_stdev", n.response_init_stdev, 0.0),
            ("response_replace_rate", n.response_replace_rate, 0.0),
            ("response_mutate_rate", n.response_mutate_rate, 0.0),
            ("response_mutate_power", n.response_mutate_power, 0.0),
        ] {
            if v != fixed {
                return Err(ConfigError::new(key(k), format!("only {fixed:?} is supported")));
            }
        }
        if !(n.response_min_value <= 1.0 && 1.0 <= n.response_max_value) {
            return Err(ConfigError::new(key("response_min_value"), "range must contain the fixed response 1.0"));
        }
        for (k, v) in [
            ("conn_add_prob", n.conn_add_prob),
            ("conn_delete_prob", n.conn_delete_prob),
            ("node_add_prob", n.node_add_prob),
            ("node_delete_prob", n.node_delete_prob),
            ("bias_replace_rate", n.bias_replace_rate),
            ("bias_mutate_rate", n.bias_mutate_rate),
            ("weight_replace_rate", n.weight_replace_rate),
            ("weight_mutate_rate", n.weight_mutate_rate),
            ("enabled_mutate_rate", n.enabled_mutate_rate),
            ("survival_threshold", n.survival_threshold),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(ConfigError::new(key(k), "must lie in [0, 1]"));
            }
        }
        if n.bias_mutate_rate + n.bias_replace_rate > 1.0 {
            return Err(ConfigError::new(key("bias_replace_rate"), "bias_mutate_rate + bias_replace_rate exceeds 1"));
        }
        if n.weight_mutate_rate + n.weight_replace_rate > 1.0 {
            return Err(ConfigError::new(
                key("weight_replace_rate"),
                "weight_mutate_rate + weight_replace_rate exceeds 1",
            ));
        }
        for (k, v) in [
            ("compatibility_disjoint_coefficient", n.compatibility_disjoint_coefficient),
            ("compatibility_excess_coefficient", n.compatibility_excess_coefficient),
            ("compatibility_weight_coefficient", n.compatibility_weight_coefficient),
            ("bias_init_stdev", n.bias_init_stdev),
            ("bias_mutate_power", n.bias_mutate_power),
            ("weight_init_stdev", n.weight_init_stdev),
            ("weight_mutate_power", n.weight_mutate_power),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ConfigError::new(key(k), "must be non-negative"));
            }
        }
        if !(n.compatibility_threshold > 0.0) {
            return Err(ConfigError::new(key("compatibility_threshold"), "must be positive"));
        }
        if !(n.bias_min_value < n.bias_max_value) {
            return Err(ConfigError::new(key("bias_min_value"), "must be below bias_max_value"));
        }
        if !(n.weight_min_value < n.weight_max_value) {
            return Err(ConfigError::new(key("weight_min_value"), "must be below weight_max_value"));
        }
        if n.num_outputs != 3 {
            return Err(ConfigError::new(key("num_outputs"), "the three-wheel body needs exactly 3 outputs"));
        }
        if n.species_elitism == 0 {
            return Err(ConfigError::new(key("species_elitism"), "must be at least 1"));
        }
        Ok(())
    }
}

fn initial_fraction(spec: &str) -> Option<f64> {
    let mut words = spec.split_whitespace();
    match (words.next(), words.next(), words.next()) {
        (Some("full_direct"), None, None) => Some(1.0),
        (Some("partial_direct"), Some(p), None) => p.parse().ok().filter(|p| (0.0..=1.0).contains(p)),
        _ => None,
    }
}
