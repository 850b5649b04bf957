/// Coefficients of the compatibility distance.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistanceConfig {
    pub excess: f64,
    pub disjoint: f64,
    pub weight: f64,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        DistanceConfig {
            excess: 1.0,
            disjoint: 1.0,
            weight: 0.6,
        }
    }
}

/// NEAT parameters. Defaults reproduce the reference configuration table:
/// one initial hidden node, half of the eligible connections present,
/// 20% structural mutation rates and a compatibility threshold of 3.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NeatConfig {
    pub num_outputs: usize,
    pub num_hidden: usize,
    /// Probability that each eligible initial connection is present.
    pub initial_connection_fraction: f64,

    pub distance: DistanceConfig,
    pub compatibility_threshold: f64,

    pub conn_add_prob: f64,
    pub conn_delete_prob: f64,
    pub node_add_prob: f64,
    pub node_delete_prob: f64,

    pub bias_init_mean: f64,
    pub bias_init_stdev: f64,
    pub bias_replace_rate: f64,
    pub bias_mutate_rate: f64,
    pub bias_mutate_power: f64,
    pub bias_max_value: f64,
    pub bias_min_value: f64,

    pub weight_init_mean: f64,
    pub weight_init_stdev: f64,
    pub weight_replace_rate: f64,
    pub weight_mutate_rate: f64,
    pub weight_mutate_power: f64,
    pub weight_max_value: f64,
    pub weight_min_value: f64,

    pub enabled_mutate_rate: f64,

    pub max_stagnation: usize,
    pub species_elitism: usize,
    pub elitism: usize,
    pub survival_threshold: f64,
    /// Offspring floor for every species that survives stagnation.
    pub min_species_size: usize,
}

impl Default for NeatConfig {
    fn default() -> Self {
        NeatConfig {
            num_outputs: 3,
            num_hidden: 1,
            initial_connection_fraction: 0.5,
            distance: DistanceConfig::default(),
            compatibility_threshold: 3.0,
            conn_add_prob: 0.2,
            conn_delete_prob: 0.2,
            node_add_prob: 0.2,
            node_delete_prob: 0.2,
            bias_init_mean: 0.0,
            bias_init_stdev: 1.0,
            bias_replace_rate: 0.1,
            bias_mutate_rate: 0.7,
            bias_mutate_power: 0.5,
            bias_max_value: 5.0,
            bias_min_value: -5.0,
            weight_init_mean: 0.0,
            weight_init_stdev: 1.0,
            weight_replace_rate: 0.1,
            weight_mutate_rate: 0.8,
            weight_mutate_power: 1.0,
            weight_max_value: 5.0,
            weight_min_value: -5.0,
            enabled_mutate_rate: 0.01,
            max_stagnation: 20,
            species_elitism: 1,
            elitism: 5,
            survival_threshold: 0.2,
            min_species_size: 2,
        }
    }
}

impl NeatConfig {
    /// Same table with every mutation rate set to zero.
    pub fn frozen() -> Self {
        NeatConfig {
            conn_add_prob: 0.0,
            conn_delete_prob: 0.0,
            node_add_prob: 0.0,
            node_delete_prob: 0.0,
            bias_replace_rate: 0.0,
            bias_mutate_rate: 0.0,
            weight_replace_rate: 0.0,
            weight_mutate_rate: 0.0,
            enabled_mutate_rate: 0.0,
            ..NeatConfig::default()
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        use crate::Error;
        let probs = [
            ("initial_connection", self.initial_connection_fraction),
            ("conn_add_prob", self.conn_add_prob),
            ("conn_delete_prob", self.conn_delete_prob),
            ("node_add_prob", self.node_add_prob),
            ("node_delete_prob", self.node_delete_prob),
            ("bias_replace_rate", self.bias_replace_rate),
            ("bias_mutate_rate", self.bias_mutate_rate),
            ("weight_replace_rate", self.weight_replace_rate),
            ("weight_mutate_rate", self.weight_mutate_rate),
            ("enabled_mutate_rate", self.enabled_mutate_rate),
            ("survival_threshold", self.survival_threshold),
        ];
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(alloc::format!("{name} must lie in [0, 1]")));
            }
        }
        if self.bias_mutate_rate + self.bias_replace_rate > 1.0 {
            return Err(Error::config("bias_mutate_rate + bias_replace_rate exceeds 1"));
        }
        if self.weight_mutate_rate + self.weight_replace_rate > 1.0 {
            return Err(Error::config("weight_mutate_rate + weight_replace_rate exceeds 1"));
        }
        let d = self.distance;
        if !(d.excess >= 0.0 && d.disjoint >= 0.0 && d.weight >= 0.0) {
            return Err(Error::config("compatibility coefficients must be non-negative"));
        }
        if !(self.compatibility_threshold > 0.0) {
            return Err(Error::config("compatibility_threshold must be positive"));
        }
        if !(self.weight_min_value < self.weight_max_value) || !(self.bias_min_value < self.bias_max_value) {
            return Err(Error::config("min value must be below max value"));
        }
        if self.num_outputs == 0 {
            return Err(Error::config("num_outputs must be positive"));
        }
        if self.species_elitism == 0 {
            return Err(Error::config("species_elitism must be at least 1"));
        }
        if self.bias_init_stdev < 0.0 || self.weight_init_stdev < 0.0 {
            return Err(Error::config("init stdev must be non-negative"));
        }
        Ok(())
    }
}
