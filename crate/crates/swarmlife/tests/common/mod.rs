#![allow(dead_code)]

use swarmlife::config::{ExperimentConfig, TaskEntry};

/// A configuration small enough to run in well under a second per seed.
pub fn tiny(seeds: &[u64], generations: [usize; 2]) -> ExperimentConfig {
    let mut c = ExperimentConfig {
        seeds: seeds.to_vec(),
        population_size: 10,
        checkpoint_every: 2,
        tasks: vec![
            TaskEntry::new("red", &["blue"], generations[0]),
            TaskEntry::new("green", &["yellow"], generations[1]),
        ],
        ..ExperimentConfig::default()
    };
    c.environment.n_agents = 2;
    c.environment.n_boxes = 6;
    c.environment.duration = 30;
    c.evaluation.n_eval_envs = 2;
    c.evaluation.retention_cadence = 2;
    c.validate().unwrap();
    c
}

pub fn read(path: &std::path::Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
