//! Fitness evaluation, genetic-distance regularization, retention and
//! forgetting metrics, species tracking and the lifelong generation loop.

mod eval;
mod exec;
mod lifelong;
mod metrics;
mod regularizer;
mod tracker;

pub use eval::{
    evaluate_fitness, evaluate_population, retention_seeds, run_episode, training_seeds, EnvSeedPolicy,
    EvalConfig, FitnessRecord, FAILED_FITNESS,
};
pub use exec::{Executor, Serial};
pub use lifelong::{
    run_generation, run_lifelong, GenerationEval, LifelongConfig, LifelongRun, LifelongState, Segment,
    TaskSchedule, TaskSnapshot,
};
pub use metrics::{
    champion_index, forgetting, retention, CensusRow, ForgettingRow, GenerationRow, LifelongMetrics,
    RetentionRow,
};
pub use regularizer::{regularized_fitness, select_reference, RegularizerConfig, RegularizerState};
pub use tracker::{track_species, LifespanRow, SpeciesTracker};
