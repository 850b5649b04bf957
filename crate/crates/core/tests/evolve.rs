mod common;

use std::collections::BTreeMap;

use swarmlife_core::arena::*;
use swarmlife_core::evolve::*;
use swarmlife_core::neat::*;

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn tiny(generations: &[usize], reg: RegularizerConfig, policy: EnvSeedPolicy) -> LifelongConfig {
    let tasks = [common::red(), common::green()];
    LifelongConfig {
        neat: NeatConfig::default(),
        arena: ArenaConfig {
            n_agents: 2,
            n_boxes: 6,
            duration: 40,
            ..ArenaConfig::default()
        },
        eval: EvalConfig {
            n_eval_envs: 2,
            retention_cadence: 3,
            seed_policy: policy,
        },
        schedule: TaskSchedule::new(
            generations
                .iter()
                .enumerate()
                .map(|(i, &g)| Segment { task: tasks[i % 2].clone(), generations: g })
                .collect(),
        )
        .unwrap(),
        population_size: 12,
        regularizer: reg,
    }
}

#[test]
fn forgetting_reproduces_summary_table() {
    let (c, r_pop, r_top) = (24.54, 14.64, 2.08);
    assert_eq!(round2(forgetting(c, r_pop)), 9.9);
    assert_eq!(round2(forgetting(c, r_top)), 22.46);
    assert!((forgetting(c, r_pop) - 9.9).abs() < 1e-12);
    assert!((forgetting(c, r_top) - 22.46).abs() < 1e-12);
}

#[test]
fn retention_dominance_and_champion_ties() {
    assert_eq!(champion_index(&[1.0, 3.0, 3.0, 2.0]), Some(1));
    assert_eq!(champion_index(&[]), None);
    let prev = [4.0, -1.0, 7.5, 0.0];
    for champ in 0..4 {
        let (p, t) = retention(&prev, champ);
        assert_eq!(p, 7.5);
        assert!(p >= t);
        assert_eq!(t, prev[champ]);
    }
}

fn conn_genome(id: u64, genes: &[(u64, f64)]) -> Genome {
    let mut g = Genome::new(id);
    g.add_node(0, NodeKind::Input, 0.0);
    for &(innov, w) in genes {
        g.add_connection(innov, 0, innov as u32 + 10, w, true);
    }
    g
}

#[test]
fn regularized_fitness_arithmetic() {
    let reference = conn_genome(0, &[(1, 0.5), (2, -0.5)]);
    let genome = conn_genome(1, &[(1, 1.0), (3, 0.2)]);
    let dcfg = DistanceConfig::default();
    let record = FitnessRecord {
        genome_id: 1,
        task_id: "green".into(),
        raw: 30.0,
        regularized: 30.0,
    };
    let reg = RegularizerState {
        enabled: true,
        lambda: 11.0,
        reference: Some(reference.clone()),
    };
    assert!((regularized_fitness(&record, &reg, &genome, &dcfg) - 15.7).abs() < 1e-12);
    assert_eq!(regularized_fitness(&record, &reg, &reference, &dcfg), 30.0);
    let zero = RegularizerState { lambda: 0.0, ..reg.clone() };
    assert_eq!(regularized_fitness(&record, &zero, &genome, &dcfg), 30.0);
    let off = RegularizerState { enabled: false, ..reg };
    assert_eq!(regularized_fitness(&record, &off, &genome, &dcfg), 30.0);
    assert!(!off.is_active());
}

#[test]
fn reference_is_argmax_with_lowest_id_on_ties() {
    let a = conn_genome(4, &[(1, 0.1)]);
    let b = conn_genome(2, &[(1, 0.2)]);
    let c = conn_genome(9, &[(1, 0.3)]);
    let genomes = vec![a.clone(), b.clone(), c.clone()];
    let f = BTreeMap::from([(4, 10.0), (2, 20.0), (9, 20.0)]);
    assert_eq!(select_reference(&genomes, &f).unwrap().id, 2);
    let f = BTreeMap::from([(4, 10.0), (2, 5.0), (9, 1.0)]);
    assert_eq!(select_reference(&genomes, &f).unwrap().id, 4);
    assert_eq!(select_reference(&genomes[..1], &f).unwrap().id, 4);
    assert!(select_reference(&[], &f).is_none());
}

/// Replays a logged trajectory by teleporting a single agent through it.
#[test]
fn scripted_trajectory_scores_seven() {
    let cfg = ArenaConfig {
        n_agents: 1,
        ..ArenaConfig::default()
    };
    let mut arena = Arena::new(cfg.clone(), common::red()).unwrap();
    arena.reset(31).unwrap();
    let target = arena.task().target;
    let drop = [cfg.size / 2.0, cfg.size - 0.25];
    let mut log: Vec<EventKind> = Vec::new();
    let mut total = 0;
    let mut teleport = |arena: &mut Arena, to: Option<[f64; 2]>| {
        let s = arena.state_mut().unwrap();
        let p = to.unwrap_or_else(|| {
            let k = s
                .boxes
                .iter()
                .position(|b| b.color == target && b.status == BoxStatus::Free)
                .unwrap();
            s.boxes[k].position
        });
        s.agents[0].position = p;
        let out = arena.step(&[[0.0; 3]]).unwrap();
        log.extend(out.events.iter().map(|e| e.kind));
        total += out.reward;
    };
    for waypoint in [None, Some(drop), None, Some(drop), None] {
        teleport(&mut arena, waypoint);
    }
    use EventKind::*;
    assert_eq!(log, vec![PickupTarget, DeliveryTarget, PickupTarget, DeliveryTarget, PickupTarget]);
    let recount: i64 = log.iter().map(|k| k.reward()).sum();
    assert_eq!((total, recount), (7, 7));
    // N = 1: the fitness is that single episode total.
    assert_eq!(total as f64 / 1.0, 7.0);
}

fn still_genome(id: u64, width: usize) -> Genome {
    let mut g = Genome::new(id);
    for i in 0..width as u32 {
        g.add_node(i, NodeKind::Input, 0.0);
    }
    for o in 0..3 {
        g.add_node(width as u32 + o, NodeKind::Output, 0.0);
    }
    g
}

#[test]
fn motionless_controller_scores_zero() {
    let cfg = ArenaConfig::default();
    let g = still_genome(0, 41);
    let seeds = training_seeds(1, &common::red(), 0, 3);
    assert_eq!(evaluate_fitness(&g, &common::red(), &cfg, &seeds).raw, 0.0);
}

#[test]
fn identical_genomes_get_identical_fitness() {
    let pop = initial_population(3, 41, 6, &NeatConfig::default()).unwrap();
    let mut genomes = pop.genomes.clone();
    let mut twin = genomes[2].clone();
    twin.id = 99;
    genomes.push(twin);
    let cfg = ArenaConfig {
        duration: 100,
        ..ArenaConfig::default()
    };
    let seeds = training_seeds(5, &common::red(), 4, 3);
    let f = evaluate_population(&genomes, &common::red(), &cfg, &seeds, &Serial);
    assert_eq!(f[2], f[6]);
    for (g, &fit) in genomes.iter().zip(&f) {
        assert_eq!(evaluate_fitness(g, &common::red(), &cfg, &seeds).raw, fit);
    }
    let one = evaluate_fitness(&genomes[0], &common::red(), &cfg, &seeds[..1]).raw;
    let phenotype = swarmlife_core::phenotype::Phenotype::decode(&genomes[0]).unwrap();
    assert_eq!(one, run_episode(&phenotype, &cfg, &common::red(), seeds[0]).unwrap() as f64);
}

#[test]
fn width_mismatch_gets_worst_fitness() {
    let g = still_genome(0, 40);
    let cfg = ArenaConfig::default();
    let seeds = training_seeds(1, &common::red(), 0, 2);
    assert_eq!(evaluate_fitness(&g, &common::red(), &cfg, &seeds).raw, FAILED_FITNESS);
    let f = evaluate_population(&[g], &common::red(), &cfg, &seeds, &Serial);
    assert_eq!(f, vec![FAILED_FITNESS]);
}

#[test]
fn seed_streams_are_distinct() {
    let r = common::red();
    let g = common::green();
    assert_ne!(training_seeds(1, &r, 0, 3), training_seeds(1, &g, 0, 3));
    assert_ne!(training_seeds(1, &r, 0, 3), training_seeds(1, &r, 1, 3));
    assert_ne!(training_seeds(1, &r, 0, 3), retention_seeds(1, &r, 0, 3));
    assert_eq!(training_seeds(1, &r, 7, 3), training_seeds(1, &r, 7, 3));
}

#[test]
fn frozen_population_is_a_fixed_point() {
    let mut cfg = tiny(&[6], RegularizerConfig::default(), EnvSeedPolicy::FixedPerTask);
    cfg.neat = NeatConfig {
        elitism: cfg.population_size,
        ..NeatConfig::frozen()
    };
    let by_id = |mut v: Vec<Genome>| {
        v.sort_by_key(|g| g.id);
        v
    };
    let start = by_id(LifelongRun::new(cfg.clone(), 4).unwrap().state().population.genomes.clone());
    let run = run_lifelong(cfg, 4, &Serial).unwrap();
    assert_eq!(by_id(run.state().population.genomes.clone()), start);
    let c: Vec<f64> = run.metrics().generations.iter().map(|r| r.best_fitness).collect();
    assert!(c.windows(2).all(|w| w[0] == w[1]), "{c:?}");
}

#[test]
fn best_fitness_never_drops_within_a_fixed_task() {
    let cfg = tiny(&[15], RegularizerConfig::default(), EnvSeedPolicy::FixedPerTask);
    let run = run_lifelong(cfg, 8, &Serial).unwrap();
    let c: Vec<f64> = run.metrics().generations.iter().map(|r| r.best_fitness).collect();
    assert!(c.windows(2).all(|w| w[1] >= w[0]), "{c:?}");
}

#[test]
fn single_task_has_no_retention_or_forgetting() {
    let cfg = tiny(&[5], RegularizerConfig::default(), EnvSeedPolicy::PerGeneration);
    let run = run_lifelong(cfg, 2, &Serial).unwrap();
    let m = run.metrics();
    assert_eq!(m.generations.len(), 5);
    assert!(m.retention.is_empty() && m.forgetting.is_empty());
    assert_eq!(run.state().snapshots.len(), 1);
}

#[test]
fn empty_schedule_segment_runs_nothing() {
    let cfg = tiny(&[0], RegularizerConfig::default(), EnvSeedPolicy::PerGeneration);
    let run = run_lifelong(cfg, 2, &Serial).unwrap();
    assert!(run.metrics().generations.is_empty());
    assert!(run.is_finished());
}

#[test]
fn drift_records_retention_forgetting_and_reference() {
    let reg = RegularizerConfig {
        enabled: true,
        lambda: 1.0,
    };
    let cfg = tiny(&[4, 5, 4], reg, EnvSeedPolicy::PerGeneration);
    let run = run_lifelong(cfg.clone(), 6, &Serial).unwrap();
    let m = run.metrics();
    assert_eq!(m.generations.len(), 13);
    // Cadence 3 inside the second and third segments plus each segment end.
    let gens: Vec<(usize, &str)> = m.retention.iter().map(|r| (r.generation, r.eval_task_id.as_str())).collect();
    assert_eq!(
        gens,
        vec![(6, "red"), (8, "red"), (9, "green"), (12, "green")]
    );
    for r in &m.retention {
        assert!(r.r_pop >= r.r_top);
    }
    assert_eq!(m.forgetting.len(), 2);
    let f = &m.forgetting[0];
    assert_eq!((f.boundary_generation, f.task_id.as_str()), (8, "red"));
    let c_red = m.generations[3].best_fitness;
    let ret = m.retention.iter().find(|r| r.generation == 8).unwrap();
    assert_eq!(f.f_pop, c_red - ret.r_pop);
    assert_eq!(f.f_top, c_red - ret.r_top);
    assert!(f.f_pop <= f.f_top);
    let f = &m.forgetting[1];
    assert_eq!((f.boundary_generation, f.task_id.as_str()), (12, "green"));
    assert_eq!(f.f_pop, m.generations[8].best_fitness - m.retention[3].r_pop);

    // The reference is frozen from the red population at generation 3.
    let snaps = &run.state().snapshots;
    assert_eq!(snaps.len(), 3);
    let reference = snaps[0].reference.as_ref().unwrap();
    let champ = champion_index(&snaps[0].fitness).unwrap();
    assert_eq!(reference, &snaps[0].genomes[champ]);
    assert!(m.generations[..4].iter().all(|r| r.mean_reference_distance.is_none()));
    assert!(m.generations[4..].iter().all(|r| r.mean_reference_distance.is_some()));
}

#[test]
fn census_matches_species_and_lifespans() {
    let mut cfg = tiny(&[6, 6], RegularizerConfig::default(), EnvSeedPolicy::PerGeneration);
    cfg.neat.compatibility_threshold = 1.2;
    let run = run_lifelong(cfg, 11, &Serial).unwrap();
    let m = run.metrics();
    for (row, census) in m.generations.iter().zip(&m.census) {
        assert_eq!(row.generation, census.generation);
        assert_eq!(row.n_species, census.species.len());
        assert_eq!(census.species.iter().map(|s| s.1).sum::<usize>(), 12);
    }
    let table = track_species(&m.census);
    assert_eq!(table, run.state().tracker.table());
    for census in &m.census {
        let g = census.generation;
        let alive = table
            .iter()
            .filter(|r| r.created_at <= g && r.extinct_at.is_none_or(|e| e > g))
            .count();
        assert_eq!(alive, census.species.len());
    }
    let final_species: Vec<_> = run.state().population.species.iter().map(|s| s.id).collect();
    for id in final_species {
        let row = table.iter().find(|r| r.species_id == id);
        if let Some(row) = row {
            assert!(row.extinct_at.is_none());
        }
    }
}

#[test]
fn lifespan_rows_from_constructed_census() {
    let census: Vec<CensusRow> = (0..12)
        .map(|g| CensusRow {
            generation: g,
            species: if (3..10).contains(&g) { vec![(1, 4), (2, g)] } else { vec![(1, 4)] },
        })
        .collect();
    let table = track_species(&census);
    assert_eq!(table[0], LifespanRow { species_id: 1, created_at: 0, extinct_at: None, peak_size: 4 });
    assert_eq!(table[1], LifespanRow { species_id: 2, created_at: 3, extinct_at: Some(10), peak_size: 9 });
}

#[test]
fn zero_lambda_equals_disabled_regularizer() {
    let off = tiny(&[4, 4], RegularizerConfig::default(), EnvSeedPolicy::PerGeneration);
    let zero = tiny(&[4, 4], RegularizerConfig { enabled: true, lambda: 0.0 }, EnvSeedPolicy::PerGeneration);
    let a = run_lifelong(off, 3, &Serial).unwrap();
    let b = run_lifelong(zero, 3, &Serial).unwrap();
    assert_eq!(a.state().population, b.state().population);
    let strip = |m: &LifelongMetrics| {
        let mut m = m.clone();
        m.generations.iter_mut().for_each(|r| r.mean_reference_distance = None);
        m
    };
    assert_eq!(strip(a.metrics()), strip(b.metrics()));
}

#[test]
fn resume_continues_identically() {
    let cfg = tiny(&[4, 5], RegularizerConfig { enabled: true, lambda: 2.0 }, EnvSeedPolicy::PerGeneration);
    let full = run_lifelong(cfg.clone(), 21, &Serial).unwrap();
    let mut first = LifelongRun::new(cfg.clone(), 21).unwrap();
    first.run_until(6, &Serial).unwrap();
    assert_eq!(first.state().generation, 6);
    let mut resumed = LifelongRun::resume(cfg, 21, first.into_state()).unwrap();
    resumed.run(&Serial).unwrap();
    assert_eq!(resumed.state(), full.state());
}

#[test]
fn retention_checks_do_not_touch_the_population() {
    let a = tiny(&[3, 6], RegularizerConfig::default(), EnvSeedPolicy::PerGeneration);
    let mut b = a.clone();
    b.eval.retention_cadence = 1;
    let ra = run_lifelong(a, 5, &Serial).unwrap();
    let rb = run_lifelong(b, 5, &Serial).unwrap();
    assert_eq!(ra.state().population, rb.state().population);
    assert_eq!(ra.metrics().generations, rb.metrics().generations);
    assert!(rb.metrics().retention.len() > ra.metrics().retention.len());
}

#[test]
fn schedule_validation() {
    let red = common::red();
    assert!(TaskSchedule::new(vec![]).is_err());
    let same = vec![
        Segment { task: red.clone(), generations: 2 },
        Segment { task: red.clone(), generations: 2 },
    ];
    assert!(TaskSchedule::new(same).is_err());
    let other = TaskSpec::from_names(&ColorSet::new(["red", "blue", "x", "y", "z"]), "x", &["y"]).unwrap();
    let mixed = vec![
        Segment { task: red.clone(), generations: 2 },
        Segment { task: other, generations: 2 },
    ];
    assert!(TaskSchedule::new(mixed).is_err());
    let s = TaskSchedule::new(vec![
        Segment { task: red.clone(), generations: 2 },
        Segment { task: common::green(), generations: 0 },
        Segment { task: red, generations: 3 },
    ])
    .unwrap();
    assert_eq!(s.total_generations(), 5);
    assert_eq!(s.locate(1), Some((0, 1)));
    assert_eq!(s.locate(2), Some((2, 0)));
    assert_eq!(s.locate(5), None);
    assert!(s.previous_tasks(2).is_empty());
}
