use swarmlife::config::{apply_override, ExperimentConfig};
use swarmlife_core::evolve::EnvSeedPolicy;

#[test]
fn defaults_transcribe_the_neat_table() {
    let c = ExperimentConfig::default();
    let n = &c.neat;
    assert_eq!(c.population_size, 300);
    assert_eq!(c.tasks.iter().map(|t| t.generations).collect::<Vec<_>>(), [200, 200, 200]);
    assert_eq!(n.num_hidden, 1);
    assert_eq!(n.initial_connection, "partial_direct 0.5");
    assert!(n.feed_forward);
    assert_eq!((n.compatibility_disjoint_coefficient, n.compatibility_weight_coefficient), (1.0, 0.6));
    assert_eq!([n.conn_add_prob, n.conn_delete_prob, n.node_add_prob, n.node_delete_prob], [0.2; 4]);
    assert_eq!(n.activation_default, "neat_sigmoid");
    assert_eq!(
        [n.bias_init_mean, n.bias_init_stdev, n.bias_replace_rate, n.bias_mutate_rate, n.bias_mutate_power],
        [0.0, 1.0, 0.1, 0.7, 0.5]
    );
    assert_eq!((n.bias_min_value, n.bias_max_value), (-5.0, 5.0));
    assert_eq!((n.weight_min_value, n.weight_max_value), (-5.0, 5.0));
    assert_eq!(
        [n.weight_init_mean, n.weight_init_stdev, n.weight_mutate_rate, n.weight_replace_rate, n.weight_mutate_power],
        [0.0, 1.0, 0.8, 0.1, 1.0]
    );
    assert_eq!((n.response_init_mean, n.response_init_stdev), (1.0, 0.0));
    assert!(n.enabled_default);
    assert_eq!(n.enabled_mutate_rate, 0.01);
    assert_eq!(n.compatibility_threshold, 3.0);
    assert_eq!(n.species_fitness_func, "max");
    assert_eq!((n.max_stagnation, n.species_elitism, n.elitism), (20, 1, 5));
    assert_eq!(n.survival_threshold, 0.2);

    let e = &c.environment;
    assert_eq!((e.size, e.n_agents, e.n_boxes, e.n_neighbors), (20.0, 5, 20, 3));
    assert_eq!((e.sensor_range, e.max_wheel_velocity, e.sensitivity, e.time_step), (4.0, 2.0, 0.5, 0.1));
    assert_eq!((e.duration, e.max_retrieves, e.rate_target_block), (500, 20, 0.5));
    assert!(e.repositioning && !e.efficiency_reward && !e.see_other_agents && !e.boxes_in_line);
    assert_eq!(c.evaluation.n_eval_envs, 10);
    assert_eq!(c.evaluation.retention_cadence, 10);
}

#[test]
fn canonical_round_trip_is_identity() {
    let mut c = ExperimentConfig::default();
    c.regularizer.lambda_per_seed.insert("31".into(), 11.0);
    c.neat.weight_mutate_power = 0.1 + 0.2;
    c.evaluation.seed_policy = EnvSeedPolicy::FixedPerTask;
    let text = c.canonical();
    let back = ExperimentConfig::from_toml_str(&text).unwrap();
    assert_eq!(back, c);
    assert_eq!(back.canonical(), text);
    assert_eq!(back.hash(), c.hash());
}

#[test]
fn hash_is_pinned_and_sensitive() {
    let c = ExperimentConfig::default();
    assert_eq!(c.hash().len(), 64);
    assert_eq!(c.hash(), ExperimentConfig::from_toml_str("").unwrap().hash());
    let mut d = c.clone();
    d.neat.elitism = 4;
    assert_ne!(c.hash(), d.hash());
    // Key order in the source file does not matter.
    let a = ExperimentConfig::from_toml_str("population_size = 20\nseeds = [1, 2]\n").unwrap();
    let b = ExperimentConfig::from_toml_str("seeds = [1, 2]\npopulation_size = 20\n").unwrap();
    assert_eq!(a.hash(), b.hash());
}

#[test]
fn file_values_and_overrides_layer_on_defaults() {
    let text = r#"
seeds = [13, 17]
[neat]
elitism = 3
[environment]
n_agents = 3
efficency_reward = false
[[tasks]]
target_color = "green"
season_colors = ["green", "yellow"]
generations = 7
"#;
    let c = ExperimentConfig::with_overrides(
        text,
        &[
            "neat.compatibility_threshold=2.5".into(),
            "tasks.0.generations=9".into(),
            "output_dir=elsewhere".into(),
            "evaluation.seed_policy=fixed_per_task".into(),
        ],
    )
    .unwrap();
    assert_eq!(c.seeds, [13, 17]);
    assert_eq!(c.neat.elitism, 3);
    assert_eq!(c.neat.node_add_prob, 0.2);
    assert_eq!(c.neat.compatibility_threshold, 2.5);
    assert_eq!(c.environment.n_agents, 3);
    assert_eq!(c.tasks.len(), 1);
    assert_eq!(c.tasks[0].generations, 9);
    assert_eq!(c.output_dir, "elsewhere");
    assert_eq!(c.evaluation.seed_policy, EnvSeedPolicy::FixedPerTask);
}

#[test]
fn errors_name_the_offending_key() {
    let cases: &[(&str, &str)] = &[
        ("neat.elitism=-1", "neat.elitism"),
        ("neat.bogus=1", "neat.bogus"),
        ("environment.n_agents=0", "environment.n_agents"),
        ("neat.conn_add_prob=1.5", "neat.conn_add_prob"),
        ("neat.activation_default=tanh", "neat.activation_default"),
        ("neat.initial_connection=unconnected", "neat.initial_connection"),
        ("regularizer.lambda=-2", "regularizer.lambda"),
        ("tasks.0.season_colors=[\"blue\"]", "tasks.0.season_colors"),
        ("tasks.5.generations=1", "tasks.5.generations"),
        ("seeds=[]", "seeds"),
        ("environment.efficiency_reward=true", "environment.efficiency_reward"),
    ];
    for (o, key) in cases {
        let e = ExperimentConfig::with_overrides("", &[o.to_string()]).unwrap_err();
        assert_eq!(&e.key, key, "{o}: {e}");
        assert!(e.to_string().starts_with(key));
    }
    let repeat = ["tasks.1.target_color=red".to_string(), "tasks.1.season_colors=[\"red\", \"blue\"]".into()];
    let e = ExperimentConfig::with_overrides("", &repeat).unwrap_err();
    assert_eq!(e.key, "tasks.1.target_color");
    let e = ExperimentConfig::from_toml_str("[neat]\nelitism = \"five\"\n").unwrap_err();
    assert_eq!(e.key, "neat.elitism");
    assert!(ExperimentConfig::with_overrides("", &["novalue".into()]).is_err());
}

#[test]
fn per_seed_lambda_map() {
    let text = r#"
seeds = [13, 17, 24, 31, 42]
[regularizer]
enabled = true
lambda = 11.0
lambda_per_seed = { "13" = 5.0, "17" = 5.0, "24" = 5.0, "31" = 11.0, "42" = 11.0 }
"#;
    let c = ExperimentConfig::from_toml_str(text).unwrap();
    let got: Vec<f64> = c.seeds.iter().map(|&s| c.lambda_for(s)).collect();
    assert_eq!(got, [5.0, 5.0, 5.0, 11.0, 11.0]);
    assert_eq!(c.lifelong(13).unwrap().regularizer.lambda, 5.0);
    assert_eq!(c.lambda_for(99), 11.0);
    let bad = ExperimentConfig::with_overrides(text, &["regularizer.lambda_per_seed.x=1".into()]).unwrap_err();
    assert_eq!(bad.key, "regularizer.lambda_per_seed.x");
}

#[test]
fn override_value_parsing() {
    let mut t = toml::Table::new();
    apply_override(&mut t, "a.b=3").unwrap();
    apply_override(&mut t, "a.c=true").unwrap();
    apply_override(&mut t, "a.d=plain words").unwrap();
    apply_override(&mut t, "a.e=[1, 2]").unwrap();
    let a = t["a"].as_table().unwrap();
    assert_eq!(a["b"].as_integer(), Some(3));
    assert_eq!(a["c"].as_bool(), Some(true));
    assert_eq!(a["d"].as_str(), Some("plain words"));
    assert_eq!(a["e"].as_array().unwrap().len(), 2);
}
