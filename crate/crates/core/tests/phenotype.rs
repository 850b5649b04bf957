mod common;

use common::oracles;
use rand::Rng;
use swarmlife_core::neat::{Genome, NodeKind};
use swarmlife_core::phenotype::{steepened_sigmoid, to_wheel_velocities, Phenotype};
use swarmlife_core::Error;

#[test]
fn sigmoid_reference_values() {
    assert_eq!(steepened_sigmoid(0.0), 0.5);
    assert!((steepened_sigmoid(1.0) - 0.992609).abs() <= 1e-6);
    assert!((steepened_sigmoid(-1.0) - (1.0 - 0.992609)).abs() <= 1e-6);
}

#[test]
fn matches_recursive_evaluator() {
    let mut rng = common::rng(2024);
    for i in 0..500 {
        let inputs = rng.random_range(1..12);
        let hidden = rng.random_range(0..8);
        let mut g = common::random_genome(&mut rng, i, inputs, hidden, 0.5);
        for c in g.connections.values_mut() {
            c.weight *= 0.2;
        }
        for n in g.nodes.values_mut() {
            n.bias *= 0.2;
        }
        let p = Phenotype::decode(&g).unwrap();
        assert_eq!(p.input_width(), inputs);
        assert_eq!(p.output_count(), 3);
        for _ in 0..4 {
            let obs: Vec<f64> = (0..inputs).map(|_| rng.random()).collect();
            let got = p.activate(&obs).unwrap();
            let want = oracles::recursive(&g, &obs);
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() <= 1e-12, "genome {i}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn no_connections_means_bias_only() {
    let mut g = Genome::new(0);
    for i in 0..4 {
        g.add_node(i, NodeKind::Input, 0.0);
    }
    g.add_node(4, NodeKind::Output, 0.2);
    g.add_node(5, NodeKind::Output, -0.1);
    g.add_node(6, NodeKind::Output, 0.0);
    g.add_node(7, NodeKind::Hidden, 3.0);
    g.add_connection(0, 0, 4, 2.0, false);
    let p = Phenotype::decode(&g).unwrap();
    for obs in [[0.0; 4], [1.0; 4], [0.3, 0.9, 0.1, 0.5]] {
        let out = p.activate(&obs).unwrap();
        assert_eq!(out, vec![steepened_sigmoid(0.2), steepened_sigmoid(-0.1), 0.5]);
    }
}

#[test]
fn decode_is_deterministic_and_rejects_cycles() {
    let mut rng = common::rng(1);
    let g = common::random_genome(&mut rng, 0, 5, 4, 0.6);
    assert_eq!(Phenotype::decode(&g).unwrap(), Phenotype::decode(&g).unwrap());

    let mut c = Genome::new(1);
    c.add_node(0, NodeKind::Input, 0.0);
    c.add_node(1, NodeKind::Output, 0.0);
    c.add_node(2, NodeKind::Hidden, 0.0);
    c.add_node(3, NodeKind::Hidden, 0.0);
    c.add_connection(0, 0, 2, 1.0, true);
    c.add_connection(1, 2, 3, 1.0, true);
    c.add_connection(2, 3, 2, 1.0, true);
    c.add_connection(3, 3, 1, 1.0, true);
    assert!(matches!(Phenotype::decode(&c), Err(Error::Structure(_))));
    c.connections.get_mut(&2).unwrap().enabled = false;
    assert!(Phenotype::decode(&c).is_ok());
}

#[test]
fn width_mismatch_is_reported() {
    let mut rng = common::rng(4);
    let g = common::random_genome(&mut rng, 0, 5, 1, 0.6);
    let p = Phenotype::decode(&g).unwrap();
    assert_eq!(
        p.activate(&[0.0; 4]),
        Err(Error::WidthMismatch { expected: 5, actual: 4 })
    );
}

#[test]
fn outputs_map_onto_wheel_range() {
    let v = to_wheel_velocities([0.0, 1.0, 0.5], 2.0);
    assert_eq!(v, [-2.0, 2.0, 0.0]);
}
