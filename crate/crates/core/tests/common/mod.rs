#![allow(dead_code)]

pub mod oracles;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swarmlife_core::arena::{ColorSet, TaskSpec};
use swarmlife_core::neat::{Genome, NodeId, NodeKind};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn colors() -> ColorSet {
    ColorSet::new(["red", "blue", "green", "yellow"])
}

pub fn red() -> TaskSpec {
    TaskSpec::from_names(&colors(), "red", &["blue"]).unwrap()
}

pub fn green() -> TaskSpec {
    TaskSpec::from_names(&colors(), "green", &["yellow"]).unwrap()
}

/// A random feedforward genome. Non-input nodes get a random rank and
/// connections only run from lower to higher rank (inputs rank lowest),
/// with some connections disabled.
pub fn random_genome<R: Rng>(rng: &mut R, id: u64, inputs: usize, hidden: usize, density: f64) -> Genome {
    let mut g = Genome::new(id);
    for i in 0..inputs as NodeId {
        g.add_node(i, NodeKind::Input, 0.0);
    }
    let mut ranked: Vec<(NodeId, NodeKind)> = Vec::new();
    for k in 0..3 {
        ranked.push((inputs as NodeId + k, NodeKind::Output));
    }
    for k in 0..hidden as NodeId {
        ranked.push((inputs as NodeId + 3 + k, NodeKind::Hidden));
    }
    for &(id, kind) in &ranked {
        g.add_node(id, kind, rng.random_range(-5.0..5.0));
    }
    ranked.shuffle(rng);
    let mut innov = 0;
    let mut sources: Vec<NodeId> = (0..inputs as NodeId).collect();
    for &(target, kind) in &ranked {
        for &s in &sources {
            if rng.random::<f64>() < density {
                g.add_connection(innov, s, target, rng.random_range(-5.0..5.0), rng.random::<f64>() < 0.85);
                innov += 1;
            }
        }
        if kind == NodeKind::Hidden {
            sources.push(target);
        }
    }
    g
}

/// Two genomes drawn from a shared gene pool so that they have matching,
/// disjoint and excess genes in both node and connection space.
pub fn related_pair<R: Rng>(rng: &mut R) -> (Genome, Genome) {
    let inputs = rng.random_range(1..5);
    let hidden = rng.random_range(0..6);
    let pool = random_genome(rng, 0, inputs, hidden, 0.9);
    let pick = |id: u64, rng: &mut R| {
        let mut g = Genome::new(id);
        let keep_len = rng.random_range(0.3..1.0);
        for n in pool.nodes.values() {
            let extra = n.kind == NodeKind::Hidden && rng.random::<f64>() < 0.3;
            if !extra {
                g.add_node(n.id, n.kind, rng.random_range(-5.0..5.0));
            }
        }
        let cut = (pool.connections.len() as f64 * keep_len) as u64;
        for c in pool.connections.values() {
            let both = g.nodes.contains_key(&c.source) && g.nodes.contains_key(&c.target);
            if both && c.innovation <= cut && rng.random::<f64>() < 0.6 {
                g.add_connection(c.innovation, c.source, c.target, rng.random_range(-5.0..5.0), rng.random());
            }
        }
        g
    };
    let a = pick(1, rng);
    let b = pick(2, rng);
    (a, b)
}
