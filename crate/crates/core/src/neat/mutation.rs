use alloc::vec::Vec;

use super::config::NeatConfig;
use super::genome::{Genome, NodeKind};
use super::innovation::InnovationRegistry;
use super::{clamp, gaussian, unit};

/// Which structural mutations actually changed the genome.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MutationReport {
    pub added_node: bool,
    pub deleted_node: bool,
    pub added_connection: bool,
    pub deleted_connection: bool,
}

pub fn mutate<R: rand::Rng + ?Sized>(
    genome: &Genome,
    registry: &mut InnovationRegistry,
    rng: &mut R,
    cfg: &NeatConfig,
) -> Genome {
    let mut child = genome.clone();
    mutate_in_place(&mut child, registry, rng, cfg);
    child
}

/// Each structural mutation fires independently with its own probability,
/// then every weight, bias and enabled flag gets its per-gene chance.
pub fn mutate_in_place<R: rand::Rng + ?Sized>(
    genome: &mut Genome,
    registry: &mut InnovationRegistry,
    rng: &mut R,
    cfg: &NeatConfig,
) -> MutationReport {
    let mut report = MutationReport::default();
    if unit(rng) < cfg.node_add_prob {
        report.added_node = add_node(genome, registry, rng);
    }
    if unit(rng) < cfg.node_delete_prob {
        report.deleted_node = delete_node(genome, rng);
    }
    if unit(rng) < cfg.conn_add_prob {
        report.added_connection = add_connection(genome, registry, rng, cfg);
    }
    if unit(rng) < cfg.conn_delete_prob {
        report.deleted_connection = delete_connection(genome, rng);
    }

    for c in genome.connections.values_mut() {
        c.weight = perturb(
            c.weight,
            rng,
            cfg.weight_mutate_rate,
            cfg.weight_replace_rate,
            cfg.weight_mutate_power,
            (cfg.weight_init_mean, cfg.weight_init_stdev),
            (cfg.weight_min_value, cfg.weight_max_value),
        );
        if unit(rng) < cfg.enabled_mutate_rate {
            c.enabled = !c.enabled;
        }
    }
    for n in genome.nodes.values_mut().filter(|n| n.kind != NodeKind::Input) {
        n.bias = perturb(
            n.bias,
            rng,
            cfg.bias_mutate_rate,
            cfg.bias_replace_rate,
            cfg.bias_mutate_power,
            (cfg.bias_init_mean, cfg.bias_init_stdev),
            (cfg.bias_min_value, cfg.bias_max_value),
        );
    }
    report
}

fn perturb<R: rand::Rng + ?Sized>(
    value: f64,
    rng: &mut R,
    mutate_rate: f64,
    replace_rate: f64,
    power: f64,
    (mean, stdev): (f64, f64),
    (lo, hi): (f64, f64),
) -> f64 {
    let r = unit(rng);
    if r < mutate_rate {
        clamp(value + gaussian(rng, 0.0, power), lo, hi)
    } else if r < mutate_rate + replace_rate {
        clamp(gaussian(rng, mean, stdev), lo, hi)
    } else {
        value
    }
}

/// Splits a random enabled connection: the old gene is disabled, the new
/// incoming connection gets weight 1 and the outgoing one inherits the old
/// weight, so the network's function changes as little as possible.
fn add_node<R: rand::Rng + ?Sized>(genome: &mut Genome, registry: &mut InnovationRegistry, rng: &mut R) -> bool {
    let enabled: Vec<_> = genome.enabled_connections().map(|c| c.innovation).collect();
    if enabled.is_empty() {
        return false;
    }
    let split = enabled[rng.random_range(0..enabled.len())];
    let old = genome.connections[&split].clone();
    let (node, incoming, outgoing) = registry.split(split, old.source, old.target);
    if genome.nodes.contains_key(&node)
        || genome.connections.contains_key(&incoming)
        || genome.connections.contains_key(&outgoing)
    {
        return false;
    }
    genome.connections.get_mut(&split).expect("present").enabled = false;
    genome.add_node(node, NodeKind::Hidden, 0.0);
    genome.add_connection(incoming, old.source, node, 1.0, true);
    genome.add_connection(outgoing, node, old.target, old.weight, true);
    true
}

/// Removes a random hidden node with every connection touching it. Input
/// and output nodes are never removed.
fn delete_node<R: rand::Rng + ?Sized>(genome: &mut Genome, rng: &mut R) -> bool {
    let hidden = genome.hidden_ids();
    if hidden.is_empty() {
        return false;
    }
    let victim = hidden[rng.random_range(0..hidden.len())];
    genome.nodes.remove(&victim);
    genome
        .connections
        .retain(|_, c| c.source != victim && c.target != victim);
    true
}

fn add_connection<R: rand::Rng + ?Sized>(
    genome: &mut Genome,
    registry: &mut InnovationRegistry,
    rng: &mut R,
    cfg: &NeatConfig,
) -> bool {
    let sources: Vec<_> = genome
        .nodes
        .values()
        .filter(|n| n.kind != NodeKind::Output)
        .map(|n| n.id)
        .collect();
    let targets: Vec<_> = genome
        .nodes
        .values()
        .filter(|n| n.kind != NodeKind::Input)
        .map(|n| n.id)
        .collect();
    if sources.is_empty() || targets.is_empty() {
        return false;
    }
    let source = sources[rng.random_range(0..sources.len())];
    let target = targets[rng.random_range(0..targets.len())];
    if genome.has_connection(source, target) || genome.creates_cycle(source, target) {
        return false;
    }
    let weight = clamp(
        gaussian(rng, cfg.weight_init_mean, cfg.weight_init_stdev),
        cfg.weight_min_value,
        cfg.weight_max_value,
    );
    let innovation = registry.connection(source, target);
    if genome.connections.contains_key(&innovation) {
        return false;
    }
    genome.add_connection(innovation, source, target, weight, true);
    true
}

fn delete_connection<R: rand::Rng + ?Sized>(genome: &mut Genome, rng: &mut R) -> bool {
    if genome.connections.is_empty() {
        return false;
    }
    let keys: Vec<_> = genome.connections.keys().copied().collect();
    let victim = keys[rng.random_range(0..keys.len())];
    genome.connections.remove(&victim);
    true
}
