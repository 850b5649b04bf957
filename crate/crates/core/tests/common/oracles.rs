//! Independent reference implementations used as test oracles.

use std::collections::BTreeMap;

use swarmlife_core::arena::{ArenaState, ColorId};
use swarmlife_core::neat::{DistanceConfig, Genome, NodeId, NodeKind};

/// Independent alignment: every gene becomes a (space, marker, value)
/// triple, both lists are sorted, and a merge walk classifies each gene.
pub fn distance(a: &Genome, b: &Genome, cfg: &DistanceConfig) -> f64 {
    fn genes(g: &Genome) -> Vec<(u8, u64, f64)> {
        let mut v: Vec<(u8, u64, f64)> = g
            .nodes
            .values()
            .filter(|n| n.kind != NodeKind::Input)
            .map(|n| (0, n.id as u64, n.bias))
            .chain(g.connections.values().map(|c| (1, c.innovation, c.weight)))
            .collect();
        v.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        v
    }
    let (ga, gb) = (genes(a), genes(b));
    let (mut excess, mut disjoint, mut matching) = (0usize, 0usize, 0usize);
    let mut diff = 0.0;
    for space in 0..2u8 {
        let xa: Vec<_> = ga.iter().filter(|g| g.0 == space).collect();
        let xb: Vec<_> = gb.iter().filter(|g| g.0 == space).collect();
        let (mut i, mut j) = (0, 0);
        let max_a = xa.last().map(|g| g.1);
        let max_b = xb.last().map(|g| g.1);
        let classify = |m: u64, other_max: Option<u64>| match other_max {
            Some(om) if m < om => 1,
            _ => 0,
        };
        while i < xa.len() || j < xb.len() {
            if i < xa.len() && j < xb.len() && xa[i].1 == xb[j].1 {
                matching += 1;
                diff += (xa[i].2 - xb[j].2).abs();
                i += 1;
                j += 1;
            } else if j >= xb.len() || (i < xa.len() && xa[i].1 < xb[j].1) {
                if classify(xa[i].1, max_b) == 1 { disjoint += 1 } else { excess += 1 }
                i += 1;
            } else {
                if classify(xb[j].1, max_a) == 1 { disjoint += 1 } else { excess += 1 }
                j += 1;
            }
        }
    }
    let size = ga.len().max(gb.len()) as f64;
    let w = if matching == 0 { 0.0 } else { diff / matching as f64 };
    cfg.excess * excess as f64 / size + cfg.disjoint * disjoint as f64 / size + cfg.weight * w
}

/// Memoised depth-first evaluation straight from the genes.
pub fn recursive(g: &Genome, obs: &[f64]) -> Vec<f64> {
    fn value(g: &Genome, id: NodeId, inputs: &BTreeMap<NodeId, f64>, memo: &mut BTreeMap<NodeId, f64>) -> f64 {
        if let Some(v) = inputs.get(&id) {
            return *v;
        }
        if let Some(v) = memo.get(&id) {
            return *v;
        }
        let mut total = g.nodes[&id].bias;
        for c in g.connections.values().filter(|c| c.enabled && c.target == id) {
            total += c.weight * value(g, c.source, inputs, memo);
        }
        let v = 1.0 / (1.0 + (-4.9 * total).exp());
        memo.insert(id, v);
        v
    }
    let inputs: BTreeMap<NodeId, f64> = g.input_ids().into_iter().zip(obs.iter().copied()).collect();
    let mut memo = BTreeMap::new();
    g.output_ids().into_iter().map(|o| value(g, o, &inputs, &mut memo)).collect()
}

/// Reward recomputed from state transitions alone: an agent that goes
/// from empty to carrying picked up that box, one that goes from carrying
/// to empty delivered it.
pub fn recount(before: &ArenaState, after: &ArenaState, target: ColorId) -> i64 {
    let mut r = 0;
    for (a, b) in before.agents.iter().zip(&after.agents) {
        match (a.carrying, b.carrying) {
            (None, Some(k)) => r += if after.boxes[k].color == target { 1 } else { -1 },
            (Some(k), None) => r += if before.boxes[k].color == target { 2 } else { 0 },
            _ => {}
        }
    }
    r
}

