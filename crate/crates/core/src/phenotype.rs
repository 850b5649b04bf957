//! Decoding genomes into feedforward networks and running them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::neat::{Genome, NodeId, NodeKind};
use crate::{Error, Result};

/// Steepened logistic transfer function, `1 / (1 + e^(-4.9 x))`.
pub fn steepened_sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-4.9 * x))
}

/// Maps a raw network output in (0, 1) affinely onto `[-v_max, v_max]`.
pub fn to_wheel_velocities(raw: [f64; 3], v_max: f64) -> [f64; 3] {
    raw.map(|r| (2.0 * r - 1.0) * v_max)
}

#[derive(Debug, Clone, PartialEq)]
struct NodeEval {
    slot: usize,
    bias: f64,
    incoming: Vec<(usize, f64)>,
}

/// Feedforward network decoded from a genome.
///
/// Every node owns a slot in a scratch buffer; inputs take the first
/// `input_width` slots in node-id order. Non-input nodes are evaluated in
/// topological order over enabled connections, so nodes with no incoming
/// edges simply produce `phi(bias)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Phenotype {
    input_width: usize,
    slots: usize,
    order: Vec<NodeEval>,
    outputs: Vec<usize>,
}

impl Phenotype {
    pub fn decode(genome: &Genome) -> Result<Self> {
        let mut slot_of: BTreeMap<NodeId, usize> = BTreeMap::new();
        let inputs = genome.input_ids();
        for (i, id) in inputs.iter().enumerate() {
            slot_of.insert(*id, i);
        }
        let mut next = inputs.len();
        for n in genome.nodes.values().filter(|n| n.kind != NodeKind::Input) {
            slot_of.insert(n.id, next);
            next += 1;
        }

        let mut incoming: BTreeMap<NodeId, Vec<(NodeId, f64)>> = BTreeMap::new();
        let mut outgoing: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        let mut indegree: BTreeMap<NodeId, usize> = genome
            .nodes
            .values()
            .filter(|n| n.kind != NodeKind::Input)
            .map(|n| (n.id, 0))
            .collect();
        for c in genome.enabled_connections() {
            if !slot_of.contains_key(&c.source) || !slot_of.contains_key(&c.target) {
                return Err(Error::Structure(alloc::format!(
                    "connection {} references a missing node",
                    c.innovation
                )));
            }
            let Some(d) = indegree.get_mut(&c.target) else {
                return Err(Error::Structure(alloc::format!(
                    "connection {} targets an input",
                    c.innovation
                )));
            };
            *d += 1;
            incoming.entry(c.target).or_default().push((c.source, c.weight));
            if genome.nodes[&c.source].kind != NodeKind::Input {
                outgoing.entry(c.source).or_default().push(c.target);
            } else {
                // Input sources are always ready.
                *indegree.get_mut(&c.target).expect("checked") -= 1;
            }
        }

        let mut ready: BTreeSet<NodeId> = indegree.iter().filter(|(_, &d)| d == 0).map(|(&k, _)| k).collect();
        let mut order = Vec::with_capacity(indegree.len());
        while let Some(id) = ready.pop_first() {
            order.push(NodeEval {
                slot: slot_of[&id],
                bias: genome.nodes[&id].bias,
                incoming: incoming
                    .get(&id)
                    .map(|v| v.iter().map(|(s, w)| (slot_of[s], *w)).collect())
                    .unwrap_or_default(),
            });
            for t in outgoing.get(&id).into_iter().flatten() {
                let d = indegree.get_mut(t).expect("registered");
                *d -= 1;
                if *d == 0 {
                    ready.insert(*t);
                }
            }
        }
        if order.len() != indegree.len() {
            return Err(Error::Structure("enabled connections form a cycle".into()));
        }

        Ok(Phenotype {
            input_width: inputs.len(),
            slots: next,
            order,
            outputs: genome.output_ids().iter().map(|id| slot_of[id]).collect(),
        })
    }

    pub fn input_width(&self) -> usize {
        self.input_width
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    /// Evaluates the network using a caller-owned scratch buffer.
    pub fn activate_into(&self, obs: &[f64], scratch: &mut Vec<f64>, out: &mut [f64]) -> Result<()> {
        if obs.len() != self.input_width {
            return Err(Error::WidthMismatch {
                expected: self.input_width,
                actual: obs.len(),
            });
        }
        if out.len() != self.outputs.len() {
            return Err(Error::WidthMismatch {
                expected: self.outputs.len(),
                actual: out.len(),
            });
        }
        scratch.clear();
        scratch.resize(self.slots, 0.0);
        scratch[..self.input_width].copy_from_slice(obs);
        for node in &self.order {
            let mut sum = node.bias;
            for &(src, w) in &node.incoming {
                sum += w * scratch[src];
            }
            scratch[node.slot] = steepened_sigmoid(sum);
        }
        for (o, &slot) in out.iter_mut().zip(&self.outputs) {
            *o = scratch[slot];
        }
        Ok(())
    }

    pub fn activate(&self, obs: &[f64]) -> Result<Vec<f64>> {
        let mut scratch = Vec::new();
        let mut out = alloc::vec![0.0; self.outputs.len()];
        self.activate_into(obs, &mut scratch, &mut out)?;
        Ok(out)
    }
}
