use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

pub type NodeId = u32;
pub type Innovation = u64;
pub type GenomeId = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum NodeKind {
    Input,
    Hidden,
    Output,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NodeGene {
    pub id: NodeId,
    /// Always 0 for input nodes.
    pub bias: f64,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConnectionGene {
    pub innovation: Innovation,
    pub source: NodeId,
    pub target: NodeId,
    pub weight: f64,
    pub enabled: bool,
}

/// Node and connection genes, keyed by node id and innovation number so
/// iteration order is always sorted.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Genome {
    pub id: GenomeId,
    pub nodes: BTreeMap<NodeId, NodeGene>,
    pub connections: BTreeMap<Innovation, ConnectionGene>,
}

impl Genome {
    pub fn new(id: GenomeId) -> Self {
        Genome {
            id,
            nodes: BTreeMap::new(),
            connections: BTreeMap::new(),
        }
    }

    pub fn add_node(&mut self, id: NodeId, kind: NodeKind, bias: f64) {
        let bias = if kind == NodeKind::Input { 0.0 } else { bias };
        self.nodes.insert(id, NodeGene { id, bias, kind });
    }

    pub fn add_connection(
        &mut self,
        innovation: Innovation,
        source: NodeId,
        target: NodeId,
        weight: f64,
        enabled: bool,
    ) {
        self.connections.insert(
            innovation,
            ConnectionGene {
                innovation,
                source,
                target,
                weight,
                enabled,
            },
        );
    }

    fn ids_of(&self, kind: NodeKind) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.values().filter(move |n| n.kind == kind).map(|n| n.id)
    }

    pub fn input_ids(&self) -> Vec<NodeId> {
        self.ids_of(NodeKind::Input).collect()
    }

    pub fn output_ids(&self) -> Vec<NodeId> {
        self.ids_of(NodeKind::Output).collect()
    }

    pub fn hidden_ids(&self) -> Vec<NodeId> {
        self.ids_of(NodeKind::Hidden).collect()
    }

    pub fn num_inputs(&self) -> usize {
        self.ids_of(NodeKind::Input).count()
    }

    /// Genes that take part in genetic distance: every connection gene
    /// (enabled or not) plus hidden and output node genes.
    pub fn gene_count(&self) -> usize {
        self.connections.len() + self.nodes.values().filter(|n| n.kind != NodeKind::Input).count()
    }

    pub fn enabled_connections(&self) -> impl Iterator<Item = &ConnectionGene> {
        self.connections.values().filter(|c| c.enabled)
    }

    pub fn has_connection(&self, source: NodeId, target: NodeId) -> bool {
        self.connections
            .values()
            .any(|c| c.source == source && c.target == target)
    }

    /// True if adding `source -> target` would close a cycle in the graph of
    /// all connection genes, enabled or not.
    pub fn creates_cycle(&self, source: NodeId, target: NodeId) -> bool {
        if source == target {
            return true;
        }
        let mut adjacency: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for c in self.connections.values() {
            adjacency.entry(c.source).or_default().push(c.target);
        }
        // Is `source` reachable from `target`?
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![target];
        while let Some(n) = stack.pop() {
            if n == source {
                return true;
            }
            if !seen.insert(n) {
                continue;
            }
            if let Some(next) = adjacency.get(&n) {
                stack.extend(next.iter().copied());
            }
        }
        false
    }

    /// Kahn's algorithm over all connection genes.
    pub fn is_acyclic(&self) -> bool {
        let mut indegree: BTreeMap<NodeId, usize> = self.nodes.keys().map(|&k| (k, 0)).collect();
        for c in self.connections.values() {
            *indegree.entry(c.target).or_insert(0) += 1;
            indegree.entry(c.source).or_insert(0);
        }
        let mut ready: Vec<NodeId> = indegree
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&k, _)| k)
            .collect();
        let mut visited = 0;
        while let Some(n) = ready.pop() {
            visited += 1;
            for c in self.connections.values().filter(|c| c.source == n) {
                let d = indegree.get_mut(&c.target).expect("target registered");
                *d -= 1;
                if *d == 0 {
                    ready.push(c.target);
                }
            }
        }
        visited == indegree.len()
    }

    /// Checks the structural invariants: endpoints exist, inputs are never
    /// targets, (source, target) pairs are unique, the graph is acyclic and
    /// parameters lie within the given bounds.
    pub fn validate(&self, weight_bound: f64, bias_bound: f64) -> crate::Result<()> {
        use crate::Error;
        use alloc::format;
        let mut pairs = BTreeSet::new();
        for c in self.connections.values() {
            let (Some(src), Some(dst)) = (self.nodes.get(&c.source), self.nodes.get(&c.target)) else {
                return Err(Error::Structure(format!(
                    "connection {} references a missing node",
                    c.innovation
                )));
            };
            if dst.kind == NodeKind::Input || src.kind == NodeKind::Output {
                return Err(Error::Structure(format!(
                    "connection {} has an invalid direction",
                    c.innovation
                )));
            }
            if !pairs.insert((c.source, c.target)) {
                return Err(Error::Structure(format!(
                    "duplicate connection {} -> {}",
                    c.source, c.target
                )));
            }
            if !(c.weight.abs() <= weight_bound) {
                return Err(Error::Structure(format!("weight out of range on {}", c.innovation)));
            }
        }
        for n in self.nodes.values() {
            if !(n.bias.abs() <= bias_bound) || n.kind == NodeKind::Input && n.bias != 0.0 {
                return Err(Error::Structure(format!("bias out of range on node {}", n.id)));
            }
        }
        if !self.is_acyclic() {
            return Err(Error::Structure("connection graph has a cycle".into()));
        }
        Ok(())
    }
}
