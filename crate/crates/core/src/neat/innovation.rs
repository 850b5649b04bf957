use alloc::collections::BTreeMap;

use super::genome::{Innovation, NodeId};

/// Hands out innovation numbers and hidden-node ids.
///
/// Structures present in the initial wiring keep their innovation number
/// for the whole run. Structures created by mutation are memoized only for
/// the current generation: the same mutation in two genomes of one
/// generation gets the same numbers, a later rediscovery gets fresh ones.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InnovationRegistry {
    next_innovation: Innovation,
    next_node: NodeId,
    #[cfg_attr(feature = "serde", serde(with = "crate::serde_pairs"))]
    initial: BTreeMap<(NodeId, NodeId), Innovation>,
    #[cfg_attr(feature = "serde", serde(with = "crate::serde_pairs"))]
    connections: BTreeMap<(NodeId, NodeId), Innovation>,
    splits: BTreeMap<Innovation, (NodeId, Innovation, Innovation)>,
}

impl InnovationRegistry {
    /// `first_free_node` is the first id not used by input, output or
    /// initial hidden nodes.
    pub fn new(first_free_node: NodeId) -> Self {
        InnovationRegistry {
            next_innovation: 1,
            next_node: first_free_node,
            initial: BTreeMap::new(),
            connections: BTreeMap::new(),
            splits: BTreeMap::new(),
        }
    }

    /// Registers a structure of the initial wiring. Idempotent.
    pub fn register_initial(&mut self, source: NodeId, target: NodeId) -> Innovation {
        if let Some(&i) = self.initial.get(&(source, target)) {
            return i;
        }
        let i = self.fresh_innovation();
        self.initial.insert((source, target), i);
        i
    }

    /// Innovation number for a connection `source -> target` created in the
    /// current generation.
    pub fn connection(&mut self, source: NodeId, target: NodeId) -> Innovation {
        if let Some(&i) = self.initial.get(&(source, target)) {
            return i;
        }
        if let Some(&i) = self.connections.get(&(source, target)) {
            return i;
        }
        let i = self.fresh_innovation();
        self.connections.insert((source, target), i);
        i
    }

    /// Splitting connection `split` (running `source -> target`) yields a new
    /// node and the innovations of its incoming and outgoing connections.
    pub fn split(&mut self, split: Innovation, source: NodeId, target: NodeId) -> (NodeId, Innovation, Innovation) {
        if let Some(&s) = self.splits.get(&split) {
            return s;
        }
        let node = self.next_node;
        self.next_node += 1;
        let incoming = self.fresh_innovation();
        let outgoing = self.fresh_innovation();
        self.connections.insert((source, node), incoming);
        self.connections.insert((node, target), outgoing);
        self.splits.insert(split, (node, incoming, outgoing));
        (node, incoming, outgoing)
    }

    /// Forgets the per-generation memo.
    pub fn begin_generation(&mut self) {
        self.connections.clear();
        self.splits.clear();
    }

    pub fn next_innovation(&self) -> Innovation {
        self.next_innovation
    }

    pub fn next_node(&self) -> NodeId {
        self.next_node
    }

    fn fresh_innovation(&mut self) -> Innovation {
        let i = self.next_innovation;
        self.next_innovation += 1;
        i
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_structure_same_generation_same_number() {
        let mut r = InnovationRegistry::new(10);
        let a = r.connection(1, 5);
        assert_eq!(a, r.connection(1, 5));
        let b = r.connection(2, 5);
        assert!(b > a);
        let s = r.split(a, 1, 5);
        assert_eq!(s, r.split(a, 1, 5));
        assert_eq!(s.0, 10);
        assert!(s.1 > b && s.2 > s.1);
        r.begin_generation();
        let a2 = r.connection(1, 5);
        assert!(a2 > s.2);
        assert_ne!(r.split(a, 1, 5).0, 10);
    }

    #[test]
    fn initial_structures_are_permanent() {
        let mut r = InnovationRegistry::new(4);
        let i = r.register_initial(0, 2);
        r.begin_generation();
        assert_eq!(r.connection(0, 2), i);
        assert_eq!(r.register_initial(0, 2), i);
    }
}
