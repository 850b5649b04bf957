use super::genome::{Genome, GenomeId};

/// Child of `fitter` and `other`. Matching genes (same innovation number or
/// node id) come whole from a uniformly chosen parent; disjoint and excess
/// genes come from `fitter`, so the child's structure is exactly the
/// fitter parent's.
pub fn crossover<R: rand::Rng + ?Sized>(fitter: &Genome, other: &Genome, child_id: GenomeId, rng: &mut R) -> Genome {
    let mut child = Genome::new(child_id);
    for (id, n) in &fitter.nodes {
        let gene = match other.nodes.get(id) {
            Some(m) if m.kind == n.kind && rng.random_bool(0.5) => m,
            _ => n,
        };
        child.nodes.insert(*id, gene.clone());
    }
    for (innov, c) in &fitter.connections {
        let gene = match other.connections.get(innov) {
            Some(m) if m.source == c.source && m.target == c.target && rng.random_bool(0.5) => m,
            _ => c,
        };
        child.connections.insert(*innov, gene.clone());
    }
    child
}
