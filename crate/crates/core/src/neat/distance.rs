use alloc::collections::BTreeMap;

use super::config::DistanceConfig;
use super::genome::{Genome, NodeKind};

#[derive(Default)]
struct Alignment {
    excess: usize,
    disjoint: usize,
    matching: usize,
    diff_sum: f64,
}

/// Counts excess/disjoint genes of `a` against `b` and accumulates matching
/// parameter differences. Called once per direction; matches are only
/// accumulated on the first pass.
fn align<K: Ord + Copy>(
    a: &BTreeMap<K, f64>,
    b: &BTreeMap<K, f64>,
    acc: &mut Alignment,
    count_matches: bool,
) {
    let b_max = b.keys().next_back().copied();
    for (k, wa) in a {
        match b.get(k) {
            Some(wb) => {
                if count_matches {
                    acc.matching += 1;
                    acc.diff_sum += libm::fabs(wa - wb);
                }
            }
            None => match b_max {
                Some(m) if *k < m => acc.disjoint += 1,
                _ => acc.excess += 1,
            },
        }
    }
}

/// Compatibility distance between two genomes.
///
/// Connection genes align on innovation number and node genes (hidden and
/// output) on node id. Both kinds count toward excess, disjoint and the
/// normalizing genome size; matching connections contribute weight
/// differences and matching nodes bias differences to the mean parameter
/// difference. Disabled connections are included throughout.
pub fn genetic_distance(a: &Genome, b: &Genome, cfg: &DistanceConfig) -> f64 {
    let conn = |g: &Genome| -> BTreeMap<u64, f64> {
        g.connections.iter().map(|(&k, c)| (k, c.weight)).collect()
    };
    let node = |g: &Genome| -> BTreeMap<u32, f64> {
        g.nodes
            .iter()
            .filter(|(_, n)| n.kind != NodeKind::Input)
            .map(|(&k, n)| (k, n.bias))
            .collect()
    };
    let (ca, cb) = (conn(a), conn(b));
    let (na, nb) = (node(a), node(b));

    let mut acc = Alignment::default();
    align(&na, &nb, &mut acc, true);
    align(&nb, &na, &mut acc, false);
    align(&ca, &cb, &mut acc, true);
    align(&cb, &ca, &mut acc, false);

    let size = a.gene_count().max(b.gene_count());
    if size == 0 {
        return 0.0;
    }
    let size = size as f64;
    let mean_diff = if acc.matching > 0 {
        acc.diff_sum / acc.matching as f64
    } else {
        0.0
    };
    cfg.excess * acc.excess as f64 / size + cfg.disjoint * acc.disjoint as f64 / size + cfg.weight * mean_diff
}
