use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::metrics::CensusRow;
use crate::neat::SpeciesId;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LifespanRow {
    pub species_id: SpeciesId,
    pub created_at: usize,
    pub extinct_at: Option<usize>,
    pub peak_size: usize,
}

/// Builds species lifespans from the per-generation census. A species is
/// created at the first generation it is counted and goes extinct at the
/// first later generation it is missing.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpeciesTracker {
    rows: BTreeMap<SpeciesId, LifespanRow>,
}

impl SpeciesTracker {
    pub fn observe(&mut self, census: &CensusRow) {
        let g = census.generation;
        for &(id, size) in &census.species {
            let row = self.rows.entry(id).or_insert(LifespanRow {
                species_id: id,
                created_at: g,
                extinct_at: None,
                peak_size: 0,
            });
            row.peak_size = row.peak_size.max(size);
        }
        for row in self.rows.values_mut() {
            if row.extinct_at.is_none() && census.species.binary_search_by_key(&row.species_id, |s| s.0).is_err() {
                row.extinct_at = Some(g);
            }
        }
    }

    pub fn table(&self) -> Vec<LifespanRow> {
        self.rows.values().cloned().collect()
    }
}

pub fn track_species(census: &[CensusRow]) -> Vec<LifespanRow> {
    let mut t = SpeciesTracker::default();
    for row in census {
        t.observe(row);
    }
    t.table()
}
