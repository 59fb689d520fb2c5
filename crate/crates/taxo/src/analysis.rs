//! The structural annotation pass and the analyses built on it.
//!
//! [`annotate`] fills the four counters of every record by scanning the
//! preorder sequence for depth changes:
//!
//! * `same_level` counts every other record at the same depth, anywhere.
//! * Brothers live in the record's *sibling window*: the maximal
//!   contiguous range around it that contains no shallower record. A
//!   shallower (outer) taxon severs brotherhood; deeper (inner) taxons are
//!   skipped over and sever nothing.
//! * Children are the records one level deeper that follow before the
//!   depth falls back to the record's own level or above. Grandchildren
//!   in between do not break the chain.
//!
//! Per-record work is linear in the sequence length, so a full pass is
//! O(n²) in the worst case.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{TaxonRecord, Taxonomy};

/// Returned by analyses that read counters from a taxonomy that never went
/// through [`annotate`].
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("taxonomy has not been annotated")]
pub struct NotAnnotated;

/// Fill every record's counters, returning a new annotated taxonomy.
/// Depths and names are untouched; the input is not mutated.
pub fn annotate(taxonomy: &Taxonomy) -> Taxonomy {
    let records = taxonomy.records();
    let n = records.len();

    let mut per_depth: HashMap<usize, usize> = HashMap::new();
    for record in records {
        *per_depth.entry(record.depth).or_insert(0) += 1;
    }

    let mut annotated = Vec::with_capacity(n);
    for (i, record) in records.iter().enumerate() {
        let depth = record.depth;

        let same_level = per_depth[&depth] - 1;

        // Sibling window: walk outward until a shallower record appears.
        let mut brothers = 0;
        let mut brothers_left = 0;
        let mut j = i;
        while j > 0 && records[j - 1].depth >= depth {
            j -= 1;
            if records[j].depth == depth {
                brothers += 1;
                brothers_left += 1;
            }
        }
        let mut k = i + 1;
        while k < n && records[k].depth >= depth {
            if records[k].depth == depth {
                brothers += 1;
            }
            k += 1;
        }

        // Children: records one level deeper before depth falls back to
        // `depth` or above.
        let mut children = 0;
        let mut k = i + 1;
        while k < n && records[k].depth > depth {
            if records[k].depth == depth + 1 {
                children += 1;
            }
            k += 1;
        }

        annotated.push(TaxonRecord {
            depth,
            children,
            brothers,
            brothers_left,
            same_level,
            name: record.name.clone(),
        });
    }
    Taxonomy::from_annotated_records(annotated).expect("depths unchanged from a valid taxonomy")
}

/// Number of records at the maximum depth present; 0 for an empty
/// taxonomy. Does not require annotation.
pub fn deepest_count(taxonomy: &Taxonomy) -> usize {
    let records = taxonomy.records();
    match records.iter().map(|r| r.depth).max() {
        Some(max) => records.iter().filter(|r| r.depth == max).count(),
        None => 0,
    }
}

/// Number of records with no children. Requires annotation; on deep-only
/// counting see [`deepest_count`], which can differ whenever a childless
/// taxon sits above the deepest level.
pub fn terminal_count(taxonomy: &Taxonomy) -> Result<usize, NotAnnotated> {
    if !taxonomy.is_annotated() {
        return Err(NotAnnotated);
    }
    Ok(taxonomy
        .records()
        .iter()
        .filter(|r| r.children == 0)
        .count())
}

/// Sum of all five structural counters over all records — a coarse
/// fingerprint of the taxonomy's shape. Names never enter it.
pub fn structural_index(taxonomy: &Taxonomy) -> Result<u64, NotAnnotated> {
    if !taxonomy.is_annotated() {
        return Err(NotAnnotated);
    }
    Ok(taxonomy
        .records()
        .iter()
        .map(|r| {
            (r.depth + r.children + r.brothers + r.brothers_left + r.same_level) as u64
        })
        .sum())
}

/// Ratio similarity of two structural indexes: 1.0 on equality (including
/// both zero), otherwise min/max.
pub fn index_similarity(a: u64, b: u64) -> f64 {
    if a == b {
        return 1.0;
    }
    a.min(b) as f64 / a.max(b) as f64
}
