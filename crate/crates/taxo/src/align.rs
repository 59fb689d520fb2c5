//! Rule-based structural matcher.
//!
//! Every record of the source taxonomy is scored against every record of
//! the target as a weighted mean of six similarities: one per structural
//! counter (depth, children, brothers, brothersLeft, sameLevel) plus a
//! normalized edit-distance similarity over the names. The best-scoring
//! target wins, ties preferring an identical name and then the earlier
//! preorder position, and the pair is emitted when the score clears the
//! threshold.

use std::cmp;
use std::collections::HashMap;

use thiserror::Error;

use crate::analysis::NotAnnotated;
use crate::model::{Mapping, TaxonRecord, Taxonomy, WeightProfile};

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum AlignError {
    #[error(transparent)]
    NotAnnotated(#[from] NotAnnotated),
    #[error("threshold {0} is outside [0, 1]")]
    ThresholdOutOfRange(f64),
}

/// Minimum number of single-character insertions, deletions and
/// substitutions turning `a` into `b`, over Unicode scalar values.
pub fn levenshtein(a: &str, b: &str) -> usize {
    if a.is_empty() {
        return b.chars().count();
    }
    if b.is_empty() {
        return a.chars().count();
    }
    let b_chars: Vec<char> = b.chars().collect();
    let mut row: Vec<usize> = (0..=b_chars.len()).collect();
    for (i, ca) in a.chars().enumerate() {
        let mut diagonal = i;
        row[0] = i + 1;
        for (j, &cb) in b_chars.iter().enumerate() {
            let cost = cmp::min(
                cmp::min(row[j], row[j + 1]) + 1,
                diagonal + usize::from(ca != cb),
            );
            diagonal = row[j + 1];
            row[j + 1] = cost;
        }
    }
    *row.last().unwrap()
}

/// Edit distance scaled into [0, 1]: 1 for equal strings (or two empty
/// ones), 0 when every character must change.
pub fn name_similarity(a: &str, b: &str) -> f64 {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 1.0;
    }
    1.0 - levenshtein(a, b) as f64 / longest as f64
}

/// Closeness of two counters: 1 on equality, otherwise 1 − |x−y|/max(x,y).
pub fn attribute_similarity(x: usize, y: usize) -> f64 {
    if x == y {
        return 1.0;
    }
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    1.0 - (hi - lo) as f64 / hi as f64
}

/// Weighted mean of the six attribute similarities.
pub fn record_similarity(a: &TaxonRecord, b: &TaxonRecord, weights: &WeightProfile) -> f64 {
    let similarities = [
        attribute_similarity(a.depth, b.depth),
        attribute_similarity(a.children, b.children),
        attribute_similarity(a.brothers, b.brothers),
        attribute_similarity(a.brothers_left, b.brothers_left),
        attribute_similarity(a.same_level, b.same_level),
        name_similarity(&a.name, &b.name),
    ];
    let weights = weights.weights();
    // Numerator and denominator are summed in the same order, so when all
    // six similarities are 1 the two sums are bit-identical and the
    // quotient is exactly 1.0.
    let weighted: f64 = weights
        .iter()
        .zip(similarities)
        .map(|(w, s)| w * s)
        .sum();
    let total: f64 = weights.iter().sum();
    weighted / total
}

/// Match every record of `source` against `target`, emitting one mapping
/// per source record whose best score reaches `threshold`, in source
/// preorder. Records whose name repeats within their own taxonomy are
/// labeled `name#index` to keep mappings unambiguous.
pub fn align(
    source: &Taxonomy,
    target: &Taxonomy,
    weights: &WeightProfile,
    threshold: f64,
) -> Result<Vec<Mapping>, AlignError> {
    if !source.is_annotated() || !target.is_annotated() {
        return Err(NotAnnotated.into());
    }
    if !(0.0..=1.0).contains(&threshold) {
        return Err(AlignError::ThresholdOutOfRange(threshold));
    }
    let source_labels = disambiguated_labels(source);
    let target_labels = disambiguated_labels(target);

    let mut mappings = Vec::new();
    for (i, record) in source.records().iter().enumerate() {
        let mut best: Option<(usize, f64, bool)> = None;
        for (j, candidate) in target.records().iter().enumerate() {
            let similarity = record_similarity(record, candidate, weights);
            let name_equal = record.name == candidate.name;
            let better = match best {
                None => true,
                Some((_, best_similarity, best_name_equal)) => {
                    similarity > best_similarity
                        || (similarity == best_similarity && name_equal && !best_name_equal)
                }
            };
            if better {
                best = Some((j, similarity, name_equal));
            }
        }
        if let Some((j, similarity, _)) = best {
            if similarity >= threshold {
                mappings.push(Mapping::new(
                    source_labels[i].clone(),
                    target_labels[j].clone(),
                    similarity,
                ));
            }
        }
    }
    Ok(mappings)
}

/// Output labels for a taxonomy's records: the bare name when unique,
/// `name#index` (0-based preorder index) when the name repeats.
fn disambiguated_labels(taxonomy: &Taxonomy) -> Vec<String> {
    let mut occurrences: HashMap<&str, usize> = HashMap::new();
    for record in taxonomy.records() {
        *occurrences.entry(record.name.as_str()).or_insert(0) += 1;
    }
    taxonomy
        .records()
        .iter()
        .enumerate()
        .map(|(index, record)| {
            if occurrences[record.name.as_str()] > 1 {
                format!("{}#{index}", record.name)
            } else {
                record.name.clone()
            }
        })
        .collect()
}
