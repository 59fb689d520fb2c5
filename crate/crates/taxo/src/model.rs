//! Core value types shared by every stage of the pipeline.
//!
//! A taxonomy is kept as a flat preorder sequence of [`TaxonRecord`]s; the
//! `depth` field encodes nesting, so no pointer structure is needed. All
//! types here are immutable after construction and safe to share across
//! threads.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// One taxon with its position and neighborhood counters.
///
/// `depth` and `name` are fixed at parse time. The four counters start at
/// zero and are filled by [`crate::analysis::annotate`]:
///
/// * `children` — direct sub-taxons
/// * `brothers` — taxons at the same depth under the same parent
/// * `brothers_left` — the subset of brothers occurring earlier in preorder
/// * `same_level` — all other taxons anywhere at the same depth
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaxonRecord {
    pub depth: usize,
    pub children: usize,
    pub brothers: usize,
    #[serde(rename = "brothersLeft")]
    pub brothers_left: usize,
    #[serde(rename = "sameLevel")]
    pub same_level: usize,
    pub name: String,
}

impl TaxonRecord {
    /// New record with every counter at zero.
    pub fn new(depth: usize, name: impl Into<String>) -> Self {
        TaxonRecord {
            depth,
            children: 0,
            brothers: 0,
            brothers_left: 0,
            same_level: 0,
            name: name.into(),
        }
    }
}

/// Violation of the preorder shape a record sequence must have.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TaxonomyError {
    #[error("first record has depth {0}, the first taxon must sit at depth 0")]
    FirstRecordNotRoot(usize),
    #[error("record {index} jumps from depth {from} to {to}; a child is exactly one level deeper")]
    DepthJump { index: usize, from: usize, to: usize },
}

/// A preorder sequence of records.
///
/// Invariants, checked on construction: the first record (if any) sits at
/// depth 0, and depth never increases by more than one between consecutive
/// records. Depth may drop by any amount, and may return to 0 mid-sequence
/// (a forest).
///
/// `annotated` is set only by [`crate::analysis::annotate`]; analyses that
/// read the counters refuse taxonomies that never went through it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Taxonomy {
    records: Vec<TaxonRecord>,
    annotated: bool,
}

impl Taxonomy {
    /// Validate and wrap a record sequence. The result is unannotated even
    /// if the counters carry values.
    pub fn from_records(records: Vec<TaxonRecord>) -> Result<Self, TaxonomyError> {
        Self::build(records, false)
    }

    pub(crate) fn from_annotated_records(records: Vec<TaxonRecord>) -> Result<Self, TaxonomyError> {
        Self::build(records, true)
    }

    fn build(records: Vec<TaxonRecord>, annotated: bool) -> Result<Self, TaxonomyError> {
        if let Some(first) = records.first() {
            if first.depth != 0 {
                return Err(TaxonomyError::FirstRecordNotRoot(first.depth));
            }
        }
        for (index, pair) in records.windows(2).enumerate() {
            if pair[1].depth > pair[0].depth + 1 {
                return Err(TaxonomyError::DepthJump {
                    index: index + 1,
                    from: pair[0].depth,
                    to: pair[1].depth,
                });
            }
        }
        Ok(Taxonomy { records, annotated })
    }

    pub fn records(&self) -> &[TaxonRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<TaxonRecord> {
        self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Whether the counters have been filled by the annotation pass.
    pub fn is_annotated(&self) -> bool {
        self.annotated
    }
}

/// Named concepts plus directed sub-concept edges. May contain cycles, may
/// be a forest; duplicate edges collapse to one.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeGraph {
    /// Node names in first-appearance order.
    order: Vec<String>,
    members: HashSet<String>,
    /// Children per parent, kept sorted for deterministic traversal.
    children: HashMap<String, BTreeSet<String>>,
    /// Nodes with at least one incoming edge.
    with_ancestor: HashSet<String>,
    edge_count: usize,
}

impl KnowledgeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register a node; repeated additions are no-ops.
    pub fn add_node(&mut self, name: &str) {
        if self.members.insert(name.to_string()) {
            self.order.push(name.to_string());
        }
    }

    /// Add a directed sub-concept edge, registering both endpoints.
    /// Returns false if the edge was already present.
    pub fn add_edge(&mut self, parent: &str, child: &str) -> bool {
        self.add_node(parent);
        self.add_node(child);
        let inserted = self
            .children
            .entry(parent.to_string())
            .or_default()
            .insert(child.to_string());
        if inserted {
            self.with_ancestor.insert(child.to_string());
            self.edge_count += 1;
        }
        inserted
    }

    pub fn contains(&self, name: &str) -> bool {
        self.members.contains(name)
    }

    /// Node names in first-appearance order.
    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(String::as_str)
    }

    /// Direct sub-concepts of `name`, in lexicographic order.
    pub fn children_of(
        &self,
        name: &str,
    ) -> impl DoubleEndedIterator<Item = &str> {
        self.children
            .get(name)
            .into_iter()
            .flatten()
            .map(String::as_str)
    }

    /// Whether `name` is the child end of at least one edge.
    pub fn has_ancestor(&self, name: &str) -> bool {
        self.with_ancestor.contains(name)
    }

    pub fn node_count(&self) -> usize {
        self.order.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// All edges as (parent, child) pairs.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.children.iter().flat_map(|(parent, kids)| {
            kids.iter().map(move |child| (parent.as_str(), child.as_str()))
        })
    }
}

/// The only relation the matcher emits; rendered as `=`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Relation {
    #[default]
    Equivalence,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("=")
    }
}

/// A correspondence between one taxon of the source taxonomy and one of the
/// target taxonomy, with a confidence in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Mapping {
    pub source: String,
    pub target: String,
    pub confidence: f64,
    pub relation: Relation,
}

impl Mapping {
    pub fn new(source: impl Into<String>, target: impl Into<String>, confidence: f64) -> Self {
        assert!(
            (0.0..=1.0).contains(&confidence),
            "confidence {confidence} outside [0, 1]"
        );
        Mapping {
            source: source.into(),
            target: target.into(),
            confidence,
            relation: Relation::Equivalence,
        }
    }
}

/// Rejected weight profile.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("weight for {0} is negative")]
    Negative(&'static str),
    #[error("weight for {0} is not a finite number")]
    NotFinite(&'static str),
    #[error("at least one weight must be positive")]
    AllZero,
}

/// Relative weights for the six record attributes, in table order:
/// depth, children, brothers, brothersLeft, sameLevel, name.
///
/// Weights are normalized (divided by their sum) at the point of use, so
/// scaling every weight by the same factor changes nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightProfile {
    weights: [f64; 6],
}

impl WeightProfile {
    pub const ATTRIBUTES: [&'static str; 6] = [
        "depth",
        "children",
        "brothers",
        "brothersLeft",
        "sameLevel",
        "name",
    ];

    /// Validate a weight vector: all entries finite and non-negative, at
    /// least one strictly positive.
    pub fn new(weights: [f64; 6]) -> Result<Self, WeightError> {
        for (w, attribute) in weights.iter().zip(Self::ATTRIBUTES) {
            if !w.is_finite() {
                return Err(WeightError::NotFinite(attribute));
            }
            if *w < 0.0 {
                return Err(WeightError::Negative(attribute));
            }
        }
        if weights.iter().all(|w| *w == 0.0) {
            return Err(WeightError::AllZero);
        }
        Ok(WeightProfile { weights })
    }

    /// Equal weight on every attribute.
    pub fn uniform() -> Self {
        WeightProfile { weights: [1.0; 6] }
    }

    pub fn weights(&self) -> [f64; 6] {
        self.weights
    }

    /// Sum of the raw weights; strictly positive by construction.
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

impl Default for WeightProfile {
    fn default() -> Self {
        Self::uniform()
    }
}
