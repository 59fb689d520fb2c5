//! Structural analysis and alignment of taxonomies.
//!
//! The pipeline has three stages:
//!
//! 1. **Ingest** ([`ingest`]) — parse indented text directly into a
//!    taxonomy, or parse an edge-list graph and unfold it into one by
//!    rooted depth-first traversal (duplicating multi-parent nodes,
//!    cutting cycle edges).
//! 2. **Annotate** ([`analysis::annotate`]) — fill each record's
//!    neighborhood counters (children, brothers, brothers to the left,
//!    same-level taxons) by scanning the preorder sequence for depth
//!    changes.
//! 3. **Analyze / align** — count the deepest and terminal taxons,
//!    compute a scalar structural index for whole-taxonomy comparison
//!    ([`analysis`]), or match the records of two taxonomies attribute by
//!    attribute ([`align`]).
//!
//! Everything is deterministic: identical input bytes produce identical
//! output bytes.

#![forbid(unsafe_code)]

pub mod align;
pub mod analysis;
pub mod cli;
pub mod ingest;
pub mod model;

pub use align::{align, levenshtein, name_similarity, record_similarity, AlignError};
pub use analysis::{
    annotate, deepest_count, index_similarity, structural_index, terminal_count, NotAnnotated,
};
pub use ingest::{
    find_roots, graph_to_taxonomy, parse_edge_list, parse_indented, IndentUnit, IngestError,
    ParseDiagnostics, Warning,
};
pub use model::{
    KnowledgeGraph, Mapping, Relation, TaxonRecord, Taxonomy, TaxonomyError, WeightProfile,
};
