//! Shared test oracles and generators.
//!
//! The annotation oracle deliberately takes a different route from the
//! library: it rebuilds the explicit parent/child tree behind the preorder
//! sequence and recounts every attribute from tree structure, instead of
//! scanning windows over the flat sequence.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;
use taxo::model::{KnowledgeGraph, TaxonRecord, Taxonomy};

/// Explicit tree (or forest) reconstructed from a preorder record
/// sequence. Index 0..n are record indices; `top` lists the depth-0
/// records, which count as siblings of one another.
pub struct OracleTree {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub top: Vec<usize>,
}

pub fn build_tree(records: &[TaxonRecord]) -> OracleTree {
    let n = records.len();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut top: Vec<usize> = Vec::new();
    // Ancestor chain: chain[d] is the current depth-d ancestor.
    let mut chain: Vec<usize> = Vec::new();
    for (i, record) in records.iter().enumerate() {
        chain.truncate(record.depth);
        if record.depth == 0 {
            top.push(i);
        } else {
            let p = chain[record.depth - 1];
            parent[i] = Some(p);
            children[p].push(i);
        }
        chain.push(i);
    }
    OracleTree {
        parent,
        children,
        top,
    }
}

/// Recount all four attributes of every record from the explicit tree.
pub fn oracle_annotate(taxonomy: &Taxonomy) -> Vec<TaxonRecord> {
    let records = taxonomy.records();
    let tree = build_tree(records);

    let mut per_depth: HashMap<usize, usize> = HashMap::new();
    for record in records {
        *per_depth.entry(record.depth).or_insert(0) += 1;
    }

    let mut out: Vec<TaxonRecord> = records
        .iter()
        .map(|r| TaxonRecord::new(r.depth, r.name.clone()))
        .collect();
    for i in 0..records.len() {
        out[i].children = tree.children[i].len();
        out[i].same_level = per_depth[&records[i].depth] - 1;
    }
    for group in tree.children.iter().chain(std::iter::once(&tree.top)) {
        for (position, &i) in group.iter().enumerate() {
            out[i].brothers = group.len() - 1;
            // Group members are in ascending preorder index order.
            out[i].brothers_left = position;
        }
    }
    out
}

/// Sibling groups of the tree, including the top-level group; used for
/// group-sum properties and sibling permutations.
pub fn sibling_groups(records: &[TaxonRecord]) -> Vec<Vec<usize>> {
    let tree = build_tree(records);
    tree.children
        .into_iter()
        .chain(std::iter::once(tree.top))
        .filter(|g| !g.is_empty())
        .collect()
}

/// Re-serialize the tree to preorder records after permuting every
/// node's child list (and the top-level list) with `shuffle`.
pub fn permute_siblings(
    records: &[TaxonRecord],
    rng: &mut impl Rng,
) -> Vec<TaxonRecord> {
    use rand::seq::SliceRandom;
    let mut tree = build_tree(records);
    tree.top.shuffle(rng);
    for kids in &mut tree.children {
        kids.shuffle(rng);
    }
    let mut out = Vec::with_capacity(records.len());
    let mut stack: Vec<(usize, usize)> = tree.top.iter().rev().map(|&i| (i, 0)).collect();
    while let Some((i, depth)) = stack.pop() {
        out.push(TaxonRecord::new(depth, records[i].name.clone()));
        for &child in tree.children[i].iter().rev() {
            stack.push((child, depth + 1));
        }
    }
    out
}

/// Random preorder-valid taxonomy: at most `max_nodes` records, depth
/// capped at `max_depth`, biased toward descending so deep structure
/// actually occurs.
pub fn random_taxonomy(
    rng: &mut impl Rng,
    max_nodes: usize,
    max_depth: usize,
    unique_names: bool,
) -> Taxonomy {
    let n = rng.random_range(1..=max_nodes);
    let mut records = Vec::with_capacity(n);
    let mut previous_depth = 0usize;
    for i in 0..n {
        let depth = if i == 0 {
            0
        } else {
            let cap = (previous_depth + 1).min(max_depth);
            if rng.random_bool(0.5) {
                cap
            } else {
                rng.random_range(0..=cap)
            }
        };
        let name = if unique_names {
            format!("n{i}")
        } else {
            // Small pool so duplicate names occur.
            const POOL: [&str; 6] = ["alpha", "beta", "gamma", "delta", "eps", "zeta"];
            POOL[rng.random_range(0..POOL.len())].to_string()
        };
        records.push(TaxonRecord::new(depth, name));
        previous_depth = depth;
    }
    Taxonomy::from_records(records).expect("generator keeps the +1 step invariant")
}

/// Count simple (no repeated node) paths from each traversal root — the
/// number of records unfolding must emit.
pub fn count_simple_paths(graph: &KnowledgeGraph, roots: &[String]) -> usize {
    fn walk(graph: &KnowledgeGraph, node: &str, on_path: &mut Vec<String>) -> usize {
        let mut count = 1; // the path ending at `node`
        on_path.push(node.to_string());
        let children: Vec<String> = graph.children_of(node).map(str::to_string).collect();
        for child in children {
            if !on_path.iter().any(|n| n == &child) {
                count += walk(graph, &child, on_path);
            }
        }
        on_path.pop();
        count
    }
    roots
        .iter()
        .map(|root| walk(graph, root, &mut Vec::new()))
        .sum()
}

/// The worked six-node fixture A(B(D,E),C(F)).
pub fn t1() -> Taxonomy {
    Taxonomy::from_records(vec![
        TaxonRecord::new(0, "A"),
        TaxonRecord::new(1, "B"),
        TaxonRecord::new(2, "D"),
        TaxonRecord::new(2, "E"),
        TaxonRecord::new(1, "C"),
        TaxonRecord::new(2, "F"),
    ])
    .unwrap()
}
