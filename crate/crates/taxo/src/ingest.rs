//! Input parsing and graph-to-taxonomy conversion.
//!
//! Two carriers are supported: an indented-text format where the leading
//! indent of each line encodes depth, and a tab-separated edge list for
//! general graphs. Graphs are unfolded into taxonomies by rooted
//! depth-first traversal: a node reachable along several distinct paths is
//! duplicated once per path, and an edge leading back onto the current
//! path is cut with a warning.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::model::{KnowledgeGraph, TaxonRecord, Taxonomy};

/// How the leading whitespace of a line maps to one nesting level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndentUnit {
    /// One tab per level.
    Tab,
    /// A fixed number of spaces per level; must be at least 1.
    Spaces(usize),
}

/// A non-fatal observation made while converting input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    /// Source line the warning refers to, when one exists. Cycle cuts
    /// happen during traversal and carry no line.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// What conversion discovered besides the records themselves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseDiagnostics {
    pub warnings: Vec<Warning>,
    /// Traversal roots in the order they were visited.
    pub root_names: Vec<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IngestError {
    #[error("line {line}: first taxon must start at depth 0")]
    FirstLineIndented { line: usize },
    #[error("line {line}: indent increases by more than one level")]
    IndentJump { line: usize },
    #[error("line {line}: {detail}")]
    MixedIndent { line: usize, detail: String },
    #[error("line {line}: {detail}")]
    MalformedLine { line: usize, detail: String },
    #[error("component containing '{node}' has no ancestor-less concept")]
    NoRootInComponent { node: String },
    #[error("root override '{name}' is not a node of the graph")]
    UnknownRootOverride { name: String },
    #[error("indent unit must be one tab or at least one space")]
    InvalidIndentUnit,
}

/// Parse indented text into a taxonomy. Each nonblank line becomes one
/// record: depth is the number of leading indent units, name is the rest
/// of the line with trailing whitespace removed. Blank lines are skipped;
/// LF and CRLF both work.
pub fn parse_indented(source: &str, unit: IndentUnit) -> Result<Taxonomy, IngestError> {
    if unit == IndentUnit::Spaces(0) {
        return Err(IngestError::InvalidIndentUnit);
    }
    let mut records: Vec<TaxonRecord> = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        let body_start = line
            .find(|c: char| c != '\t' && c != ' ')
            .expect("nonblank after trim_end");
        let (lead, name) = line.split_at(body_start);
        let depth = match unit {
            IndentUnit::Tab => {
                if lead.contains(' ') {
                    return Err(IngestError::MixedIndent {
                        line: line_no,
                        detail: "spaces in indentation, but the indent unit is one tab".into(),
                    });
                }
                lead.len()
            }
            IndentUnit::Spaces(width) => {
                if lead.contains('\t') {
                    return Err(IngestError::MixedIndent {
                        line: line_no,
                        detail: format!(
                            "tabs in indentation, but the indent unit is {width} spaces"
                        ),
                    });
                }
                if lead.len() % width != 0 {
                    return Err(IngestError::MixedIndent {
                        line: line_no,
                        detail: format!(
                            "{} leading spaces is not a multiple of the indent unit ({width})",
                            lead.len()
                        ),
                    });
                }
                lead.len() / width
            }
        };
        match records.last() {
            None if depth > 0 => return Err(IngestError::FirstLineIndented { line: line_no }),
            Some(prev) if depth > prev.depth + 1 => {
                return Err(IngestError::IndentJump { line: line_no })
            }
            _ => {}
        }
        records.push(TaxonRecord::new(depth, name));
    }
    Ok(Taxonomy::from_records(records).expect("scan enforces the taxonomy invariants"))
}

/// Parse a tab-separated edge list. `parent<TAB>child` lines add an edge
/// (and both endpoints); single-token lines add an isolated node; lines
/// starting with `#` are comments.
pub fn parse_edge_list(source: &str) -> Result<KnowledgeGraph, IngestError> {
    let mut graph = KnowledgeGraph::new();
    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match fields.as_slice() {
            [node] => graph.add_node(node.trim()),
            [parent, child] => {
                let (parent, child) = (parent.trim(), child.trim());
                if parent.is_empty() || child.is_empty() {
                    return Err(IngestError::MalformedLine {
                        line: line_no,
                        detail: "empty field in edge".into(),
                    });
                }
                graph.add_edge(parent, child);
            }
            more => {
                return Err(IngestError::MalformedLine {
                    line: line_no,
                    detail: format!(
                        "expected at most two tab-separated fields, found {}",
                        more.len()
                    ),
                })
            }
        }
    }
    Ok(graph)
}

/// Nodes with no incoming edge, in first-appearance order.
///
/// Errors if some connected component (in the undirected sense) contains
/// no such node — a pure cycle that no traversal could reach.
pub fn find_roots(graph: &KnowledgeGraph) -> Result<Vec<String>, IngestError> {
    let roots: Vec<String> = graph
        .nodes()
        .filter(|n| !graph.has_ancestor(n))
        .map(str::to_string)
        .collect();
    ensure_components_covered(graph, &roots)?;
    Ok(roots)
}

/// Check that every component is reachable (undirected) from some root;
/// report the first-appearing node of an uncovered component otherwise.
fn ensure_components_covered(graph: &KnowledgeGraph, roots: &[String]) -> Result<(), IngestError> {
    let mut undirected: HashMap<&str, Vec<&str>> = HashMap::new();
    for (parent, child) in graph.edges() {
        undirected.entry(parent).or_default().push(child);
        undirected.entry(child).or_default().push(parent);
    }
    let mut seen: HashSet<&str> = HashSet::new();
    let mut queue: VecDeque<&str> = VecDeque::new();
    for root in roots {
        if seen.insert(root.as_str()) {
            queue.push_back(root.as_str());
        }
    }
    while let Some(node) = queue.pop_front() {
        for &neighbor in undirected.get(node).into_iter().flatten() {
            if seen.insert(neighbor) {
                queue.push_back(neighbor);
            }
        }
    }
    match graph.nodes().find(|n| !seen.contains(n)) {
        Some(node) => Err(IngestError::NoRootInComponent {
            node: node.to_string(),
        }),
        None => Ok(()),
    }
}

/// Unfold a graph into a taxonomy by depth-first traversal from each root.
///
/// Traversal roots are the ancestor-less nodes in first-appearance order,
/// followed by any `root_overrides` not already among them. Children are
/// visited in lexicographic name order. A node reachable along several
/// distinct paths is appended once per path; an edge leading back onto the
/// current path is cut, recorded as a warning, and the node is not
/// re-appended.
pub fn graph_to_taxonomy(
    graph: &KnowledgeGraph,
    root_overrides: &[String],
) -> Result<(Taxonomy, ParseDiagnostics), IngestError> {
    for name in root_overrides {
        if !graph.contains(name) {
            return Err(IngestError::UnknownRootOverride { name: name.clone() });
        }
    }
    let mut roots: Vec<String> = graph
        .nodes()
        .filter(|n| !graph.has_ancestor(n))
        .map(str::to_string)
        .collect();
    for name in root_overrides {
        if !roots.contains(name) {
            roots.push(name.clone());
        }
    }
    ensure_components_covered(graph, &roots)?;

    let mut records: Vec<TaxonRecord> = Vec::new();
    let mut warnings: Vec<Warning> = Vec::new();
    for root in &roots {
        unfold(graph, root, &mut records, &mut warnings);
    }
    let taxonomy =
        Taxonomy::from_records(records).expect("traversal emits +1 depth steps from depth 0");
    Ok((
        taxonomy,
        ParseDiagnostics {
            warnings,
            root_names: roots,
        },
    ))
}

enum Step<'a> {
    Enter {
        name: &'a str,
        depth: usize,
        parent: Option<&'a str>,
    },
    Leave {
        name: &'a str,
    },
}

fn unfold<'a>(
    graph: &'a KnowledgeGraph,
    root: &'a str,
    records: &mut Vec<TaxonRecord>,
    warnings: &mut Vec<Warning>,
) {
    // Explicit stack instead of recursion: unfolding depth equals the
    // longest simple path, which can reach the node count.
    let mut on_path: HashSet<&str> = HashSet::new();
    let mut stack: Vec<Step<'a>> = vec![Step::Enter {
        name: root,
        depth: 0,
        parent: None,
    }];
    while let Some(step) = stack.pop() {
        match step {
            Step::Enter {
                name,
                depth,
                parent,
            } => {
                if on_path.contains(name) {
                    let parent = parent.expect("a cycle needs an incoming edge");
                    warnings.push(Warning {
                        line: None,
                        message: format!("cut cycle edge {parent} -> {name}"),
                    });
                    continue;
                }
                records.push(TaxonRecord::new(depth, name));
                on_path.insert(name);
                stack.push(Step::Leave { name });
                // Reversed so the lexicographically first child pops first.
                for child in graph.children_of(name).rev() {
                    stack.push(Step::Enter {
                        name: child,
                        depth: depth + 1,
                        parent: Some(name),
                    });
                }
            }
            Step::Leave { name } => {
                on_path.remove(name);
            }
        }
    }
}
