//! Versioned JSON file format.
//!
//! ```json
//! {"version":1,"num_variables":2,"root":10,"nodes":[
//!   {"id":0,"kind":"leaf","var":0,"polarity":"positive"},
//!   {"id":4,"kind":"sum","children":[0,1],"weights":[2.00000000000000011e-1,...]},
//!   {"id":8,"kind":"product","children":[4,5]}
//! ]}
//! ```
//!
//! Weights are written in scientific notation with 18 significant digits,
//! which round-trips every f64 exactly. The writer emits nodes in id order
//! with a fixed field order, so serializing the same graph twice produces
//! identical bytes.

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::Deserialize;

use crate::error::FormatError;
use crate::graph::{Node, NodeId, Polarity, SpnGraph};

pub const FORMAT_VERSION: u32 = 1;

/// Serialize a graph to the versioned JSON document.
pub fn to_json(graph: &SpnGraph) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"version\":{},\"num_variables\":{},\"root\":{},\"nodes\":[",
        FORMAT_VERSION,
        graph.num_variables(),
        graph.root().0
    );
    for (id, node) in graph.nodes().iter().enumerate() {
        if id > 0 {
            out.push(',');
        }
        out.push_str("\n  ");
        match node {
            Node::Leaf { variable, polarity } => {
                let pol = match polarity {
                    Polarity::Positive => "positive",
                    Polarity::Negative => "negative",
                };
                let _ = write!(out, "{{\"id\":{id},\"kind\":\"leaf\",\"var\":{variable},\"polarity\":\"{pol}\"}}");
            }
            Node::Sum { children, weights } => {
                let _ = write!(out, "{{\"id\":{id},\"kind\":\"sum\",\"children\":[");
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{}", c.0);
                }
                out.push_str("],\"weights\":[");
                for (i, w) in weights.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{w:.17e}");
                }
                out.push_str("]}");
            }
            Node::Product { children } => {
                let _ = write!(out, "{{\"id\":{id},\"kind\":\"product\",\"children\":[");
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{}", c.0);
                }
                out.push_str("]}");
            }
        }
    }
    out.push_str("\n]}\n");
    out
}

pub fn to_writer<W: Write>(mut w: W, graph: &SpnGraph) -> Result<(), FormatError> {
    w.write_all(to_json(graph).as_bytes())?;
    Ok(())
}

#[derive(Deserialize)]
struct FileDoc {
    version: u32,
    num_variables: usize,
    root: usize,
    nodes: Vec<FileNode>,
}

#[derive(Deserialize)]
struct FileNode {
    id: usize,
    kind: String,
    #[serde(default)]
    var: Option<usize>,
    #[serde(default)]
    polarity: Option<String>,
    #[serde(default)]
    children: Option<Vec<usize>>,
    #[serde(default)]
    weights: Option<Vec<f64>>,
}

/// Parse a graph from the versioned JSON document. Node ids may appear in
/// any order but must be dense in `[0, node_count)`.
pub fn from_json(text: &str) -> Result<SpnGraph, FormatError> {
    let doc: FileDoc =
        serde_json::from_str(text).map_err(|e| FormatError::Malformed(e.to_string()))?;
    if doc.version != FORMAT_VERSION {
        return Err(FormatError::Version { found: doc.version, expected: FORMAT_VERSION });
    }
    let count = doc.nodes.len();
    let mut slots: Vec<Option<Node>> = (0..count).map(|_| None).collect();
    for fnode in doc.nodes {
        if fnode.id >= count {
            return Err(FormatError::NonDenseIds { count });
        }
        if slots[fnode.id].is_some() {
            return Err(FormatError::DuplicateId(fnode.id));
        }
        let node = match fnode.kind.as_str() {
            "leaf" => {
                let variable = fnode.var.ok_or_else(|| FormatError::BadNode {
                    id: fnode.id,
                    reason: "leaf requires \"var\"".into(),
                })?;
                let polarity = match fnode.polarity.as_deref() {
                    Some("positive") => Polarity::Positive,
                    Some("negative") => Polarity::Negative,
                    other => {
                        return Err(FormatError::BadNode {
                            id: fnode.id,
                            reason: format!("leaf polarity must be positive|negative, got {other:?}"),
                        })
                    }
                };
                Node::Leaf { variable, polarity }
            }
            "sum" => {
                let children = fnode.children.unwrap_or_default();
                let weights = fnode.weights.unwrap_or_default();
                Node::Sum {
                    children: children.into_iter().map(NodeId).collect(),
                    weights,
                }
            }
            "product" => {
                let children = fnode.children.unwrap_or_default();
                Node::Product { children: children.into_iter().map(NodeId).collect() }
            }
            other => {
                return Err(FormatError::BadNode {
                    id: fnode.id,
                    reason: format!("unknown kind {other:?}"),
                })
            }
        };
        slots[fnode.id] = Some(node);
    }
    let nodes: Vec<Node> = slots
        .into_iter()
        .map(|s| s.ok_or(FormatError::NonDenseIds { count }))
        .collect::<Result<_, _>>()?;
    Ok(SpnGraph::from_parts(nodes, NodeId(doc.root), doc.num_variables)?)
}

pub fn from_reader<R: Read>(mut r: R) -> Result<SpnGraph, FormatError> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    from_json(&text)
}
