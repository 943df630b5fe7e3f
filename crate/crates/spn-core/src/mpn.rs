//! Max-product semantics. An [`Mpn`] shares the topology and weights of the
//! network it came from; sum nodes evaluate as a max over weight-scaled
//! children instead of a weighted sum. MPE inference runs one bottom-up max
//! pass and one top-down trace that follows the argmax child of every max
//! node it visits, accumulating per-edge traversal counts.

use crate::error::SpnError;
use crate::evidence::{Evidence, VarState};
use crate::graph::{Node, NodeId, Polarity, SpnGraph};

/// A network with max semantics at sum nodes.
#[derive(Debug, Clone)]
pub struct Mpn {
    graph: SpnGraph,
}

/// Result of MPE inference.
#[derive(Debug, Clone)]
pub struct MpeResult {
    /// Log of the max-product root value.
    pub log_value: f64,
    /// Complete assignment: evidence values on observed variables, argmax
    /// completions elsewhere.
    pub assignment: Vec<bool>,
    /// Traversal counts per weighted edge (indexed by `EdgeId`). An edge
    /// accumulates one count for every distinct top-down visit through it.
    pub traversal_counts: Vec<u64>,
}

impl MpeResult {
    /// Max-product root value in linear space.
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }

    /// The assignment as complete evidence, for plug-back checks.
    pub fn assignment_evidence(&self) -> Evidence {
        Evidence::from_bits(&self.assignment)
    }
}

impl SpnGraph {
    /// Reinterpret this network with max semantics. Topology and weights
    /// are identical; only sum-node evaluation changes.
    pub fn to_mpn(&self) -> Mpn {
        Mpn { graph: self.clone() }
    }

    /// Consuming variant of [`to_mpn`](Self::to_mpn).
    pub fn into_mpn(self) -> Mpn {
        Mpn { graph: self }
    }
}

impl Mpn {
    pub fn graph(&self) -> &SpnGraph {
        &self.graph
    }

    /// Weight updates during training go through the underlying graph.
    /// Structural edits invalidate edge ids exactly as they do on a plain
    /// graph.
    pub fn graph_mut(&mut self) -> &mut SpnGraph {
        &mut self.graph
    }

    pub fn into_graph(self) -> SpnGraph {
        self.graph
    }

    fn bottom_up(&self, evidence: &Evidence) -> Result<Vec<f64>, SpnError> {
        if !self.graph.is_acyclic() {
            return Err(SpnError::CyclicGraph);
        }
        if evidence.len() != self.graph.num_variables() {
            return Err(SpnError::DimensionMismatch {
                expected: self.graph.num_variables(),
                got: evidence.len(),
            });
        }
        let mut values = vec![f64::NEG_INFINITY; self.graph.node_count()];
        for &id in self.graph.topological_order() {
            values[id.0] = match self.graph.node(id) {
                Node::Leaf { variable, polarity } => {
                    if evidence.activates(*variable, *polarity) {
                        0.0
                    } else {
                        f64::NEG_INFINITY
                    }
                }
                Node::Sum { children, weights } => {
                    let mut best = f64::NEG_INFINITY;
                    for (c, w) in children.iter().zip(weights) {
                        if *w > 0.0 {
                            let v = w.ln() + values[c.0];
                            if v > best {
                                best = v;
                            }
                        }
                    }
                    best
                }
                Node::Product { children } => {
                    let mut acc = 0.0;
                    for c in children {
                        acc += values[c.0];
                        if acc == f64::NEG_INFINITY {
                            break;
                        }
                    }
                    acc
                }
            };
        }
        Ok(values)
    }

    /// Log of the max-product root value under the given evidence.
    pub fn log_evaluate(&self, evidence: &Evidence) -> Result<f64, SpnError> {
        Ok(self.bottom_up(evidence)?[self.graph.root().0])
    }

    /// Max-product root value in linear space.
    pub fn evaluate(&self, evidence: &Evidence) -> Result<f64, SpnError> {
        Ok(self.log_evaluate(evidence)?.exp())
    }

    /// Argmax child of a max node, given bottom-up values. Ties break to
    /// the lowest child NodeId so inference is deterministic.
    fn argmax_child(children: &[NodeId], weights: &[f64], values: &[f64]) -> usize {
        let mut best_idx = 0;
        let mut best_val = f64::NEG_INFINITY;
        let mut best_id = usize::MAX;
        for (j, (c, w)) in children.iter().zip(weights).enumerate() {
            let v = if *w > 0.0 { w.ln() + values[c.0] } else { f64::NEG_INFINITY };
            if v > best_val || (v == best_val && c.0 < best_id) {
                best_val = v;
                best_idx = j;
                best_id = c.0;
            }
        }
        best_idx
    }

    /// MPE inference: bottom-up max pass, then a top-down trace that visits
    /// the argmax child of every max node and all children of every
    /// product. Multiple parents propagate multiple visits, so an edge's
    /// count is the number of distinct root-to-leaf traversals through it.
    pub fn mpe_infer(&self, evidence: &Evidence) -> Result<MpeResult, SpnError> {
        let values = self.bottom_up(evidence)?;
        let g = &self.graph;
        let n = g.node_count();

        let mut visits = vec![0u64; n];
        visits[g.root().0] = 1;
        let mut traversal_counts = vec![0u64; g.weighted_edge_count()];

        // Assignment starts from the evidence; marginalized variables
        // default to false and are overwritten by whichever indicator the
        // trace reaches.
        let mut assignment: Vec<bool> = evidence
            .states()
            .iter()
            .map(|s| matches!(s, VarState::True))
            .collect();

        // Parents before children: reversed bottom-up order.
        for &id in g.topological_order().iter().rev() {
            let v = visits[id.0];
            if v == 0 {
                continue;
            }
            match g.node(id) {
                Node::Leaf { variable, polarity } => {
                    if evidence.get(*variable) == VarState::Marginalized {
                        assignment[*variable] = *polarity == Polarity::Positive;
                    }
                }
                Node::Sum { children, weights } => {
                    let j = Self::argmax_child(children, weights, &values);
                    let edge = g.edge_id(id, j).expect("sum node has an edge table entry");
                    traversal_counts[edge.0] += v;
                    visits[children[j].0] += v;
                }
                Node::Product { children } => {
                    for c in children {
                        visits[c.0] += v;
                    }
                }
            }
        }

        Ok(MpeResult { log_value: values[g.root().0], assignment, traversal_counts })
    }
}
