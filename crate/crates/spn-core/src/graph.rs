//! Graph representation: a flat node array with index-based children, a
//! cached children-before-parents order, interned per-node scopes, and a
//! dense index over weighted (sum) edges.

use std::collections::HashMap;
use std::fmt;

use crate::error::BuildError;
use crate::scope::Scope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Index of a weighted edge (an edge out of a sum node). Edge ids are dense
/// in `[0, weighted_edge_count)` and stable until the graph's structure is
/// edited; weight-only updates keep them valid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf { variable: usize, polarity: Polarity },
    Sum { children: Vec<NodeId>, weights: Vec<f64> },
    Product { children: Vec<NodeId> },
}

impl Node {
    pub fn children(&self) -> &[NodeId] {
        match self {
            Node::Leaf { .. } => &[],
            Node::Sum { children, .. } => children,
            Node::Product { children } => children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf { .. })
    }

    pub fn is_sum(&self) -> bool {
        matches!(self, Node::Sum { .. })
    }

    pub fn is_product(&self) -> bool {
        matches!(self, Node::Product { .. })
    }
}

/// A violation of the SPN validity conditions. Violations are data, not
/// errors: `validate` reports all of them and an empty report means the
/// graph is a valid SPN.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Node takes part in a cycle (or depends on one).
    Cycle { node: NodeId },
    /// Node is not reachable from the root.
    Unreachable { node: NodeId },
    /// Completeness: `child`'s scope differs from the sum's first child.
    IncompleteSum { node: NodeId, child: NodeId },
    /// Decomposability: `child`'s scope overlaps an earlier sibling's.
    OverlappingProduct { node: NodeId, child: NodeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cycle { node } => write!(f, "{node}: part of a cycle"),
            Violation::Unreachable { node } => write!(f, "{node}: unreachable from root"),
            Violation::IncompleteSum { node, child } => {
                write!(f, "{node}: sum child {child} has a different scope (incomplete)")
            }
            Violation::OverlappingProduct { node, child } => {
                write!(f, "{node}: product child {child} overlaps a sibling scope")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid SPN");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A sum-product network over binary variables.
#[derive(Debug, Clone)]
pub struct SpnGraph {
    nodes: Vec<Node>,
    root: NodeId,
    num_variables: usize,
    /// Children-before-parents order over the acyclic part of the graph.
    /// Shorter than `nodes` exactly when a cycle exists.
    order: Vec<NodeId>,
    acyclic: bool,
    /// Interned scope table plus per-node scope ids (usize::MAX when the
    /// node's scope could not be computed, i.e. it sits on a cycle).
    scopes: Vec<Scope>,
    scope_ids: Vec<usize>,
    /// Weighted-edge index: per-node offset into `edges`.
    edge_offsets: Vec<usize>,
    edges: Vec<(NodeId, usize)>,
}

impl SpnGraph {
    /// Assemble a graph from raw parts, checking structural well-formedness
    /// (index ranges, arities, finite nonnegative weights). Cycles are
    /// tolerated here so that `validate` can report them.
    pub fn from_parts(
        nodes: Vec<Node>,
        root: NodeId,
        num_variables: usize,
    ) -> Result<Self, BuildError> {
        if num_variables == 0 {
            return Err(BuildError::NoVariables);
        }
        let count = nodes.len();
        if root.0 >= count {
            return Err(BuildError::RootOutOfRange { root: root.0, count });
        }
        for (i, node) in nodes.iter().enumerate() {
            match node {
                Node::Leaf { variable, .. } => {
                    if *variable >= num_variables {
                        return Err(BuildError::VariableOutOfRange {
                            node: i,
                            variable: *variable,
                            num_variables,
                        });
                    }
                }
                Node::Sum { children, weights } => {
                    if children.is_empty() {
                        return Err(BuildError::EmptySum(i));
                    }
                    if children.len() != weights.len() {
                        return Err(BuildError::WeightArity {
                            node: i,
                            children: children.len(),
                            weights: weights.len(),
                        });
                    }
                    for (j, w) in weights.iter().enumerate() {
                        if !w.is_finite() || *w < 0.0 {
                            return Err(BuildError::InvalidWeight { node: i, index: j, weight: *w });
                        }
                    }
                    for c in children {
                        if c.0 >= count {
                            return Err(BuildError::ChildOutOfRange { node: i, child: c.0, count });
                        }
                    }
                }
                Node::Product { children } => {
                    if children.is_empty() {
                        return Err(BuildError::EmptyProduct(i));
                    }
                    for c in children {
                        if c.0 >= count {
                            return Err(BuildError::ChildOutOfRange { node: i, child: c.0, count });
                        }
                    }
                }
            }
        }
        let mut graph = SpnGraph {
            nodes,
            root,
            num_variables,
            order: Vec::new(),
            acyclic: false,
            scopes: Vec::new(),
            scope_ids: Vec::new(),
            edge_offsets: Vec::new(),
            edges: Vec::new(),
        };
        graph.rebuild_caches();
        Ok(graph)
    }

    /// Recompute the topological order, scope table, and edge index. Called
    /// after any structural edit.
    fn rebuild_caches(&mut self) {
        let n = self.nodes.len();

        // Weighted-edge index.
        self.edge_offsets = vec![usize::MAX; n];
        self.edges.clear();
        for (i, node) in self.nodes.iter().enumerate() {
            if let Node::Sum { children, .. } = node {
                self.edge_offsets[i] = self.edges.len();
                for j in 0..children.len() {
                    self.edges.push((NodeId(i), j));
                }
            }
        }

        // Kahn's algorithm over child -> parent edges: a node is ready once
        // all of its children are ordered.
        let mut pending: Vec<usize> = self.nodes.iter().map(|n| n.children().len()).collect();
        let mut parents: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, node) in self.nodes.iter().enumerate() {
            for c in node.children() {
                parents[c.0].push(i);
            }
        }
        let mut ready: Vec<usize> = (0..n).filter(|&i| pending[i] == 0).collect();
        self.order.clear();
        while let Some(i) = ready.pop() {
            self.order.push(NodeId(i));
            for &p in &parents[i] {
                pending[p] -= 1;
                if pending[p] == 0 {
                    ready.push(p);
                }
            }
        }
        self.acyclic = self.order.len() == n;

        // Scopes, bottom-up over the ordered part.
        self.scopes.clear();
        self.scope_ids = vec![usize::MAX; n];
        let mut intern: HashMap<Scope, usize> = HashMap::new();
        for idx in 0..self.order.len() {
            let id = self.order[idx];
            let scope = match &self.nodes[id.0] {
                Node::Leaf { variable, .. } => Scope::singleton(self.num_variables, *variable),
                Node::Sum { children, .. } | Node::Product { children } => {
                    let mut s = Scope::empty(self.num_variables);
                    for c in children {
                        s.union_with(&self.scopes[self.scope_ids[c.0]]);
                    }
                    s
                }
            };
            let sid = *intern.entry(scope.clone()).or_insert_with(|| {
                self.scopes.push(scope);
                self.scopes.len() - 1
            });
            self.scope_ids[id.0] = sid;
        }
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn is_acyclic(&self) -> bool {
        self.acyclic
    }

    /// Children-before-parents order; covers every node iff the graph is
    /// acyclic.
    pub fn topological_order(&self) -> &[NodeId] {
        &self.order
    }

    /// The node's variable scope, or None if it sits on a cycle.
    pub fn scope(&self, id: NodeId) -> Option<&Scope> {
        let sid = self.scope_ids[id.0];
        self.scopes.get(sid)
    }

    /// Total child edges (sum and product).
    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.children().len()).sum()
    }

    /// Number of weighted (sum) edges.
    pub fn weighted_edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Resolve an edge id to (sum node, child index).
    pub fn edge(&self, edge: EdgeId) -> (NodeId, usize) {
        self.edges[edge.0]
    }

    pub fn edge_id(&self, node: NodeId, child_index: usize) -> Option<EdgeId> {
        let off = self.edge_offsets[node.0];
        if off == usize::MAX {
            return None;
        }
        match &self.nodes[node.0] {
            Node::Sum { children, .. } if child_index < children.len() => {
                Some(EdgeId(off + child_index))
            }
            _ => None,
        }
    }

    pub fn edge_weight(&self, edge: EdgeId) -> f64 {
        let (node, idx) = self.edges[edge.0];
        match &self.nodes[node.0] {
            Node::Sum { weights, .. } => weights[idx],
            _ => unreachable!("edge table points at a non-sum node"),
        }
    }

    pub fn edge_child(&self, edge: EdgeId) -> NodeId {
        let (node, idx) = self.edges[edge.0];
        match &self.nodes[node.0] {
            Node::Sum { children, .. } => children[idx],
            _ => unreachable!("edge table points at a non-sum node"),
        }
    }

    /// Weighted edges in id order.
    pub fn weighted_edges(&self) -> impl Iterator<Item = (EdgeId, NodeId, usize)> + '_ {
        self.edges.iter().enumerate().map(|(i, &(n, c))| (EdgeId(i), n, c))
    }

    pub fn sum_weights(&self, node: NodeId) -> Option<&[f64]> {
        match &self.nodes[node.0] {
            Node::Sum { weights, .. } => Some(weights),
            _ => None,
        }
    }

    /// Update one weight. Keeps edge ids valid.
    pub fn set_edge_weight(&mut self, edge: EdgeId, weight: f64) -> Result<(), BuildError> {
        let (node, idx) = self.edges[edge.0];
        if !weight.is_finite() || weight < 0.0 {
            return Err(BuildError::InvalidWeight { node: node.0, index: idx, weight });
        }
        match &mut self.nodes[node.0] {
            Node::Sum { weights, .. } => {
                weights[idx] = weight;
                Ok(())
            }
            _ => Err(BuildError::NotASum { node: node.0 }),
        }
    }

    /// Replace all weights of one sum node. Keeps edge ids valid.
    pub fn set_sum_weights(&mut self, node: NodeId, new: &[f64]) -> Result<(), BuildError> {
        match &mut self.nodes[node.0] {
            Node::Sum { children, weights } => {
                if new.len() != children.len() {
                    return Err(BuildError::WeightArity {
                        node: node.0,
                        children: children.len(),
                        weights: new.len(),
                    });
                }
                for (j, w) in new.iter().enumerate() {
                    if !w.is_finite() || *w < 0.0 {
                        return Err(BuildError::InvalidWeight { node: node.0, index: j, weight: *w });
                    }
                }
                weights.copy_from_slice(new);
                Ok(())
            }
            _ => Err(BuildError::NotASum { node: node.0 }),
        }
    }

    /// Remove one child of a sum node. Refuses to empty the sum. Edge ids
    /// are invalidated.
    pub fn remove_sum_child(&mut self, node: NodeId, child_index: usize) -> Result<(), BuildError> {
        match &mut self.nodes[node.0] {
            Node::Sum { children, weights } => {
                if children.len() == 1 {
                    return Err(BuildError::LastSumChild(node.0));
                }
                children.remove(child_index);
                weights.remove(child_index);
            }
            _ => return Err(BuildError::NotASum { node: node.0 }),
        }
        self.rebuild_caches();
        Ok(())
    }

    /// Drop every sum child whose weight is exactly zero. A zero-weight
    /// child contributes nothing to either the sum or the max semantics, so
    /// evaluation is unchanged. Sums whose weights are all zero are left
    /// alone. Returns the number of edges removed; edge ids are invalidated
    /// when nonzero.
    pub fn remove_zero_weight_children(&mut self) -> usize {
        let mut removed = 0;
        for node in &mut self.nodes {
            if let Node::Sum { children, weights } = node {
                if weights.iter().all(|w| *w == 0.0) {
                    continue;
                }
                let before = children.len();
                let mut kept_children = Vec::with_capacity(before);
                let mut kept_weights = Vec::with_capacity(before);
                for (c, w) in children.iter().zip(weights.iter()) {
                    if *w != 0.0 {
                        kept_children.push(*c);
                        kept_weights.push(*w);
                    }
                }
                removed += before - kept_children.len();
                *children = kept_children;
                *weights = kept_weights;
            }
        }
        if removed > 0 {
            self.rebuild_caches();
        }
        removed
    }

    /// Delete nodes unreachable from the root and compact ids. Returns the
    /// number of nodes removed; node and edge ids are invalidated when
    /// nonzero.
    pub fn drop_unreachable(&mut self) -> usize {
        let n = self.nodes.len();
        let mut reachable = vec![false; n];
        let mut stack = vec![self.root.0];
        reachable[self.root.0] = true;
        while let Some(i) = stack.pop() {
            for c in self.nodes[i].children() {
                if !reachable[c.0] {
                    reachable[c.0] = true;
                    stack.push(c.0);
                }
            }
        }
        let removed = reachable.iter().filter(|r| !**r).count();
        if removed == 0 {
            return 0;
        }
        let mut remap = vec![usize::MAX; n];
        let mut kept = Vec::with_capacity(n - removed);
        for (i, node) in std::mem::take(&mut self.nodes).into_iter().enumerate() {
            if reachable[i] {
                remap[i] = kept.len();
                kept.push(node);
            }
        }
        for node in &mut kept {
            match node {
                Node::Sum { children, .. } | Node::Product { children } => {
                    for c in children.iter_mut() {
                        *c = NodeId(remap[c.0]);
                    }
                }
                Node::Leaf { .. } => {}
            }
        }
        self.nodes = kept;
        self.root = NodeId(remap[self.root.0]);
        self.rebuild_caches();
        removed
    }

    /// Check the SPN validity conditions: acyclicity, reachability,
    /// completeness of sums, decomposability of products. An empty report
    /// means the graph is a valid SPN.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.nodes.len();

        if !self.acyclic {
            let mut ordered = vec![false; n];
            for id in &self.order {
                ordered[id.0] = true;
            }
            for i in 0..n {
                if !ordered[i] {
                    violations.push(Violation::Cycle { node: NodeId(i) });
                }
            }
        }

        let mut reachable = vec![false; n];
        let mut stack = vec![self.root.0];
        reachable[self.root.0] = true;
        while let Some(i) = stack.pop() {
            for c in self.nodes[i].children() {
                if !reachable[c.0] {
                    reachable[c.0] = true;
                    stack.push(c.0);
                }
            }
        }
        for i in 0..n {
            if !reachable[i] {
                violations.push(Violation::Unreachable { node: NodeId(i) });
            }
        }

        for (i, node) in self.nodes.iter().enumerate() {
            match node {
                Node::Sum { children, .. } => {
                    let first = self.scope_ids[children[0].0];
                    if first == usize::MAX {
                        continue; // on a cycle, already reported
                    }
                    for c in &children[1..] {
                        let sid = self.scope_ids[c.0];
                        if sid != usize::MAX && sid != first {
                            violations
                                .push(Violation::IncompleteSum { node: NodeId(i), child: *c });
                        }
                    }
                }
                Node::Product { children } => {
                    let mut seen = Scope::empty(self.num_variables);
                    for c in children {
                        let sid = self.scope_ids[c.0];
                        if sid == usize::MAX {
                            continue;
                        }
                        let scope = &self.scopes[sid];
                        if seen.intersects(scope) {
                            violations
                                .push(Violation::OverlappingProduct { node: NodeId(i), child: *c });
                        }
                        seen.union_with(scope);
                    }
                }
                Node::Leaf { .. } => {}
            }
        }

        ValidationReport { violations }
    }
}

/// Incremental constructor. Children must exist before their parents, which
/// makes cycles unrepresentable; graphs read from files go through
/// [`SpnGraph::from_parts`], which tolerates them.
pub struct SpnBuilder {
    num_variables: usize,
    nodes: Vec<Node>,
    leaf_cache: HashMap<(usize, Polarity), NodeId>,
}

impl SpnBuilder {
    pub fn new(num_variables: usize) -> Self {
        SpnBuilder { num_variables, nodes: Vec::new(), leaf_cache: HashMap::new() }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Indicator leaf for (variable, polarity). Leaves are deduplicated.
    pub fn leaf(&mut self, variable: usize, polarity: Polarity) -> Result<NodeId, BuildError> {
        if variable >= self.num_variables {
            return Err(BuildError::VariableOutOfRange {
                node: self.nodes.len(),
                variable,
                num_variables: self.num_variables,
            });
        }
        if let Some(id) = self.leaf_cache.get(&(variable, polarity)) {
            return Ok(*id);
        }
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node::Leaf { variable, polarity });
        self.leaf_cache.insert((variable, polarity), id);
        Ok(id)
    }

    pub fn sum(
        &mut self,
        children: impl IntoIterator<Item = (NodeId, f64)>,
    ) -> Result<NodeId, BuildError> {
        let id = NodeId(self.nodes.len());
        let mut cs = Vec::new();
        let mut ws = Vec::new();
        for (c, w) in children {
            if c.0 >= self.nodes.len() {
                return Err(BuildError::ChildOutOfRange {
                    node: id.0,
                    child: c.0,
                    count: self.nodes.len(),
                });
            }
            if !w.is_finite() || w < 0.0 {
                return Err(BuildError::InvalidWeight { node: id.0, index: cs.len(), weight: w });
            }
            cs.push(c);
            ws.push(w);
        }
        if cs.is_empty() {
            return Err(BuildError::EmptySum(id.0));
        }
        self.nodes.push(Node::Sum { children: cs, weights: ws });
        Ok(id)
    }

    pub fn product(
        &mut self,
        children: impl IntoIterator<Item = NodeId>,
    ) -> Result<NodeId, BuildError> {
        let id = NodeId(self.nodes.len());
        let cs: Vec<NodeId> = children.into_iter().collect();
        if cs.is_empty() {
            return Err(BuildError::EmptyProduct(id.0));
        }
        for c in &cs {
            if c.0 >= self.nodes.len() {
                return Err(BuildError::ChildOutOfRange {
                    node: id.0,
                    child: c.0,
                    count: self.nodes.len(),
                });
            }
        }
        self.nodes.push(Node::Product { children: cs });
        Ok(id)
    }

    pub fn build(self, root: NodeId) -> Result<SpnGraph, BuildError> {
        SpnGraph::from_parts(self.nodes, root, self.num_variables)
    }
}
