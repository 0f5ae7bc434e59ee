//! Metric graphs: edges with lengths glued at nodes, leaves carrying
//! Dirichlet or Neumann conditions, plus the standard network presets.
//!
//! Edge orientation is data, not convention: each edge fixes where its
//! coordinate origin x = 0 sits, and the presets reproduce the layouts whose
//! junction matrices the rest of the crate is tested against entry by entry.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

/// Boundary condition at a leaf endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LeafBc {
    /// Field value vanishes at the leaf.
    Dirichlet,
    /// Normal derivative vanishes at the leaf.
    Neumann,
}

/// One end of an edge: either glued to an internal node or a free leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Node(usize),
    Leaf(LeafBc),
}

/// A single edge. The coordinate runs from `start` (x = 0) to `end`
/// (x = length); natural units with c = ħ = 1 throughout.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeSpec {
    pub id: String,
    pub start: Endpoint,
    pub end: Endpoint,
    pub length: f64,
}

/// A connected network of edges. Immutable after construction; all
/// operations on it are pure.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricGraph {
    nodes: usize,
    edges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GraphError {
    TooFewEdges { needed: usize, got: usize },
    NonPositiveLength { index: usize },
}

impl core::fmt::Display for GraphError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GraphError::TooFewEdges { needed, got } => {
                write!(f, "at least {needed} edges required, got {got}")
            }
            GraphError::NonPositiveLength { index } => {
                write!(f, "edge {index} has non-positive length")
            }
        }
    }
}

/// A violated structural invariant, reported by [`MetricGraph::validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NoEdges,
    NonPositiveLength { edge: String },
    UnknownNode { edge: String, node: usize },
    IsolatedNode { node: usize },
    NotConnected,
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Violation::NoEdges => write!(f, "graph has no edges"),
            Violation::NonPositiveLength { edge } => {
                write!(f, "non-positive length on edge {edge}")
            }
            Violation::UnknownNode { edge, node } => {
                write!(f, "edge {edge} references unknown node {node}")
            }
            Violation::IsolatedNode { node } => {
                write!(f, "node {node} has degree 0")
            }
            Violation::NotConnected => write!(f, "not connected"),
        }
    }
}

impl MetricGraph {
    /// Assemble a graph from raw parts. Structural invariants are *not*
    /// enforced here; call [`MetricGraph::validate`].
    pub fn new(nodes: usize, edges: Vec<EdgeSpec>) -> MetricGraph {
        MetricGraph { nodes, edges }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[EdgeSpec] {
        &self.edges
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn min_length(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| e.length)
            .fold(f64::INFINITY, f64::min)
    }

    /// Copy of the graph with edge `index` rescaled to `length` (used by
    /// finite-difference forces).
    pub fn with_edge_length(&self, index: usize, length: f64) -> MetricGraph {
        let mut g = self.clone();
        g.edges[index].length = length;
        g
    }

    /// Edge index by id.
    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Check every structural invariant; an empty report means the graph is
    /// well-posed. Violations are data, not failures.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.edges.is_empty() {
            out.push(Violation::NoEdges);
            return out;
        }
        for e in &self.edges {
            if !(e.length > 0.0) || !e.length.is_finite() {
                out.push(Violation::NonPositiveLength { edge: e.id.clone() });
            }
            for ep in [&e.start, &e.end] {
                if let Endpoint::Node(n) = ep {
                    if *n >= self.nodes {
                        out.push(Violation::UnknownNode {
                            edge: e.id.clone(),
                            node: *n,
                        });
                        return out; // degree/connectivity below assume valid refs
                    }
                }
            }
        }
        let mut degree = alloc::vec![0usize; self.nodes];
        for e in &self.edges {
            for ep in [&e.start, &e.end] {
                if let Endpoint::Node(n) = ep {
                    degree[*n] += 1;
                }
            }
        }
        for (node, &d) in degree.iter().enumerate() {
            if d == 0 {
                out.push(Violation::IsolatedNode { node });
            }
        }
        if !self.is_connected() {
            out.push(Violation::NotConnected);
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Union of edges and nodes connected? Each leaf endpoint counts as its
    /// own pendant vertex.
    fn is_connected(&self) -> bool {
        // vertices: 0..nodes are internal nodes, then one per leaf endpoint
        let mut parent: Vec<usize> = (0..self.nodes + 2 * self.edges.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        fn union(parent: &mut [usize], a: usize, b: usize) {
            let ra = find(parent, a);
            let rb = find(parent, b);
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut used = alloc::vec![false; parent.len()];
        for (i, e) in self.edges.iter().enumerate() {
            let va = match e.start {
                Endpoint::Node(n) => n,
                Endpoint::Leaf(_) => self.nodes + 2 * i,
            };
            let vb = match e.end {
                Endpoint::Node(n) => n,
                Endpoint::Leaf(_) => self.nodes + 2 * i + 1,
            };
            used[va] = true;
            used[vb] = true;
            union(&mut parent, va, vb);
        }
        for n in 0..self.nodes {
            used[n] = true; // isolated nodes are reported separately
        }
        let mut root = None;
        for v in 0..parent.len() {
            if !used[v] {
                continue;
            }
            let r = find(&mut parent, v);
            match root {
                None => root = Some(r),
                Some(r0) if r0 != r => return false,
                _ => {}
            }
        }
        true
    }

    /// Unknown count U = Σ (2 − #leaf endpoints) and constraint count
    /// C = Σ node degrees; the two always balance, which is what makes the
    /// junction matrix square.
    pub fn counting_balance(&self) -> (usize, usize) {
        let mut unknowns = 0usize;
        let mut constraints = 0usize;
        for e in &self.edges {
            let leaves = [&e.start, &e.end]
                .iter()
                .filter(|ep| matches!(ep, Endpoint::Leaf(_)))
                .count();
            unknowns += 2 - leaves;
            for ep in [&e.start, &e.end] {
                if matches!(ep, Endpoint::Node(_)) {
                    constraints += 1;
                }
            }
        }
        (unknowns, constraints)
    }

    /// `Some((lengths, bc))` when the graph is a star: every edge runs from
    /// one common internal node to a leaf, with the same condition on every
    /// leaf. This is the shape the closed-form engines accept.
    pub fn as_uniform_star(&self) -> Option<(Vec<f64>, LeafBc)> {
        if self.nodes != 1 || self.edges.len() < 2 {
            return None;
        }
        let mut bc = None;
        let mut lengths = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let leaf = match (&e.start, &e.end) {
                (Endpoint::Node(0), Endpoint::Leaf(b)) => *b,
                (Endpoint::Leaf(b), Endpoint::Node(0)) => *b,
                _ => return None,
            };
            match bc {
                None => bc = Some(leaf),
                Some(b) if b != leaf => return None,
                _ => {}
            }
            lengths.push(e.length);
        }
        Some((lengths, bc?))
    }

    // ---- presets ----

    /// `n >= 2` edges joined at one node (x = 0 there), leaf with `bc` at the
    /// far end of each edge.
    pub fn star(lengths: &[f64], bc: LeafBc) -> Result<MetricGraph, GraphError> {
        if lengths.len() < 2 {
            return Err(GraphError::TooFewEdges {
                needed: 2,
                got: lengths.len(),
            });
        }
        check_lengths(lengths)?;
        let edges = lengths
            .iter()
            .enumerate()
            .map(|(i, &len)| EdgeSpec {
                id: format!("E{}", i + 1),
                start: Endpoint::Node(0),
                end: Endpoint::Leaf(bc),
                length: len,
            })
            .collect();
        Ok(MetricGraph { nodes: 1, edges })
    }

    /// Five edges, two nodes: E1, E2 from node A (x = 0) out to leaves,
    /// E3 from node A to node B, E4, E5 from leaves (x = 0) into node B.
    pub fn tree5(lengths: &[f64; 5], bc: LeafBc) -> Result<MetricGraph, GraphError> {
        check_lengths(lengths)?;
        let mk = |i: usize, start, end| EdgeSpec {
            id: format!("E{}", i + 1),
            start,
            end,
            length: lengths[i],
        };
        let edges = alloc::vec![
            mk(0, Endpoint::Node(0), Endpoint::Leaf(bc)),
            mk(1, Endpoint::Node(0), Endpoint::Leaf(bc)),
            mk(2, Endpoint::Node(0), Endpoint::Node(1)),
            mk(3, Endpoint::Leaf(bc), Endpoint::Node(1)),
            mk(4, Endpoint::Leaf(bc), Endpoint::Node(1)),
        ];
        Ok(MetricGraph { nodes: 2, edges })
    }

    /// Four edges, two nodes, one loop: E1 from node A out to a leaf, E2 and
    /// E3 both from node A to node B, E4 from a leaf into node B.
    pub fn loop4(lengths: &[f64; 4], bc: LeafBc) -> Result<MetricGraph, GraphError> {
        check_lengths(lengths)?;
        let mk = |i: usize, start, end| EdgeSpec {
            id: format!("E{}", i + 1),
            start,
            end,
            length: lengths[i],
        };
        let edges = alloc::vec![
            mk(0, Endpoint::Node(0), Endpoint::Leaf(bc)),
            mk(1, Endpoint::Node(0), Endpoint::Node(1)),
            mk(2, Endpoint::Node(0), Endpoint::Node(1)),
            mk(3, Endpoint::Leaf(bc), Endpoint::Node(1)),
        ];
        Ok(MetricGraph { nodes: 2, edges })
    }

    /// Single edge with leaves at both ends.
    pub fn strip(length: f64, bc: LeafBc) -> Result<MetricGraph, GraphError> {
        check_lengths(&[length])?;
        Ok(MetricGraph {
            nodes: 0,
            edges: alloc::vec![EdgeSpec {
                id: String::from("E1"),
                start: Endpoint::Leaf(bc),
                end: Endpoint::Leaf(bc),
                length,
            }],
        })
    }

    /// Single self-loop edge: both ends on one node, spectrum k = 2πm/L with
    /// multiplicity two.
    pub fn circle(length: f64) -> Result<MetricGraph, GraphError> {
        check_lengths(&[length])?;
        Ok(MetricGraph {
            nodes: 1,
            edges: alloc::vec![EdgeSpec {
                id: String::from("E1"),
                start: Endpoint::Node(0),
                end: Endpoint::Node(0),
                length,
            }],
        })
    }
}

fn check_lengths(lengths: &[f64]) -> Result<(), GraphError> {
    for (index, &len) in lengths.iter().enumerate() {
        if !(len > 0.0) || !len.is_finite() {
            return Err(GraphError::NonPositiveLength { index });
        }
    }
    Ok(())
}
