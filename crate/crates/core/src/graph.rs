//! Immutable multigraph with dense vertex/edge ids.
//!
//! Vertices and edges are numbered `0..n` and `0..m`; parallel edges are
//! distinct `EdgeId`s. Loops are always rejected and the edge multiplicity of
//! a vertex pair is capped at construction time (simple graphs use cap 1, the
//! contracted graphs produced by the pipeline use cap 2).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense 0-based vertex index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u32);

/// Dense 0-based edge index. Parallel edges get distinct ids.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Debug for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop rejected: edge {edge} joins vertex v{vertex} to itself")]
    LoopRejected { edge: usize, vertex: u32 },
    #[error("multiplicity exceeded: {count} copies of v{u}-v{v} but cap is {cap}")]
    MultiplicityExceeded { u: u32, v: u32, count: u32, cap: u32 },
    #[error("endpoint v{vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: u32, n: u32 },
}

/// Immutable multigraph. Construct through [`MultiGraph::build`].
#[derive(Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: u32,
    endpoints: Vec<(VertexId, VertexId)>,
    // Incidence lists in CSR layout: edges at v are inc[inc_off[v]..inc_off[v+1]].
    inc_off: Vec<u32>,
    inc: Vec<EdgeId>,
    max_degree: u32,
    max_multiplicity: u32,
}

impl fmt::Debug for MultiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiGraph")
            .field("n", &self.n)
            .field("m", &self.edge_count())
            .field("max_degree", &self.max_degree)
            .field("edges", &self.endpoints)
            .finish()
    }
}

impl MultiGraph {
    /// Builds a graph on `n` vertices from an endpoint list. The position of
    /// each pair in `edges` becomes its `EdgeId`. `multiplicity_cap` bounds
    /// the number of parallel copies any vertex pair may carry.
    pub fn build(
        n: u32,
        edges: &[(u32, u32)],
        multiplicity_cap: u32,
    ) -> Result<Self, GraphError> {
        let mut endpoints = Vec::with_capacity(edges.len());
        for (idx, &(a, b)) in edges.iter().enumerate() {
            if a == b {
                return Err(GraphError::LoopRejected { edge: idx, vertex: a });
            }
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            endpoints.push((VertexId(a), VertexId(b)));
        }

        // Count parallel copies against the cap via a sorted pass so the
        // check stays deterministic and allocation-light.
        let mut norm: Vec<(u32, u32)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        norm.sort_unstable();
        let mut max_multiplicity = 0u32;
        let mut i = 0;
        while i < norm.len() {
            let mut j = i + 1;
            while j < norm.len() && norm[j] == norm[i] {
                j += 1;
            }
            let count = (j - i) as u32;
            if count > multiplicity_cap {
                return Err(GraphError::MultiplicityExceeded {
                    u: norm[i].0,
                    v: norm[i].1,
                    count,
                    cap: multiplicity_cap,
                });
            }
            max_multiplicity = max_multiplicity.max(count);
            i = j;
        }

        // CSR incidence lists.
        let mut deg = vec![0u32; n as usize];
        for &(u, v) in &endpoints {
            deg[u.index()] += 1;
            deg[v.index()] += 1;
        }
        let mut inc_off = Vec::with_capacity(n as usize + 1);
        let mut acc = 0u32;
        inc_off.push(0);
        for &d in &deg {
            acc += d;
            inc_off.push(acc);
        }
        let mut cursor = inc_off.clone();
        let mut inc = vec![EdgeId(0); endpoints.len() * 2];
        for (idx, &(u, v)) in endpoints.iter().enumerate() {
            let e = EdgeId(idx as u32);
            inc[cursor[u.index()] as usize] = e;
            cursor[u.index()] += 1;
            inc[cursor[v.index()] as usize] = e;
            cursor[v.index()] += 1;
        }
        let max_degree = deg.iter().copied().max().unwrap_or(0);

        Ok(MultiGraph { n, endpoints, inc_off, inc, max_degree, max_multiplicity })
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> u32 {
        self.endpoints.len() as u32
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Largest number of parallel copies over all vertex pairs (0 if edgeless).
    pub fn max_multiplicity(&self) -> u32 {
        self.max_multiplicity
    }

    pub fn is_simple(&self) -> bool {
        self.max_multiplicity <= 1
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.endpoints[e.index()]
    }

    /// The endpoint of `e` that is not `v`. Panics if `e` is not incident to `v`.
    pub fn other_endpoint(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.endpoints(e);
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v, "edge {e:?} is not incident to {v:?}");
            a
        }
    }

    pub fn degree(&self, v: VertexId) -> u32 {
        self.inc_off[v.index() + 1] - self.inc_off[v.index()]
    }

    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.inc[self.inc_off[v.index()] as usize..self.inc_off[v.index() + 1] as usize]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edge_count()).map(EdgeId)
    }

    pub fn edge_list(&self) -> &[(VertexId, VertexId)] {
        &self.endpoints
    }

    /// Edges `uv` where both endpoints have degree exactly 1. An avd coloring
    /// cannot exist in their presence: the two endpoint color sets would be
    /// the same singleton.
    pub fn isolated_edges(&self) -> Vec<EdgeId> {
        self.edges()
            .filter(|&e| {
                let (u, v) = self.endpoints(e);
                self.degree(u) == 1 && self.degree(v) == 1
            })
            .collect()
    }
}

/// Exact rational threshold, used for degree cutoffs like `Δ/3` without
/// rounding. Comparisons cross-multiply in 128-bit so they never overflow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "denominator must be positive");
        Fraction { num, den }
    }

    /// The fraction scaled by an integer: `k * num / den`.
    pub fn scale(self, k: u64) -> Self {
        Fraction { num: self.num.saturating_mul(k), den: self.den }
    }

    /// `value < self`, exactly.
    pub fn greater_than(self, value: u64) -> bool {
        (value as u128) * (self.den as u128) < self.num as u128
    }

    /// `value <= self`, exactly.
    pub fn at_least(self, value: u64) -> bool {
        (value as u128) * (self.den as u128) <= self.num as u128
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Split of a graph at a degree threshold: the low side induces the subgraph
/// `H` that the repair step of the pipeline is allowed to recolor.
#[derive(Clone, Debug)]
pub struct DegreeClassification {
    pub threshold: Fraction,
    /// Vertices with degree strictly below the threshold, ascending.
    pub low_vertices: Vec<VertexId>,
    is_low: Vec<bool>,
    /// Induced subgraph on the low vertices. Shares the parent's vertex ids
    /// (high vertices are simply isolated in `h`), so no index translation is
    /// needed when mixing parent and subgraph queries.
    pub h: MultiGraph,
    /// Parent `EdgeId` for each edge of `h`, indexed by the `h` edge id.
    pub h_edge_to_parent: Vec<EdgeId>,
    /// `Some(h_edge)` for parent edges that lie in `h`.
    parent_edge_in_h: Vec<Option<EdgeId>>,
}

impl DegreeClassification {
    /// Membership in `V(H)`: vertices below the degree threshold.
    pub fn is_low(&self, v: VertexId) -> bool {
        self.is_low[v.index()]
    }

    /// Membership in `E(H)`, by parent edge id.
    pub fn edge_in_h(&self, e: EdgeId) -> Option<EdgeId> {
        self.parent_edge_in_h[e.index()]
    }

    /// Degree of `v` inside the induced subgraph (0 for high vertices).
    pub fn h_degree(&self, v: VertexId) -> u32 {
        self.h.degree(v)
    }
}

/// Splits `g` at `threshold`: low vertices are those with `deg(v) < threshold`,
/// and `H` is the subgraph induced by them.
///
/// Classifying the returned `h` again with the same threshold reproduces `h`
/// (every `h` vertex with incident edges is already low).
pub fn classify_by_degree(g: &MultiGraph, threshold: Fraction) -> DegreeClassification {
    let is_low: Vec<bool> = g
        .vertices()
        .map(|v| threshold.greater_than(g.degree(v) as u64))
        .collect();
    let low_vertices: Vec<VertexId> = g.vertices().filter(|v| is_low[v.index()]).collect();

    let mut h_edges: Vec<(u32, u32)> = Vec::new();
    let mut h_edge_to_parent: Vec<EdgeId> = Vec::new();
    let mut parent_edge_in_h: Vec<Option<EdgeId>> = vec![None; g.edge_count() as usize];
    for e in g.edges() {
        let (u, v) = g.endpoints(e);
        if is_low[u.index()] && is_low[v.index()] {
            parent_edge_in_h[e.index()] = Some(EdgeId(h_edges.len() as u32));
            h_edges.push((u.0, v.0));
            h_edge_to_parent.push(e);
        }
    }
    let h = MultiGraph::build(g.vertex_count(), &h_edges, g.max_multiplicity().max(1))
        .expect("induced subgraph reuses validated edges");

    DegreeClassification {
        threshold,
        low_vertices,
        is_low,
        h,
        h_edge_to_parent,
        parent_edge_in_h,
    }
}
