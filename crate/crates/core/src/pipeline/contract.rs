//! Step 1: contracting isolated low-low edges and lifting colorings back.
//!
//! An edge is contracted when both endpoints are low degree and neither has
//! any other low neighbor, i.e. it is an isolated edge of the low-induced
//! subgraph. Contracting all of them at once is well defined because such
//! edges are pairwise vertex-disjoint. The merged graph `G'` keeps the same
//! max degree, acquires at most double edges (one merged vertex reaching the
//! same high neighbor through both original endpoints), and its low-induced
//! subgraph has no isolated edges left, which is exactly what the repair
//! step later relies on.

use std::sync::Arc;

use crate::coloring::{Color, PartialEdgeColoring};
use crate::graph::{classify_by_degree, EdgeId, MultiGraph, VertexId};

use super::{PipelineError, PipelineParams};

/// One contracted edge: the original edge, its endpoints in the original
/// graph, and the vertex the pair became in the merged graph.
#[derive(Clone, Copy, Debug)]
pub struct Contraction {
    pub original_edge: EdgeId,
    pub endpoints: (VertexId, VertexId),
    pub merged: VertexId,
}

/// How the merged graph maps back onto the original.
#[derive(Clone, Debug)]
pub struct ContractionRecord {
    pub contractions: Vec<Contraction>,
    /// Original vertex -> merged-graph vertex (surjective; contracted pairs
    /// share an image).
    pub vertex_map: Vec<VertexId>,
    /// Merged-graph edge -> the original edge it came from (bijective onto
    /// the non-contracted edges).
    pub edge_origin: Vec<EdgeId>,
}

impl ContractionRecord {
    pub fn is_identity(&self) -> bool {
        self.contractions.is_empty()
    }
}

/// Contracts every eligible edge of `g`.
///
/// Requires `g` simple; eligibility is determined by
/// `params.degree_split` (low means degree strictly below `Δ * split`).
pub fn step1_contract(
    g: &Arc<MultiGraph>,
    params: &PipelineParams,
) -> (Arc<MultiGraph>, ContractionRecord) {
    assert!(g.is_simple(), "contraction expects a simple input graph");
    let split = params.degree_split.scale(g.max_degree() as u64);
    let classes = classify_by_degree(g, split);
    let eligible: Vec<EdgeId> = classes
        .h
        .isolated_edges()
        .iter()
        .map(|&he| classes.h_edge_to_parent[he.index()])
        .collect();

    let mut merged_with: Vec<Option<VertexId>> = vec![None; g.vertex_count() as usize];
    for &e in &eligible {
        let (u, v) = g.endpoints(e);
        merged_with[u.index()] = Some(v);
        merged_with[v.index()] = Some(u);
    }

    // Number merged-graph vertices in original order, skipping the higher
    // endpoint of each contracted pair.
    let mut vertex_map = vec![VertexId(0); g.vertex_count() as usize];
    let mut next = 0u32;
    for v in g.vertices() {
        match merged_with[v.index()] {
            Some(partner) if partner < v => vertex_map[v.index()] = vertex_map[partner.index()],
            _ => {
                vertex_map[v.index()] = VertexId(next);
                next += 1;
            }
        }
    }

    let mut edges = Vec::with_capacity(g.edge_count() as usize);
    let mut edge_origin = Vec::with_capacity(g.edge_count() as usize);
    let mut contractions = Vec::with_capacity(eligible.len());
    let mut skip = vec![false; g.edge_count() as usize];
    for &e in &eligible {
        skip[e.index()] = true;
        let (u, v) = g.endpoints(e);
        contractions.push(Contraction {
            original_edge: e,
            endpoints: (u, v),
            merged: vertex_map[u.index()],
        });
    }
    for e in g.edges() {
        if skip[e.index()] {
            continue;
        }
        let (u, v) = g.endpoints(e);
        edges.push((vertex_map[u.index()].0, vertex_map[v.index()].0));
        edge_origin.push(e);
    }

    let merged = MultiGraph::build(next, &edges, 2)
        .expect("contraction of disjoint low pairs cannot create loops or triple edges");
    (Arc::new(merged), ContractionRecord { contractions, vertex_map, edge_origin })
}

/// Carries a total coloring of the merged graph back to the original graph:
/// every surviving edge keeps its color, and each contracted edge receives
/// the smallest palette color absent at both endpoints.
///
/// When the input is avd on the merged graph, the lift is avd on the
/// original: each merged pair's endpoints only had high neighbors besides
/// each other, and the two endpoints themselves can only share a color set
/// if both have degree 1, which the no-isolated-edge precondition excludes.
pub fn lift_coloring(
    g: &Arc<MultiGraph>,
    record: &ContractionRecord,
    merged_coloring: &PartialEdgeColoring,
) -> Result<PartialEdgeColoring, PipelineError> {
    assert!(merged_coloring.is_total(), "lift expects a total coloring");
    let palette = merged_coloring.palette();
    let mut lifted = PartialEdgeColoring::new(g.clone(), palette);
    for (gp_index, &orig) in record.edge_origin.iter().enumerate() {
        let c = merged_coloring
            .color(EdgeId(gp_index as u32))
            .expect("total coloring has every edge colored");
        lifted.set(orig, c);
    }
    for contraction in &record.contractions {
        let e = contraction.original_edge;
        let free: Option<Color> =
            lifted.available_colors(e).expect("contracted edge unset").iter().next();
        match free {
            Some(c) => lifted.set(e, c),
            None => {
                return Err(PipelineError::NoAvailableColor {
                    edge: e,
                    palette: palette.size(),
                })
            }
        }
    }
    Ok(lifted)
}
