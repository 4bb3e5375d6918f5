//! The two randomized uncoloring phases and their acceptance checks.
//!
//! Phase 1 uncolors each edge outside the low-induced subgraph independently
//! with probability a/Δ, then restores every uncolored edge incident to a
//! vertex that lost more than ρ colors. The restore pass is simultaneous:
//! unused degrees are measured once, then all affected edges flip back at
//! the same time, so the recovered set does not depend on processing order.
//!
//! Phase 2 gives each vertex of L (high vertices left with fewer than ℓ
//! unused edges) exactly s freshly uncolored edges, drawn uniformly from its
//! colored edges whose other endpoint is outside L. Keeping both-L edges
//! ineligible means no edge can be picked by two vertices, so the "exactly
//! s" claim needs no collision handling.
//!
//! Neither phase guarantees the distinguishing properties on its own; the
//! analysis only promises them with positive probability. The caller runs
//! `phase1_properties_hold` / `phase2_properties_hold` and resamples until
//! the returned violation list is empty.

use std::collections::HashSet;

use rand::Rng;

use crate::coloring::{ColorSet, PartialEdgeColoring};
use crate::graph::{classify_by_degree, EdgeId, VertexId};

use super::{PipelineError, PipelineParams};

/// State after a randomized phase: the partial coloring plus the vertex sets
/// the analysis tracks. Vertex-indexed vectors follow the coloring's graph.
#[derive(Clone, Debug)]
pub struct PhaseOutcome {
    pub coloring: PartialEdgeColoring,
    /// Phase-1 uncolored incident edge counts per vertex, measured before
    /// recovery. These are the |UC_v| the threshold sets are defined on.
    pub uc: Vec<u32>,
    /// R: vertices whose pre-recovery count exceeded the recovery threshold.
    pub recovered: Vec<bool>,
    /// Q: vertices with pre-recovery count below the sparse threshold.
    pub sparse: Vec<bool>,
    /// T: vertices with a sampled edge whose other endpoint recovered.
    pub touched: Vec<bool>,
    /// L: high vertices whose unused degree after recovery fell below ℓ.
    pub low_unused: Vec<bool>,
    /// Low-degree vertices, i.e. the vertex set of the low-induced subgraph.
    pub is_low: Vec<bool>,
    /// Edges uncolored by phase 2, listed at both endpoints. All empty on a
    /// phase-1 outcome.
    pub uc_prime: Vec<Vec<EdgeId>>,
    /// Seed and attempt number, filled in by the resample driver.
    pub seed: u64,
    pub attempt: u32,
}

impl PhaseOutcome {
    pub fn low_unused_vertices(&self) -> Vec<VertexId> {
        self.low_unused
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(VertexId(i as u32)))
            .collect()
    }

    /// Sizes of (R, Q, T, L) for reporting.
    pub fn set_sizes(&self) -> (usize, usize, usize, usize) {
        let count = |v: &[bool]| v.iter().filter(|&&b| b).count();
        (
            count(&self.recovered),
            count(&self.sparse),
            count(&self.touched),
            count(&self.low_unused),
        )
    }
}

pub fn phase1<R: Rng>(
    c0: &PartialEdgeColoring,
    params: &PipelineParams,
    rng: &mut R,
) -> PhaseOutcome {
    assert!(c0.is_total(), "phase 1 starts from a total coloring");
    let g = c0.graph().clone();
    let n = g.vertex_count() as usize;
    let delta = g.max_degree();
    let classes = classify_by_degree(&g, params.degree_split.scale(delta as u64));
    let p = params.uncolor_probability(delta);

    let mut sigma = c0.clone();
    let mut sampled: Vec<EdgeId> = Vec::new();
    for e in g.edges() {
        if classes.edge_in_h(e).is_some() {
            continue;
        }
        if rng.gen::<f64>() < p {
            sigma.clear(e);
            sampled.push(e);
        }
    }

    let mut uc = vec![0u32; n];
    for &e in &sampled {
        let (u, v) = g.endpoints(e);
        uc[u.index()] += 1;
        uc[v.index()] += 1;
    }
    let recovered: Vec<bool> = uc.iter().map(|&c| c > params.recovery_threshold).collect();

    // Simultaneous recovery. Restoring the original color can never clash:
    // every edge at the shared endpoint either still wears its c0 color
    // (distinct from this one, c0 was proper) or is unused.
    let mut touched = vec![false; n];
    for &e in &sampled {
        let (u, v) = g.endpoints(e);
        if recovered[u.index()] || recovered[v.index()] {
            sigma.set(e, c0.color(e).expect("c0 is total"));
        }
        if recovered[v.index()] {
            touched[u.index()] = true;
        }
        if recovered[u.index()] {
            touched[v.index()] = true;
        }
    }

    let sparse: Vec<bool> = uc.iter().map(|&c| c < params.sparse_threshold).collect();
    let is_low: Vec<bool> = (0..n as u32).map(|i| classes.is_low(VertexId(i))).collect();
    let low_unused: Vec<bool> = (0..n as u32)
        .map(|i| {
            let v = VertexId(i);
            !is_low[v.index()] && sigma.unused_degree(v) < params.low_unused_threshold
        })
        .collect();

    debug_assert!(sigma.verify_proper().is_empty());
    debug_assert!(g
        .vertices()
        .all(|v| sigma.unused_degree(v) <= params.recovery_threshold));
    debug_assert!(
        (0..n).all(|i| !low_unused[i] || recovered[i] || sparse[i] || touched[i]),
        "L must sit inside R ∪ Q ∪ T"
    );

    PhaseOutcome {
        coloring: sigma,
        uc,
        recovered,
        sparse,
        touched,
        low_unused,
        is_low,
        uc_prime: vec![Vec::new(); n],
        seed: 0,
        attempt: 0,
    }
}

/// Checks the two phase-1 acceptance properties and describes every failure:
/// (a) no high vertex sees more than cap·Δ distinct L-neighbors, and (b)
/// every adjacent equal-degree high pair with a member outside L has color
/// sets differing in at least d places.
pub fn phase1_properties_hold(out: &PhaseOutcome, params: &PipelineParams) -> Vec<String> {
    let g = out.coloring.graph();
    let delta = g.max_degree() as u64;
    let mut violations = Vec::new();

    let mut l_neighbors: Vec<VertexId> = Vec::new();
    for v in g.vertices() {
        if out.is_low[v.index()] {
            continue;
        }
        l_neighbors.clear();
        for &e in g.incident_edges(v) {
            let w = g.other_endpoint(e, v);
            if out.low_unused[w.index()] {
                l_neighbors.push(w);
            }
        }
        l_neighbors.sort_unstable();
        l_neighbors.dedup();
        let count = l_neighbors.len() as u64;
        if !params.neighborhood_cap.scale(delta).at_least(count) {
            violations.push(format!(
                "vertex {} has {count} neighbors in L, above the cap",
                v.0
            ));
        }
    }

    let sets: Vec<ColorSet> = g.vertices().map(|v| out.coloring.color_set(v)).collect();
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    for e in g.edges() {
        let (u, v) = g.endpoints(e);
        if out.is_low[u.index()] || out.is_low[v.index()] {
            continue;
        }
        if g.degree(u) != g.degree(v) {
            continue;
        }
        if out.low_unused[u.index()] && out.low_unused[v.index()] {
            continue; // both in L: phase 2's job
        }
        if !seen.insert((u.0.min(v.0), u.0.max(v.0))) {
            continue;
        }
        let diff = sets[u.index()].symmetric_difference_len(&sets[v.index()]);
        if diff < params.min_symdiff {
            violations.push(format!(
                "adjacent pair ({}, {}) has symmetric difference {diff} < {}",
                u.0, v.0, params.min_symdiff
            ));
        }
    }
    violations
}

pub fn phase2<R: Rng>(
    out: &PhaseOutcome,
    params: &PipelineParams,
    rng: &mut R,
) -> Result<PhaseOutcome, PipelineError> {
    let g = out.coloring.graph().clone();
    let s = params.phase2_uncolor_count as usize;
    let mut sigma = out.coloring.clone();
    let mut uc_prime: Vec<Vec<EdgeId>> = vec![Vec::new(); g.vertex_count() as usize];

    for u in out.low_unused_vertices() {
        // Edges picked for other L vertices never touch u (they would need a
        // second L endpoint besides their picker), so eligibility computed
        // against the running coloring equals eligibility against σ1.
        let eligible: Vec<EdgeId> = g
            .incident_edges(u)
            .iter()
            .copied()
            .filter(|&e| sigma.color(e).is_some())
            .filter(|&e| !out.low_unused[g.other_endpoint(e, u).index()])
            .collect();
        if eligible.len() < s {
            return Err(PipelineError::InsufficientEligibleEdges {
                vertex: u,
                available: eligible.len() as u32,
                needed: params.phase2_uncolor_count,
            });
        }
        for i in rand::seq::index::sample(rng, eligible.len(), s) {
            let e = eligible[i];
            sigma.clear(e);
            let w = g.other_endpoint(e, u);
            uc_prime[u.index()].push(e);
            uc_prime[w.index()].push(e);
        }
    }

    debug_assert!(out
        .low_unused_vertices()
        .iter()
        .all(|&u| uc_prime[u.index()].len() == s));

    Ok(PhaseOutcome {
        coloring: sigma,
        uc: out.uc.clone(),
        recovered: out.recovered.clone(),
        sparse: out.sparse.clone(),
        touched: out.touched.clone(),
        low_unused: out.low_unused.clone(),
        is_low: out.is_low.clone(),
        uc_prime,
        seed: out.seed,
        attempt: out.attempt,
    })
}

/// Checks the two phase-2 acceptance properties: (a) no high vertex outside
/// L lost more than s−1 edges to phase 2, and (b) every adjacent
/// equal-degree high pair now has distinct color sets. (b) re-checks pairs
/// that phase-1 acceptance already covered; the direct check is cheap and
/// catches any erosion caused by the new uncoloring.
pub fn phase2_properties_hold(out: &PhaseOutcome, params: &PipelineParams) -> Vec<String> {
    let g = out.coloring.graph();
    let mut violations = Vec::new();

    for v in g.vertices() {
        if out.is_low[v.index()] || out.low_unused[v.index()] {
            continue;
        }
        let lost = out.uc_prime[v.index()].len() as u32;
        if lost >= params.phase2_uncolor_count {
            violations.push(format!(
                "vertex {} outside L lost {lost} edges in phase 2",
                v.0
            ));
        }
    }

    let sets: Vec<ColorSet> = g.vertices().map(|v| out.coloring.color_set(v)).collect();
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    for e in g.edges() {
        let (u, v) = g.endpoints(e);
        if out.is_low[u.index()] || out.is_low[v.index()] {
            continue;
        }
        if g.degree(u) != g.degree(v) || !seen.insert((u.0.min(v.0), u.0.max(v.0))) {
            continue;
        }
        if sets[u.index()] == sets[v.index()] {
            violations.push(format!(
                "adjacent pair ({}, {}) has identical color sets after phase 2",
                u.0, v.0
            ));
        }
    }
    violations
}
