//! Completing the base coloring with fresh colors and the final repair loop.
//!
//! After phase 2 the uncolored edges form a low-degree subgraph; they get a
//! disjoint block of fresh colors, which keeps the high pairs distinguished
//! (their phase-2 sets only grow, inside color ranges nobody else uses).
//! What can still collide are adjacent low pairs, and those are exactly the
//! endpoints of edges of the low-induced subgraph H. The repair loop picks a
//! pivot vertex from the offending pairs, strips its H-edges, rebuilds them
//! from per-edge color lists, and accepts the attempt only when the set of
//! offending pairs strictly shrinks and the pivot is fully resolved. Only
//! H-edges are ever recolored, so high-vertex color sets never move again.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::coloring::{
    proper_edge_coloring, Color, ColorSet, ColoringError, Palette, PartialEdgeColoring,
};
use crate::graph::{DegreeClassification, EdgeId, VertexId};

use super::{PipelineError, PipelineParams};

/// Colors every unused edge of `sigma2` with one of `fresh` colors stacked
/// on top of the existing palette. The unused subgraph is edge-colored
/// independently, so the result is proper as long as `fresh` covers its
/// Vizing bound; otherwise `PaletteTooSmall` comes back.
pub fn finish_base_coloring(
    sigma2: &PartialEdgeColoring,
    fresh: u32,
) -> Result<PartialEdgeColoring, ColoringError> {
    let base = sigma2.palette().size();
    let mut c = sigma2.clone();
    c.widen_palette(Palette::new(base + fresh));
    if sigma2.is_total() {
        return Ok(c);
    }
    let (unused, map) = sigma2.unused_graph();
    if unused.max_degree() <= 1 {
        // A matching needs just one fresh color, below the engine's Δ+μ gate.
        if fresh < 1 {
            return Err(ColoringError::PaletteTooSmall {
                palette: fresh,
                required: 1,
                max_degree: unused.max_degree(),
                multiplicity: unused.max_multiplicity(),
            });
        }
        for &orig in &map {
            c.set(orig, base + 1);
        }
        debug_assert!(c.is_total());
        return Ok(c);
    }
    let unused = Arc::new(unused);
    let filled = proper_edge_coloring(&unused, fresh)?;
    for (idx, &orig) in map.iter().enumerate() {
        let shifted = base + filled.color(EdgeId(idx as u32)).expect("filled is total");
        c.set(orig, shifted);
    }
    debug_assert!(c.is_total());
    debug_assert!(c.verify_proper().is_empty());
    Ok(c)
}

/// Adjacent equal-degree pairs with identical color sets, normalized and
/// sorted. Only endpoints of H-edges can qualify: high pairs are assumed
/// distinguished by earlier stages, and a low vertex next to a high one
/// never matches its degree.
pub fn bad_pairs(
    c: &PartialEdgeColoring,
    classes: &DegreeClassification,
) -> Vec<(VertexId, VertexId)> {
    debug_assert!(c.is_total());
    let g = c.graph();
    let mut pairs = Vec::new();
    for e in g.edges() {
        if classes.edge_in_h(e).is_none() {
            continue;
        }
        let (u, v) = g.endpoints(e);
        if g.degree(u) != g.degree(v) {
            continue;
        }
        if c.color_set(u) == c.color_set(v) {
            pairs.push((u.min(v), u.max(v)));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// Builds one color list per H-edge at the pivot `u`, each of size exactly
/// deg_H(u) + β, taking the smallest palette colors that are (a) absent at
/// both endpoints and (b) not the unique color separating some neighbor of
/// the far endpoint from it. Rule (b) is what stops a repaired edge from
/// accidentally equalizing a previously distinguished pair.
pub fn build_repair_lists(
    c: &PartialEdgeColoring,
    u: VertexId,
    classes: &DegreeClassification,
    params: &PipelineParams,
) -> Result<Vec<Vec<Color>>, PipelineError> {
    let g = c.graph();
    let h_edges: Vec<EdgeId> = g
        .incident_edges(u)
        .iter()
        .copied()
        .filter(|&e| classes.edge_in_h(e).is_some())
        .collect();
    let r = h_edges.len() as u32;
    assert!(r >= 2, "pivot must have at least two H-edges");
    for &e in &h_edges {
        assert!(c.color(e).is_none(), "H-edges at the pivot must be uncolored");
    }

    let want = (r + params.list_slack) as usize;
    let palette = c.palette();
    let s_u = c.color_set(u);
    let mut lists = Vec::with_capacity(h_edges.len());
    for &e in &h_edges {
        let v = g.other_endpoint(e, u);
        let s_v = c.color_set(v);
        let mut forbidden = ColorSet::empty(palette);
        for &f in g.incident_edges(v) {
            let w = g.other_endpoint(f, v);
            if w == u {
                continue;
            }
            let diff = c.color_set(w).difference(&s_v);
            if diff.len() == 1 {
                forbidden.insert(diff[0]);
            }
        }
        let mut list = Vec::with_capacity(want);
        for x in palette.colors() {
            if s_u.contains(x) || s_v.contains(x) || forbidden.contains(x) {
                continue;
            }
            list.push(x);
            if list.len() == want {
                break;
            }
        }
        if list.len() < want {
            return Err(PipelineError::ListInfeasible {
                vertex: u,
                edge: e,
                needed: want as u32,
                found: list.len() as u32,
            });
        }
        lists.push(list);
    }
    Ok(lists)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RepairStats {
    /// Accepted pivot iterations.
    pub iterations: u32,
    /// Completions sampled across all iterations, accepted or not.
    pub completions_sampled: u32,
    /// Offending pairs before the loop started.
    pub initial_bad_pairs: u32,
}

/// Repairs every indistinguishable adjacent pair of a total proper coloring
/// by rebuilding pivots' H-edges from list completions until none remain.
///
/// Requires the high pairs to be already distinguished and H to have no
/// isolated edges (so every offending pair offers a pivot with deg_H ≥ 2).
/// Each accepted iteration strictly decreases the number of offending
/// pairs, so the loop runs at most `initial_bad_pairs` times.
pub fn step3_repair<R: Rng>(
    c: &PartialEdgeColoring,
    classes: &DegreeClassification,
    params: &PipelineParams,
    rng: &mut R,
) -> Result<(PartialEdgeColoring, RepairStats), PipelineError> {
    assert!(c.is_total(), "repair starts from a total coloring");
    let g = c.graph().clone();
    let mut current = c.clone();
    let target = g.max_degree() + params.list_slack;
    if current.palette().size() < target {
        current.widen_palette(Palette::new(target));
    }

    let mut bad = bad_pairs(&current, classes);
    let mut stats = RepairStats {
        initial_bad_pairs: bad.len() as u32,
        ..RepairStats::default()
    };

    while !bad.is_empty() {
        assert!(
            stats.iterations <= stats.initial_bad_pairs,
            "offending pairs must strictly decrease"
        );
        let u = pick_pivot(&bad, classes);
        let h_edges: Vec<EdgeId> = g
            .incident_edges(u)
            .iter()
            .copied()
            .filter(|&e| classes.edge_in_h(e).is_some())
            .collect();

        let mut stripped = current.clone();
        for &e in &h_edges {
            stripped.clear(e);
        }
        let lists = build_repair_lists(&stripped, u, classes, params)?;

        let before: HashSet<(VertexId, VertexId)> = bad.iter().copied().collect();
        let mut accepted = false;
        for _ in 0..params.max_attempts {
            stats.completions_sampled += 1;
            let Some(trial) = sample_completion(&stripped, &h_edges, &lists, rng) else {
                continue;
            };
            let after = bad_pairs(&trial, classes);
            if after.iter().any(|&(x, y)| x == u || y == u) {
                continue;
            }
            if !after.iter().all(|p| before.contains(p)) {
                continue;
            }
            // The pivot sat in at least one offending pair, so the subset
            // relation plus its resolution means a strict decrease.
            debug_assert!(after.len() < bad.len());
            current = trial;
            bad = after;
            accepted = true;
            stats.iterations += 1;
            break;
        }
        if !accepted {
            return Err(PipelineError::RepairStalled {
                pivot: u,
                attempts: params.max_attempts,
            });
        }
    }
    Ok((current, stats))
}

/// The offending-pair vertex with the most H-edges, ties to the smallest id.
fn pick_pivot(bad: &[(VertexId, VertexId)], classes: &DegreeClassification) -> VertexId {
    let mut best: Option<(u32, VertexId)> = None;
    for &(a, b) in bad {
        for v in [a, b] {
            let d = classes.h_degree(v);
            let better = match best {
                None => true,
                Some((bd, bv)) => d > bd || (d == bd && v < bv),
            };
            if better {
                best = Some((d, v));
            }
        }
    }
    let (d, v) = best.expect("called with offending pairs present");
    assert!(d >= 2, "isolated-edge-free H guarantees a pivot with deg_H ≥ 2");
    v
}

/// One random-order greedy completion: shuffle the stripped edges, give each
/// a uniformly chosen list color still available at both endpoints. Returns
/// None on a dead end (practically impossible given the list slack, but the
/// caller just resamples).
fn sample_completion<R: Rng>(
    stripped: &PartialEdgeColoring,
    h_edges: &[EdgeId],
    lists: &[Vec<Color>],
    rng: &mut R,
) -> Option<PartialEdgeColoring> {
    let mut order: Vec<usize> = (0..h_edges.len()).collect();
    order.shuffle(rng);
    let mut trial = stripped.clone();
    for &i in &order {
        let e = h_edges[i];
        let avail = trial.available_colors(e).expect("stripped edge is uncolored");
        let candidates: Vec<Color> =
            lists[i].iter().copied().filter(|&x| avail.contains(x)).collect();
        let &x = candidates.choose(rng)?;
        trial.set(e, x);
    }
    Some(trial)
}
