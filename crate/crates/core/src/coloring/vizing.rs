//! Constructive edge coloring within the Vizing bound.
//!
//! `proper_edge_coloring` colors any multigraph with at most `Δ + μ` distinct
//! colors (`μ` = maximum edge multiplicity), which specializes to the classic
//! `Δ + 1` for simple graphs. The algorithm is the fan-rotation scheme of
//! Misra and Gries, extended to parallel edges: fans are sequences of
//! *edges* rather than vertices, and the one configuration that parallel
//! copies can break is detected and sidestepped by retrying with a different
//! free color at the fan tip.
//!
//! Why the retry terminates: a color `d` can only be rejected when the fan
//! tip vertex `w` appears twice in the fan through two parallel `u`-`w`
//! copies and the `c/d` alternating path from `u` ends at `w`. Each rejected
//! `d` pins a distinct parallel copy of `u`-`w` other than the tip edge, so
//! at most `μ - 1` colors can be rejected, while `w` has at least
//! `(Δ + μ) - deg(w) ≥ μ` free colors. Some candidate therefore always
//! finishes the edge or extends the fan, and fans cannot extend forever.

use std::sync::Arc;

use crate::graph::{EdgeId, MultiGraph, VertexId};

use super::{Color, ColoringError, Palette, PartialEdgeColoring};

/// Colors every edge of `g` using colors from `1..=k`.
///
/// Requires `k ≥ Δ + μ` (returns [`ColoringError::PaletteTooSmall`]
/// otherwise) and uses at most `Δ + μ` distinct colors even when `k` is
/// larger.
pub fn proper_edge_coloring(
    g: &Arc<MultiGraph>,
    k: u32,
) -> Result<PartialEdgeColoring, ColoringError> {
    let delta = g.max_degree();
    let mu = g.max_multiplicity();
    let required = (delta + mu).max(1);
    if k < required {
        return Err(ColoringError::PaletteTooSmall {
            palette: k,
            required,
            max_degree: delta,
            multiplicity: mu,
        });
    }

    let mut engine = Engine::new(g, delta + mu);
    for e in g.edges() {
        engine.color_edge(e);
    }

    let mut coloring = PartialEdgeColoring::new(g.clone(), Palette::new(k));
    for e in g.edges() {
        coloring.set(e, engine.color_of[e.index()]);
    }
    debug_assert!(coloring.verify_proper().is_empty());
    Ok(coloring)
}

const NO_EDGE: u32 = u32::MAX;

/// Working state: edge colors plus a per-vertex color-to-edge index so fan
/// construction and alternating-path walks run without scanning incidence
/// lists.
struct Engine<'g> {
    g: &'g MultiGraph,
    k: u32,
    color_of: Vec<Color>, // 0 = uncolored
    by_color: Vec<u32>,   // (v * (k+1) + c) -> edge id, NO_EDGE when free
    fan_pos: Vec<u32>,    // scratch: edge -> position in current fan, NO_EDGE outside
}

impl<'g> Engine<'g> {
    fn new(g: &'g MultiGraph, k: u32) -> Self {
        Engine {
            g,
            k,
            color_of: vec![0; g.edge_count() as usize],
            by_color: vec![NO_EDGE; g.vertex_count() as usize * (k as usize + 1)],
            fan_pos: vec![NO_EDGE; g.edge_count() as usize],
        }
    }

    fn slot(&self, v: VertexId, c: Color) -> usize {
        v.index() * (self.k as usize + 1) + c as usize
    }

    fn edge_with_color(&self, v: VertexId, c: Color) -> Option<EdgeId> {
        match self.by_color[self.slot(v, c)] {
            NO_EDGE => None,
            e => Some(EdgeId(e)),
        }
    }

    fn is_free(&self, v: VertexId, c: Color) -> bool {
        self.by_color[self.slot(v, c)] == NO_EDGE
    }

    fn first_free(&self, v: VertexId) -> Color {
        (1..=self.k)
            .find(|&c| self.is_free(v, c))
            .expect("a vertex always misses a color when k > deg")
    }

    fn assign(&mut self, e: EdgeId, c: Color) {
        debug_assert_eq!(self.color_of[e.index()], 0);
        let (u, v) = self.g.endpoints(e);
        debug_assert!(self.is_free(u, c) && self.is_free(v, c));
        self.color_of[e.index()] = c;
        let (su, sv) = (self.slot(u, c), self.slot(v, c));
        self.by_color[su] = e.0;
        self.by_color[sv] = e.0;
    }

    fn unassign(&mut self, e: EdgeId) {
        let c = self.color_of[e.index()];
        if c == 0 {
            return;
        }
        let (u, v) = self.g.endpoints(e);
        let (su, sv) = (self.slot(u, c), self.slot(v, c));
        self.by_color[su] = NO_EDGE;
        self.by_color[sv] = NO_EDGE;
        self.color_of[e.index()] = 0;
    }

    /// Colors the uncolored edge `e0`, recoloring other edges as needed.
    fn color_edge(&mut self, e0: EdgeId) {
        let (u, w0) = self.g.endpoints(e0);
        // fan[i] = (edge at u, its far endpoint); fan[0] is the uncolored
        // edge and color(fan[i+1]) is free at fan[i]'s endpoint throughout.
        let mut fan: Vec<(EdgeId, VertexId)> = vec![(e0, w0)];
        self.fan_pos[e0.index()] = 0;

        let result = self.run_fan(u, &mut fan);

        for &(e, _) in &fan {
            self.fan_pos[e.index()] = NO_EDGE;
        }
        let (rotate_to, d) = result;
        self.rotate(&fan, rotate_to, d);
    }

    /// Grows the fan until some prefix can be rotated; returns the prefix
    /// end index and the color for its last edge.
    fn run_fan(&mut self, u: VertexId, fan: &mut Vec<(EdgeId, VertexId)>) -> (usize, Color) {
        'grow: loop {
            let tip = fan.last().expect("fan starts non-empty").1;
            for d in 1..=self.k {
                if !self.is_free(tip, d) {
                    continue;
                }
                match self.edge_with_color(u, d) {
                    None => {
                        // d is free at u and at the tip: rotate the whole fan.
                        return (fan.len() - 1, d);
                    }
                    Some(f) if self.fan_pos[f.index()] == NO_EDGE => {
                        let wf = self.g.other_endpoint(f, u);
                        self.fan_pos[f.index()] = fan.len() as u32;
                        fan.push((f, wf));
                        continue 'grow;
                    }
                    Some(f) => {
                        // The d-colored edge at u is fan[x + 1]; by the fan
                        // invariant d is also free at fan[x]'s endpoint.
                        let x = self.fan_pos[f.index()] as usize - 1;
                        let wx = fan[x].1;
                        let c = self.first_free(u);
                        let path = self.alternating_path(u, d, c);
                        if !path.visits.contains(&wx) {
                            // Inverting frees d at u and leaves it free at
                            // wx, and the fan prefix up to x is untouched.
                            self.invert(&path, d, c);
                            return (x, d);
                        } else if tip != wx {
                            // The path ends at wx, so after inversion the
                            // recolored fan edge (now c) is legal at wx and
                            // the tip still misses d.
                            self.invert(&path, d, c);
                            return (fan.len() - 1, d);
                        }
                        // tip == wx: both parallel u-wx copies sit in the
                        // fan and the path reaches wx. Inverting would hand
                        // d to the tip; try another free color instead.
                    }
                }
            }
            panic!("fan ran out of candidate colors: palette below max_degree + multiplicity");
        }
    }

    /// The maximal alternating path from `u` along colors `d, c, d, ...`.
    /// `u` misses `c`, so the walk is uniquely determined and cannot cycle.
    fn alternating_path(&self, u: VertexId, d: Color, c: Color) -> AlternatingPath {
        let mut edges = Vec::new();
        let mut visits = vec![u];
        let mut cur = u;
        let mut want = d;
        while let Some(e) = self.edge_with_color(cur, want) {
            edges.push(e);
            cur = self.g.other_endpoint(e, cur);
            visits.push(cur);
            want = if want == d { c } else { d };
        }
        AlternatingPath { edges, visits }
    }

    /// Swaps colors `c` and `d` along a collected path.
    fn invert(&mut self, path: &AlternatingPath, d: Color, c: Color) {
        let flipped: Vec<(EdgeId, Color)> = path
            .edges
            .iter()
            .map(|&e| (e, c + d - self.color_of[e.index()]))
            .collect();
        for &(e, _) in &flipped {
            self.unassign(e);
        }
        for &(e, new) in &flipped {
            self.assign(e, new);
        }
    }

    /// Shifts each fan edge's color back by one position along the prefix
    /// `fan[0..=idx]` and gives the freed last edge the color `d`.
    fn rotate(&mut self, fan: &[(EdgeId, VertexId)], idx: usize, d: Color) {
        let shifted: Vec<Color> = (0..idx).map(|i| self.color_of[fan[i + 1].0.index()]).collect();
        for &(e, _) in &fan[..=idx] {
            self.unassign(e);
        }
        for (i, &new) in shifted.iter().enumerate() {
            self.assign(fan[i].0, new);
        }
        self.assign(fan[idx].0, d);
    }
}

struct AlternatingPath {
    edges: Vec<EdgeId>,
    visits: Vec<VertexId>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn color_and_check(n: u32, edges: &[(u32, u32)], cap: u32, k: u32) -> PartialEdgeColoring {
        let g = Arc::new(MultiGraph::build(n, edges, cap).unwrap());
        let c = proper_edge_coloring(&g, k).unwrap();
        assert!(c.is_total());
        assert!(c.verify_proper().is_empty(), "improper coloring on {edges:?}");
        assert!(
            c.distinct_colors_used() <= g.max_degree() + g.max_multiplicity(),
            "used {} colors on Δ={} μ={}",
            c.distinct_colors_used(),
            g.max_degree(),
            g.max_multiplicity()
        );
        c
    }

    #[test]
    fn small_simple_graphs() {
        color_and_check(4, &[(0, 1), (1, 2), (2, 3)], 1, 3);
        color_and_check(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], 1, 3);
        // K4, Δ = 3.
        color_and_check(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 1, 4);
        // Petersen graph, Δ = 3 (class 2 would still fit in 4).
        let petersen = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
        ];
        color_and_check(10, &petersen, 1, 4);
    }

    #[test]
    fn palette_too_small_rejected() {
        let g = Arc::new(MultiGraph::build(3, &[(0, 1), (1, 2)], 1).unwrap());
        let err = proper_edge_coloring(&g, 2).unwrap_err();
        assert_eq!(
            err,
            ColoringError::PaletteTooSmall { palette: 2, required: 3, max_degree: 2, multiplicity: 1 }
        );
    }

    #[test]
    fn doubled_edges_need_delta_plus_two() {
        // A doubled edge: Δ = 2, μ = 2, both copies must differ.
        let c = color_and_check(2, &[(0, 1), (0, 1)], 2, 4);
        assert_ne!(c.color(EdgeId(0)), c.color(EdgeId(1)));
        // Doubled triangle: six mutually conflicting edges, Δ = 4, μ = 2.
        let c = color_and_check(
            3,
            &[(0, 1), (0, 1), (1, 2), (1, 2), (2, 0), (2, 0)],
            2,
            6,
        );
        assert_eq!(c.distinct_colors_used(), 6);
    }

    #[test]
    fn empty_and_tiny_graphs() {
        let g = Arc::new(MultiGraph::build(3, &[], 1).unwrap());
        let c = proper_edge_coloring(&g, 1).unwrap();
        assert!(c.is_total());
        color_and_check(2, &[(0, 1)], 1, 2);
    }

    #[test]
    fn uses_at_most_required_even_with_wide_palette() {
        let c = color_and_check(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], 1, 50);
        assert!(c.distinct_colors_used() <= 3);
    }

    #[test]
    fn random_simple_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
        for trial in 0..150 {
            let n = rng.gen_range(2..40u32);
            let p = rng.gen_range(0.05..0.9f64);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((a, b));
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            let g = Arc::new(MultiGraph::build(n, &edges, 1).unwrap());
            let k = g.max_degree() + 1;
            let c = proper_edge_coloring(&g, k)
                .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
            assert!(c.verify_proper().is_empty(), "trial {trial} improper");
            assert!(c.is_total());
        }
    }

    #[test]
    fn random_multigraphs_with_doubled_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
        for trial in 0..150 {
            let n = rng.gen_range(3..25u32);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.3) {
                        edges.push((a, b));
                        if rng.gen_bool(0.4) {
                            edges.push((a, b));
                        }
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            let g = Arc::new(MultiGraph::build(n, &edges, 2).unwrap());
            let k = g.max_degree() + g.max_multiplicity();
            let c = proper_edge_coloring(&g, k)
                .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
            assert!(c.verify_proper().is_empty(), "trial {trial} improper");
            assert!(c.distinct_colors_used() <= k);
        }
    }
}
