//! Proper edge coloring of a multigraph with Δ + μ colors.
//!
//! The fan-rotation engine underlies both the exact solver's upper bound
//! and the pipeline's completion step. Here it colors a doubled Petersen
//! graph: Δ = 6, μ = 2, so 8 colors always suffice.

use std::sync::Arc;

use avd_coloring::coloring::proper_edge_coloring;
use avd_coloring::MultiGraph;

fn main() {
    // The Petersen graph, every edge doubled.
    let outer = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
    let spokes = [(0, 5), (1, 6), (2, 7), (3, 8), (4, 9)];
    let inner = [(5, 7), (7, 9), (9, 6), (6, 8), (8, 5)];
    let mut edges = Vec::new();
    for (u, v) in outer.into_iter().chain(spokes).chain(inner) {
        edges.push((u, v));
        edges.push((u, v));
    }
    let g = Arc::new(MultiGraph::build(10, &edges, 2).unwrap());
    let delta = g.max_degree();
    let mu = g.max_multiplicity();

    let c = proper_edge_coloring(&g, delta + mu).unwrap();
    assert!(c.is_total());
    assert!(c.verify_proper().is_empty());
    println!(
        "colored {} edges with {} colors (Δ = {delta}, μ = {mu})",
        g.edge_count(),
        c.distinct_colors_used()
    );

    for v in g.vertices().take(3) {
        let set: Vec<u32> = c.color_set(v).iter().collect();
        println!("colors at vertex {}: {:?}", v.0, set);
    }

    // One color fewer is already out of the guarantee.
    let err = proper_edge_coloring(&g, delta + mu - 1).unwrap_err();
    println!("with {} colors: {err}", delta + mu - 1);
}
