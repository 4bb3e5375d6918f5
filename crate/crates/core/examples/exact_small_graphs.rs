//! Exact avd chromatic indices for a shelf of small graphs.
//!
//! Every value here comes from the branch-and-bound solver; the `vs Δ`
//! column shows how far above the max degree the answer lands. The five
//! cycle is the one graph on the shelf that needs Δ + 3; everything else
//! stays within Δ + 2.

use avd_coloring::io::Family;
use avd_coloring::solver::{avd_chromatic_number, SearchConfig};

fn main() {
    let shelf = [
        "path 3",
        "path 4",
        "path 6",
        "cycle 3",
        "cycle 4",
        "cycle 5",
        "cycle 6",
        "cycle 7",
        "complete 4",
        "complete 5",
        "complete_bipartite 2 3",
        "complete_bipartite 3 3",
    ];
    let config = SearchConfig::default();
    println!("{:<24} {:>2} {:>2} {:>7} {:>6}  nodes", "graph", "n", "m", "chi'_a", "vs Δ");
    for text in shelf {
        let family = Family::parse(text).unwrap();
        let g = family.generate(0).unwrap();
        let res = avd_chromatic_number(&g, &config).unwrap();
        let delta = g.max_degree();
        println!(
            "{:<24} {:>2} {:>2} {:>7} {:>6}  {}",
            text,
            g.vertex_count(),
            g.edge_count(),
            res.chromatic_index,
            format!("Δ+{}", res.chromatic_index - delta),
            res.nodes_explored
        );
        // Witnesses are real colorings, not just numbers.
        let w = res.witness.expect("graphs with edges have witnesses");
        assert!(w.verify_proper().is_empty() && w.verify_avd().unwrap().is_empty());
    }
}
