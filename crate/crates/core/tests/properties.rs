//! Property suites over randomly built graphs: serialization round-trips,
//! the Vizing bound, and solver feasibility at the trivial palette.

use std::sync::Arc;

use proptest::prelude::*;

use avd_coloring::coloring::proper_edge_coloring;
use avd_coloring::io::{
    coloring_from_file, coloring_to_file, parse_edge_list, serialize_edge_list, Family,
};
use avd_coloring::solver::{exists_avd_coloring, SearchConfig};
use avd_coloring::MultiGraph;

/// Random multigraph: up to `max_n` vertices, multiplicity capped at 2 by
/// dropping extra copies.
fn multigraph(max_n: u32, max_m: usize) -> impl Strategy<Value = Arc<MultiGraph>> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_m).prop_map(move |pairs| {
            let mut seen = std::collections::HashMap::new();
            let edges: Vec<(u32, u32)> = pairs
                .into_iter()
                .filter(|&(u, v)| u != v)
                .filter(|&(u, v)| {
                    let count = seen.entry((u.min(v), u.max(v))).or_insert(0u32);
                    *count += 1;
                    *count <= 2
                })
                .collect();
            Arc::new(MultiGraph::build(n, &edges, 2).unwrap())
        })
    })
}

/// Connected simple graph: a spanning path plus random extra edges. Having
/// at least three vertices on one path rules out isolated edges.
fn connected_simple(max_n: u32, max_extra: usize) -> impl Strategy<Value = Arc<MultiGraph>> {
    (3..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_extra).prop_map(move |extra| {
            let mut edges: Vec<(u32, u32)> = (1..n).map(|i| (i - 1, i)).collect();
            for (u, v) in extra {
                if u != v && !edges.contains(&(u.min(v), u.max(v))) {
                    edges.push((u.min(v), u.max(v)));
                }
            }
            Arc::new(MultiGraph::build(n, &edges, 1).unwrap())
        })
    })
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        (1..=30u32).prop_map(|n| Family::parse(&format!("path {n}")).unwrap()),
        (3..=30u32).prop_map(|n| Family::parse(&format!("cycle {n}")).unwrap()),
        (1..=8u32).prop_map(|n| Family::parse(&format!("complete {n}")).unwrap()),
        (1..=6u32, 1..=6u32)
            .prop_map(|(a, b)| Family::parse(&format!("complete_bipartite {a} {b}")).unwrap()),
        (2..=25u32, 0..=100u32, any::<u64>())
            .prop_map(|(n, p, s)| Family::parse(&format!("gnp {n} 0.{p:02} {s}")).unwrap()),
        (1..=6u32, any::<u64>()).prop_flat_map(|(d, s)| {
            ((d + 1)..=20u32).prop_map(move |n| {
                let n = if n * d % 2 == 1 { n + 1 } else { n };
                Family::parse(&format!("regular {n} {d} {s}")).unwrap()
            })
        }),
    ]
}

fn edge_multiset(g: &MultiGraph) -> Vec<(u32, u32)> {
    let mut edges: Vec<(u32, u32)> = g
        .edges()
        .map(|e| {
            let (u, v) = g.endpoints(e);
            (u.0.min(v.0), u.0.max(v.0))
        })
        .collect();
    edges.sort_unstable();
    edges
}

proptest! {
    #[test]
    fn edge_list_round_trips_any_multigraph(g in multigraph(30, 80)) {
        let parsed = parse_edge_list(&serialize_edge_list(&g)).unwrap();
        prop_assert_eq!(parsed.vertex_count(), g.vertex_count());
        prop_assert_eq!(edge_multiset(&parsed), edge_multiset(&g));
    }

    #[test]
    fn edge_list_round_trips_every_family(f in family()) {
        let g = f.generate(99).unwrap();
        let parsed = parse_edge_list(&serialize_edge_list(&g)).unwrap();
        prop_assert_eq!(parsed.vertex_count(), g.vertex_count());
        prop_assert_eq!(edge_multiset(&parsed), edge_multiset(&g));
        // The family text itself round-trips too.
        prop_assert_eq!(Family::parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn vizing_engine_stays_inside_its_bound(g in multigraph(24, 60)) {
        let k = (g.max_degree() + g.max_multiplicity()).max(1);
        let c = proper_edge_coloring(&g, k).unwrap();
        prop_assert!(c.is_total());
        prop_assert!(c.verify_proper().is_empty());
        prop_assert!(c.distinct_colors_used() <= k);
    }

    #[test]
    fn coloring_files_round_trip(g in multigraph(16, 30)) {
        let k = (g.max_degree() + g.max_multiplicity()).max(1);
        let c = proper_edge_coloring(&g, k).unwrap();
        let file = coloring_to_file(&c);
        let restored = coloring_from_file(&g, &file).unwrap();
        prop_assert_eq!(restored.color_slots(), c.color_slots());
        prop_assert!(restored.verify_proper().is_empty());
    }

    #[test]
    fn one_color_per_edge_is_always_feasible(g in connected_simple(7, 6)) {
        // Distinct colors everywhere distinguish any adjacent pair except
        // across an isolated edge, so the solver must call these feasible.
        let outcome = exists_avd_coloring(&g, g.edge_count(), &SearchConfig::default()).unwrap();
        prop_assert!(outcome.is_feasible());
    }
}
