//! Graph generation, edge-list text, and coloring files, round-tripped.

use avd_coloring::io::{
    coloring_from_file, coloring_to_file, parse_edge_list, serialize_edge_list, Family,
};
use avd_coloring::pipeline::{avd_color_pipeline, PipelineParams};

fn main() {
    // Seeded generators: the same text and seed always give the same graph.
    let g = Family::parse("regular 16 5 3").unwrap().generate(0).unwrap();
    let text = serialize_edge_list(&g);
    println!("regular 16 5 3 as an edge list ({} lines):", text.lines().count());
    for line in text.lines().take(5) {
        println!("  {line}");
    }
    println!("  ...");

    // parse . serialize is the identity.
    let back = parse_edge_list(&text).unwrap();
    assert_eq!(back.vertex_count(), g.vertex_count());
    assert_eq!(back.edge_count(), g.edge_count());

    // Colorings travel as JSON: palette size plus one color per edge in
    // EdgeId order, with 0 meaning uncolored.
    let params = PipelineParams::scaled(g.max_degree());
    let run = avd_color_pipeline(&g, &params, 4).unwrap();
    let file = coloring_to_file(&run.coloring);
    println!("\ncoloring file: {}", serde_json::to_string(&file).unwrap());

    let restored = coloring_from_file(&g, &file).unwrap();
    assert!(restored.verify_proper().is_empty());
    assert!(restored.verify_avd().unwrap().is_empty());
    println!("restored coloring verifies: proper and avd");

    // Malformed input fails with the line number.
    let bad = "3 3\n0 1\n1 1\n2 0";
    match parse_edge_list(bad) {
        Err(e) => println!("\nloops are rejected: {e}"),
        Ok(_) => unreachable!(),
    }
}
