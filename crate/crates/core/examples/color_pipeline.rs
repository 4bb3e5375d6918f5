//! Run the randomized coloring pipeline on a random graph and dump the
//! stage-by-stage report.

use avd_coloring::io::Family;
use avd_coloring::pipeline::{avd_color_pipeline, PipelineParams};

fn main() {
    let g = Family::parse("gnp 200 0.3 42").unwrap().generate(0).unwrap();
    let delta = g.max_degree();
    let params = PipelineParams::scaled(delta);
    println!(
        "graph: {} vertices, {} edges, max degree {}",
        g.vertex_count(),
        g.edge_count(),
        delta
    );
    println!(
        "profile: uncolor rate {:.3}, recovery threshold {}, {} fresh colors, palette cap {}",
        params.uncolor_probability(delta),
        params.recovery_threshold,
        params.fresh_colors,
        delta + params.list_slack
    );

    let run = avd_color_pipeline(&g, &params, 7).unwrap();
    let r = &run.report;
    println!();
    println!("phase 1: accepted attempt {} of {} (violations per attempt: {:?})", r.phase1_attempts, params.max_attempts, r.phase1_violations);
    println!("         recovered {}, sparse {}, touched {}, low-unused {}", r.recovered_count, r.sparse_count, r.touched_count, r.low_unused_count);
    println!("phase 2: accepted attempt {}, max unused degree {} -> {}", r.phase2_attempts, r.max_unused_after_phase1, r.max_unused_after_phase2);
    println!("repair : {} bad pairs at the start, {} pivot recolorings", r.initial_bad_pairs, r.repair_iterations);
    if r.fallback_used {
        println!("fallback: {}", r.fallback_reason.as_deref().unwrap_or("?"));
    }
    println!();
    println!(
        "result: {} colors ({} distinct used), proper = {}, avd = {}",
        r.palette_size, r.distinct_colors, r.proper, r.avd
    );

    // The report is the contract; the coloring backs it up.
    assert!(run.coloring.verify_proper().is_empty());
    assert!(run.coloring.verify_avd().unwrap().is_empty());
}
