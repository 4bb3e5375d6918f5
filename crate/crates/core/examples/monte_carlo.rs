//! Monte Carlo checks of the analytic bounds: a plain binomial tail at the
//! published constants, then phase-1 event frequencies on a real graph.

use avd_coloring::bounds::{monte_carlo_binomial_tail, monte_carlo_phase1};
use avd_coloring::io::Family;
use avd_coloring::pipeline::PipelineParams;

fn main() {
    // Pr[Bin(10^4, 0.018) > 290]: the recovery event at Δ = 10^4 with the
    // published rate a/Δ = 180/10^4 and threshold 290.
    let report = monte_carlo_binomial_tail(10_000, 0.018, 290, 200_000, 1);
    let row = &report.rows[0];
    println!(
        "binomial tail: {} hits in {} samples, empirical {:.2e}, CP 97.5% <= {:.2e}, analytic <= {:.2e}",
        row.observed,
        row.samples,
        row.empirical,
        row.cp_upper,
        row.analytic.unwrap()
    );

    // The same events measured on an actual graph: rerun phase 1 many
    // times and count, per high vertex, how often each bad event fires.
    let g = Family::parse("regular 100 30 7").unwrap().generate(0).unwrap();
    let params = PipelineParams::scaled(g.max_degree());
    let report = monte_carlo_phase1(&g, &params, 400, 9);
    println!(
        "\nphase-1 events on a 30-regular graph, {} trials:",
        report.trials
    );
    println!("{:<14} {:>9} {:>10} {:>10} {:>10}", "event", "observed", "empirical", "cp_upper", "analytic");
    for row in &report.rows {
        let analytic = match row.analytic {
            Some(b) if b <= 1.0 => format!("{:.3e}", b),
            Some(b) => format!("{:.2e} (>1)", b),
            None => "-".to_string(),
        };
        println!(
            "{:<14} {:>9} {:>10.4} {:>10.4} {:>10}",
            row.event, row.observed, row.empirical, row.cp_upper, analytic
        );
    }
    for v in report.bound_violations() {
        println!("VIOLATION: {v}");
    }
    if report.bound_violations().is_empty() {
        println!("all empirical rates sit under their analytic bounds");
    }

    // |N(v) ∩ L| histogram: how many of a high vertex's neighbors ended
    // up in the phase-2 target set.
    let total: u64 = report.l_neighbor_counts.iter().sum();
    print!("L-neighbor counts: ");
    for (k, n) in report.l_neighbor_counts.iter().enumerate() {
        if *n > 0 {
            print!("{k}:{:.3} ", *n as f64 / total as f64);
        }
    }
    println!();
}
