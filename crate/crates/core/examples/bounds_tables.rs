//! The analytic tables behind the randomized phases, evaluated at the
//! published constants (a = 180, recovery threshold 290, list slack ~300).

use avd_coloring::bounds::{
    chernoff_tail, collision_bound_crossover, lll_condition, repair_failure_bound,
    symdiff_collision_bound, symdiff_collision_bound_ln, talagrand_tail,
};

fn main() {
    // Binomial tails for the phase-1 membership events. The bound depends
    // only on the mean np = 180, so Delta cancels out of the first column.
    println!("phase-1 tails, exp(-t^2 / 3np):");
    let delta = 900_000u64;
    let p = 180.0 / delta as f64;
    for (label, n, t) in [
        ("recovered:    Bin(Δ, a/Δ) > 290   ", delta, 110.0),
        ("sparse:       Bin(Δ/3, a/Δ) < 20  ", delta / 3, 40.0),
        ("touched-step: Bin(Δ-1, a/Δ) > 289 ", delta - 1, 109.0),
    ] {
        println!("  {label} <= {:.3e}", chernoff_tail(n, p, t).unwrap());
    }

    // Phase-2 resampling terminates because the bad events obey the
    // symmetric local lemma: p = (20/Δ)^5 kinds of collisions, 6 dependent
    // neighbors, and 4pd evaluates to 0.768 < 1 independently of Δ.
    let c = lll_condition(20f64.powi(5) / 1e8, 6).unwrap();
    println!("\nlocal lemma: 4pd = {:.3} (holds: {})", c.value, c.holds);

    // Repair lists of size r + 300 make every pivot recoloring succeed
    // with positive probability, whatever r is.
    println!("\nrepair failure bound with slack 300:");
    for r in [2u64, 10, 100, 1_000, 10_000] {
        println!("  r = {r:>6}: {:.3e}", repair_failure_bound(r, 300).unwrap());
    }

    // Two adjacent vertices whose color sets differ in k places collide
    // with probability at most C(k, k/2) (a/Δ)^(k - d - 2). At Δ = 1e6
    // the bound beats Δ^-7 from degree 25 on.
    println!("\nsymdiff collision bound at Δ = 1e6, d = 10, a = 180:");
    for k in [20u64, 24, 25, 40] {
        println!("  k = {k}: {:.3e}", symdiff_collision_bound(k, 1_000_000, 10, 180.0).unwrap());
    }
    let crossover = collision_bound_crossover(1_000_000, 10, 180.0, 7.0).unwrap();
    println!("  first k with bound < Δ^-7: {crossover:?}");

    // The concentration step is honest about its range: with deviation
    // Δ/1000 the Talagrand-style bound only drops below 1/(3Δ^7) for
    // Δ beyond ~1.36e9.
    println!("\ntalagrand bound 4 exp(-t^2 / 32 r E) vs 1/(3 Δ^7):");
    for delta in [1e9f64, 1.36e9, 1.5e9] {
        let b = talagrand_tail(2.0, 290.0, delta / 1000.0, delta / 1000.0).unwrap();
        let target = 1.0 / (3.0 * delta.powi(7));
        println!(
            "  Δ = {delta:.2e}: bound {:.3e}, target {:.3e}, beats it: {}",
            b.probability,
            target,
            b.probability < target
        );
    }

    // In log space the collision bound stays usable long after the plain
    // value underflows to zero.
    let ln = symdiff_collision_bound_ln(3000, 1_000_000, 10, 180.0).unwrap();
    println!("\nk = 3000 collision bound: ln = {ln:.1} (plain value underflows)");
}
