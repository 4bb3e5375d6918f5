//! Monte Carlo estimation of the phase-1 event probabilities.
//!
//! The evaluators next door bound Pr[v ∈ R], Pr[v ∈ Q], Pr[v ∈ T] and the
//! collision event with closed forms. This harness measures the same
//! frequencies on a concrete graph by rerunning phase 1 with fresh seeds,
//! so the bounds can be checked in the one direction the analysis needs:
//! empirical frequency at most analytic bound, up to sampling noise.
//!
//! Every row carries a normal-approximation standard error plus an exact
//! Clopper-Pearson upper confidence limit; the latter is the one that means
//! anything for events seen a handful of times. Analytic columns are `None`
//! whenever the matching closed form's preconditions fail at the given
//! scale: the neighborhood cap has no desk-scale closed form at all, and
//! the collision bound needs every pair's base symmetric difference to
//! reach twice the target.

use std::collections::HashSet;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::coloring::{proper_edge_coloring, ColorSet};
use crate::graph::{classify_by_degree, MultiGraph, VertexId};
use crate::pipeline::{phase1, PipelineParams};

use super::{chernoff_tail, symdiff_collision_bound};

/// One estimated event frequency next to its analytic bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloRow {
    pub event: String,
    pub observed: u64,
    pub samples: u64,
    pub empirical: f64,
    /// Normal-approximation standard error of `empirical`.
    pub stderr: f64,
    /// Exact Clopper-Pearson upper confidence limit at 97.5%.
    pub cp_upper: f64,
    /// Matching closed-form bound, when its preconditions hold here.
    pub analytic: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub trials: u64,
    pub seed: u64,
    pub rows: Vec<MonteCarloRow>,
    /// Distribution of distinct L-neighbor counts over high vertices and
    /// trials: index `i` counts vertex-trials that saw exactly `i`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub l_neighbor_counts: Vec<u64>,
}

impl MonteCarloReport {
    /// Rows whose empirical frequency lands above their analytic bound by
    /// more than three standard errors. The bounds are one-sided, so this
    /// is the only direction that can falsify them.
    pub fn bound_violations(&self) -> Vec<String> {
        self.rows
            .iter()
            .filter(|r| r.analytic.is_some_and(|b| r.empirical > b + 3.0 * r.stderr))
            .map(|r| {
                format!(
                    "{}: empirical {:.3e} exceeds analytic {:.3e} + 3 stderr",
                    r.event,
                    r.empirical,
                    r.analytic.unwrap_or(f64::NAN)
                )
            })
            .collect()
    }
}

fn make_row(event: &str, observed: u64, samples: u64, analytic: Option<f64>) -> MonteCarloRow {
    let empirical = if samples == 0 { 0.0 } else { observed as f64 / samples as f64 };
    let stderr = if samples == 0 {
        0.0
    } else {
        (empirical * (1.0 - empirical) / samples as f64).sqrt()
    };
    MonteCarloRow {
        event: event.to_string(),
        observed,
        samples,
        empirical,
        stderr,
        cp_upper: clopper_pearson_upper(observed, samples),
        analytic,
    }
}

/// Exact one-sided 97.5% upper confidence limit for a binomial proportion:
/// the `observed + 1, samples - observed` beta quantile, 1 when the data
/// cannot exclude anything.
fn clopper_pearson_upper(observed: u64, samples: u64) -> f64 {
    if samples == 0 || observed >= samples {
        return 1.0;
    }
    // statrs's generic inverse_cdf only bisects to ~1e-5; its cdf is the
    // accurate regularized incomplete beta, so bisect that ourselves.
    let beta = Beta::new((observed + 1) as f64, (samples - observed) as f64)
        .expect("shape parameters are positive");
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if beta.cdf(mid) < 0.975 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// SplitMix64 finalizer over seed and trial index. A pure function of both,
/// so trials can run in any order on any number of threads and still draw
/// the same streams.
fn trial_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Default)]
struct Tally {
    recovered: u64,
    sparse: u64,
    touched: u64,
    low_unused: u64,
    cap_exceeded: u64,
    collision: u64,
    l_neighbor_counts: Vec<u64>,
}

impl Tally {
    fn absorb(mut self, other: Tally) -> Tally {
        self.recovered += other.recovered;
        self.sparse += other.sparse;
        self.touched += other.touched;
        self.low_unused += other.low_unused;
        self.cap_exceeded += other.cap_exceeded;
        self.collision += other.collision;
        if self.l_neighbor_counts.len() < other.l_neighbor_counts.len() {
            self.l_neighbor_counts.resize(other.l_neighbor_counts.len(), 0);
        }
        for (i, c) in other.l_neighbor_counts.into_iter().enumerate() {
            self.l_neighbor_counts[i] += c;
        }
        self
    }
}

/// Runs phase 1 `trials` times on `g` and reports, per high vertex, how
/// often it landed in R, Q, T, and L, how often its distinct L-neighbor
/// count broke the cap, and, per adjacent equal-degree high pair, how often
/// the color-set symmetric difference fell short of the target. Collision
/// frequencies average over all such pairs, including both-L ones, since
/// the per-pair bound makes no exception for them.
///
/// Trials are independent and embarrassingly parallel; the report is a
/// pure function of `(g, params, trials, seed)`.
pub fn monte_carlo_phase1(
    g: &Arc<MultiGraph>,
    params: &PipelineParams,
    trials: u64,
    seed: u64,
) -> MonteCarloReport {
    assert!(trials >= 1, "at least one trial");
    let delta = g.max_degree();
    let palette = delta + g.max_multiplicity().max(2);
    let c0 = proper_edge_coloring(g, palette).expect("Δ plus multiplicity colors always suffice");

    let classes = classify_by_degree(g, params.degree_split.scale(delta as u64));
    let high: Vec<VertexId> = g.vertices().filter(|&v| !classes.is_low(v)).collect();
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    let mut pairs: Vec<(VertexId, VertexId)> = Vec::new();
    for e in g.edges() {
        let (u, v) = g.endpoints(e);
        if classes.is_low(u) || classes.is_low(v) || g.degree(u) != g.degree(v) {
            continue;
        }
        if seen.insert((u.0.min(v.0), u.0.max(v.0))) {
            pairs.push((u, v));
        }
    }

    let p = params.uncolor_probability(delta);
    let mean = delta as f64 * p;
    let rho = params.recovery_threshold as f64;
    // Pre-recovery |UC_v| is Binomial(deg v, p); the upper tail is worst at
    // degree Δ, the lower tail at the smallest high degree.
    let analytic_recovered = chernoff_tail(delta as u64, p, rho - mean).ok();
    let d_min = high.iter().map(|&v| g.degree(v)).min().unwrap_or(0);
    let analytic_sparse = chernoff_tail(
        d_min as u64,
        p,
        d_min as f64 * p - params.sparse_threshold as f64,
    )
    .ok();
    // Union bound over the at most Δ sampled edges at v, each of whose
    // other endpoint needs ρ-1 further uncolored edges to recover.
    let analytic_touched = if delta >= 1 {
        chernoff_tail(delta as u64 - 1, p, rho - 1.0 - (delta - 1) as f64 * p)
            .ok()
            .map(|b| mean * b)
    } else {
        None
    };
    // L sits inside R ∪ Q ∪ T, so its bound is the sum when all three hold.
    let analytic_low_unused = match (analytic_recovered, analytic_sparse, analytic_touched) {
        (Some(r), Some(q), Some(t)) => Some(r + q + t),
        _ => None,
    };
    // Per-pair collision bound, parameterized by that pair's base symmetric
    // difference; the max over pairs bounds the average frequency. Any pair
    // outside the bound's domain kills the column.
    let base_sets: Vec<ColorSet> = g.vertices().map(|v| c0.color_set(v)).collect();
    let d = params.min_symdiff;
    let mut analytic_collision = if pairs.is_empty() { None } else { Some(0.0f64) };
    for &(u, v) in &pairs {
        let k = base_sets[u.index()].symmetric_difference_len(&base_sets[v.index()]);
        match symdiff_collision_bound(k as u64, delta as u64, d as u64, params.uncolor_numerator)
        {
            Ok(b) => analytic_collision = analytic_collision.map(|m| m.max(b)),
            Err(_) => {
                analytic_collision = None;
                break;
            }
        }
    }

    let cap = params.neighborhood_cap.scale(delta as u64);
    let tally = (0..trials)
        .into_par_iter()
        .fold(Tally::default, |mut acc, i| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, i));
            let out = phase1(&c0, params, &mut rng);
            for &v in &high {
                let vi = v.index();
                acc.recovered += out.recovered[vi] as u64;
                acc.sparse += out.sparse[vi] as u64;
                acc.touched += out.touched[vi] as u64;
                acc.low_unused += out.low_unused[vi] as u64;
            }
            let mut l_neighbors: Vec<VertexId> = Vec::new();
            for &v in &high {
                l_neighbors.clear();
                for &e in g.incident_edges(v) {
                    let w = g.other_endpoint(e, v);
                    if out.low_unused[w.index()] {
                        l_neighbors.push(w);
                    }
                }
                l_neighbors.sort_unstable();
                l_neighbors.dedup();
                let count = l_neighbors.len();
                if acc.l_neighbor_counts.len() <= count {
                    acc.l_neighbor_counts.resize(count + 1, 0);
                }
                acc.l_neighbor_counts[count] += 1;
                acc.cap_exceeded += !cap.at_least(count as u64) as u64;
            }
            if !pairs.is_empty() {
                let sets: Vec<ColorSet> =
                    g.vertices().map(|v| out.coloring.color_set(v)).collect();
                for &(u, v) in &pairs {
                    let diff = sets[u.index()].symmetric_difference_len(&sets[v.index()]);
                    acc.collision += (diff < d) as u64;
                }
            }
            acc
        })
        .reduce(Tally::default, Tally::absorb);

    let vertex_samples = trials * high.len() as u64;
    let pair_samples = trials * pairs.len() as u64;
    MonteCarloReport {
        trials,
        seed,
        rows: vec![
            make_row("recovered", tally.recovered, vertex_samples, analytic_recovered),
            make_row("sparse", tally.sparse, vertex_samples, analytic_sparse),
            make_row("touched", tally.touched, vertex_samples, analytic_touched),
            make_row("low_unused", tally.low_unused, vertex_samples, analytic_low_unused),
            make_row("cap_exceeded", tally.cap_exceeded, vertex_samples, None),
            make_row("collision", tally.collision, pair_samples, analytic_collision),
        ],
        l_neighbor_counts: tally.l_neighbor_counts,
    }
}

/// Estimates `Pr[Binomial(n, p) > threshold]` over `samples` draws and puts
/// it next to the Chernoff value at deviation `threshold - np`. This is the
/// pure counting check, with none of the graph machinery in the way.
pub fn monte_carlo_binomial_tail(
    n: u64,
    p: f64,
    threshold: u64,
    samples: u64,
    seed: u64,
) -> MonteCarloReport {
    assert!(samples >= 1, "at least one sample");
    let dist = Binomial::new(n, p).expect("p must lie in [0, 1]");
    let chunk = 1u64 << 14;
    let chunks = samples.div_ceil(chunk);
    let observed: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = (lo + chunk).min(samples);
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, c));
            (lo..hi).filter(|_| dist.sample(&mut rng) > threshold).count() as u64
        })
        .sum();
    let analytic = chernoff_tail(n, p, threshold as f64 - n as f64 * p).ok();
    MonteCarloReport {
        trials: samples,
        seed,
        rows: vec![make_row("binomial_upper_tail", observed, samples, analytic)],
        l_neighbor_counts: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circulant(n: u32, offsets: &[u32]) -> Arc<MultiGraph> {
        let mut edges = Vec::new();
        for v in 0..n {
            for &o in offsets {
                edges.push((v, (v + o) % n));
            }
        }
        Arc::new(MultiGraph::build(n, &edges, 1).unwrap())
    }

    fn row<'a>(report: &'a MonteCarloReport, event: &str) -> &'a MonteCarloRow {
        report.rows.iter().find(|r| r.event == event).unwrap()
    }

    #[test]
    fn nothing_is_uncolored_at_rate_zero() {
        let g = circulant(12, &[1, 2]);
        let mut params = PipelineParams::scaled(4);
        params.uncolor_numerator = 0.0;
        params.sparse_threshold = 1;
        params.low_unused_threshold = 1;
        let report = monte_carlo_phase1(&g, &params, 50, 7);
        assert_eq!(row(&report, "recovered").observed, 0);
        assert_eq!(row(&report, "touched").observed, 0);
        assert_eq!(row(&report, "sparse").empirical, 1.0);
        assert_eq!(row(&report, "low_unused").empirical, 1.0);
        let samples: u64 = report.l_neighbor_counts.iter().sum();
        assert_eq!(samples, 12 * 50);
    }

    #[test]
    fn identical_seeds_reproduce_the_report() {
        let g = circulant(18, &[1, 2, 3]);
        let params = PipelineParams::scaled(6);
        let a = monte_carlo_phase1(&g, &params, 40, 11);
        let b = monte_carlo_phase1(&g, &params, 40, 11);
        assert_eq!(a, b);
        let c = monte_carlo_phase1(&g, &params, 40, 12);
        assert_ne!(a, c);
    }

    #[test]
    fn rates_respect_the_chernoff_bounds() {
        // 100-regular circulant: large enough that the recovery bound is
        // informative (about 0.21) while the empirical rate sits near 2e-3.
        let offsets: Vec<u32> = (1..=50).collect();
        let g = circulant(201, &offsets);
        let params = PipelineParams::scaled(100);
        let report = monte_carlo_phase1(&g, &params, 80, 3);

        assert_eq!(report.bound_violations(), Vec::<String>::new());
        let rec = row(&report, "recovered");
        assert_eq!(rec.samples, 201 * 80);
        let bound = rec.analytic.unwrap();
        assert!(bound < 0.25, "recovery bound {bound} should be informative");
        assert!(rec.empirical <= bound);
        for r in &report.rows {
            assert!((0.0..=1.0).contains(&r.empirical), "{}: {}", r.event, r.empirical);
            assert!(r.cp_upper >= r.empirical);
        }
        let total: u64 = report.l_neighbor_counts.iter().sum();
        assert_eq!(total, 201 * 80);
    }

    #[test]
    fn vertex_samples_count_only_high_vertices() {
        // A star's leaves are low, so only the hub contributes samples.
        let n = 9u32;
        let edges: Vec<(u32, u32)> = (1..n).map(|i| (0, i)).collect();
        let g = Arc::new(MultiGraph::build(n, &edges, 1).unwrap());
        let report = monte_carlo_phase1(&g, &PipelineParams::scaled(8), 30, 1);
        assert_eq!(row(&report, "recovered").samples, 30);
        assert_eq!(row(&report, "collision").samples, 0);
        assert_eq!(row(&report, "collision").empirical, 0.0);
    }

    #[test]
    fn binomial_tail_stays_under_the_bound() {
        let report = monte_carlo_binomial_tail(10_000, 0.018, 290, 100_000, 5);
        let r = &report.rows[0];
        assert_eq!(r.samples, 100_000);
        let analytic = r.analytic.unwrap();
        assert_eq!(analytic, chernoff_tail(10_000, 0.018, 110.0).unwrap());
        assert!(r.empirical <= 1e-3);
        assert!(r.empirical <= analytic + 3.0 * r.stderr);
        assert!(report.bound_violations().is_empty());
    }

    #[test]
    fn clopper_pearson_matches_the_closed_form() {
        // No successes in 100: the limit solves (1 - u)^100 = 0.025.
        let r = make_row("t", 0, 100, None);
        let expected = 1.0 - 0.025f64.powf(0.01);
        assert!((r.cp_upper - expected).abs() < 1e-9);
        assert_eq!(make_row("t", 5, 5, None).cp_upper, 1.0);
        assert_eq!(make_row("t", 0, 0, None).cp_upper, 1.0);
        let r = make_row("t", 3, 50, None);
        assert!(r.cp_upper > r.empirical);
    }
}
