//! Tail-bound calculators backing the randomized construction.
//!
//! Each function evaluates one of the closed-form bounds used to argue the
//! construction succeeds: a multiplicative Chernoff tail, a Talagrand-style
//! concentration inequality for functions with bounded certificates, the
//! symmetric Lovász Local Lemma criterion `4pd < 1`, the standard binomial
//! coefficient sandwich, the collision probability of two random incident
//! color sets, and the failure probability of one repair iteration under
//! random greedy list completion.
//!
//! Everything here is straight evaluation with explicit domain checks. Large
//! factorials and binomials go through `ln Γ` so the functions stay `O(1)`
//! and work far beyond `f64` factorial range; genuinely representable
//! quantities are computed exactly in integer arithmetic instead.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

mod mc;
pub use mc::{monte_carlo_binomial_tail, monte_carlo_phase1, MonteCarloReport, MonteCarloRow};

#[derive(Debug, Error, PartialEq)]
pub enum DomainError {
    #[error("{name} = {value} violates: {constraint}")]
    Invalid { name: &'static str, value: f64, constraint: &'static str },
}

fn require(ok: bool, name: &'static str, value: f64, constraint: &'static str) -> Result<(), DomainError> {
    if ok {
        Ok(())
    } else {
        Err(DomainError::Invalid { name, value, constraint })
    }
}

/// Multiplicative Chernoff bound `2 exp(-t^2 / (3 n p))` on the probability
/// that a Binomial(n, p) variable deviates from its mean by more than `t`,
/// valid for `0 < t <= n p`.
pub fn chernoff_tail(n: u64, p: f64, t: f64) -> Result<f64, DomainError> {
    require(n >= 1, "n", n as f64, "n >= 1")?;
    require(p > 0.0 && p <= 1.0, "p", p, "0 < p <= 1")?;
    let mean = n as f64 * p;
    require(t > 0.0 && t <= mean, "t", t, "0 < t <= n*p")?;
    Ok(2.0 * (-t * t / (3.0 * mean)).exp())
}

/// Talagrand-style concentration for a nonnegative functional that changes
/// by at most `c` per underlying choice and whose value-`s` outcomes are
/// certified by `r * s` choices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConcentrationBound {
    /// Deviation from the median covered by the stated probability:
    /// `t + 60 c sqrt(r * expectation)`.
    pub deviation: f64,
    /// `4 exp(-t^2 / (8 c^2 r * expectation))`.
    pub probability: f64,
}

pub fn talagrand_tail(c: f64, r: f64, expectation: f64, t: f64) -> Result<ConcentrationBound, DomainError> {
    require(c >= 1.0, "c", c, "c >= 1")?;
    require(r >= 1.0, "r", r, "r >= 1")?;
    require(expectation > 0.0, "expectation", expectation, "expectation > 0")?;
    require(t > 0.0, "t", t, "t > 0")?;
    let re = r * expectation;
    Ok(ConcentrationBound {
        deviation: t + 60.0 * c * re.sqrt(),
        probability: 4.0 * (-t * t / (8.0 * c * c * re)).exp(),
    })
}

/// Symmetric Lovász Local Lemma criterion: all bad events have probability
/// at most `p` and each depends on at most `d` others; `4 p d < 1` makes
/// avoiding all of them possible.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalLemmaCheck {
    pub value: f64,
    pub holds: bool,
}

pub fn lll_condition(p: f64, d: u64) -> Result<LocalLemmaCheck, DomainError> {
    require(p >= 0.0 && p <= 1.0, "p", p, "0 <= p <= 1")?;
    let value = 4.0 * p * d as f64;
    Ok(LocalLemmaCheck { value, holds: value < 1.0 })
}

/// The standard sandwich `(a/b)^b <= C(a,b) <= (ea/b)^b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BinomialSandwich {
    pub lower: f64,
    pub exact: f64,
    pub upper: f64,
}

pub fn binomial_sandwich(a: u64, b: u64) -> Result<BinomialSandwich, DomainError> {
    require(b >= 1, "b", b as f64, "b >= 1")?;
    require(b <= a, "b", b as f64, "b <= a")?;
    let ratio = a as f64 / b as f64;
    Ok(BinomialSandwich {
        lower: ratio.powf(b as f64),
        exact: binomial(a, b),
        upper: (std::f64::consts::E * ratio).powf(b as f64),
    })
}

/// `C(a, b)` as `f64`: exact integer arithmetic while the intermediate
/// products fit `u128`, `ln Γ` beyond that.
fn binomial(a: u64, b: u64) -> f64 {
    let b = b.min(a - b.min(a));
    let mut acc: u128 = 1;
    for i in 1..=b {
        // acc * (a - b + i) stays divisible by i: acc holds C(a-b+i-1, i-1)
        // times nothing else, so the running value is always a binomial.
        match acc.checked_mul((a - b + i) as u128) {
            Some(next) => acc = next / i as u128,
            None => return binomial_ln(a, b).exp(),
        }
    }
    acc as f64
}

fn binomial_ln(a: u64, b: u64) -> f64 {
    ln_gamma(a as f64 + 1.0) - ln_gamma(b as f64 + 1.0) - ln_gamma((a - b) as f64 + 1.0)
}

/// Probability that two adjacent degree-`k` vertices end up with color sets
/// differing in fewer than `d` places after each of their edges stays
/// uncolored independently with probability `a / delta`: at most
/// `C(k, d) (a / delta)^(k - d - 2)`.
pub fn symdiff_collision_bound(k: u64, delta: u64, d: u64, a: f64) -> Result<f64, DomainError> {
    symdiff_collision_bound_ln(k, delta, d, a).map(f64::exp)
}

/// Natural log of [`symdiff_collision_bound`], usable when the bound itself
/// underflows. With `a = 0` the bound degenerates to `0` (` -inf` here) for
/// `k > d + 2` and to the bare binomial at `k = d + 2`.
pub fn symdiff_collision_bound_ln(k: u64, delta: u64, d: u64, a: f64) -> Result<f64, DomainError> {
    require(delta >= 1, "delta", delta as f64, "delta >= 1")?;
    require(a >= 0.0 && a <= delta as f64, "a", a, "0 <= a <= delta")?;
    require(k >= 2 * d, "k", k as f64, "k >= 2d")?;
    if a == 0.0 {
        require(k >= d + 2, "k", k as f64, "k >= d + 2 when a = 0")?;
        return Ok(if k == d + 2 { binomial_ln(k, d) } else { f64::NEG_INFINITY });
    }
    let exponent = k as f64 - d as f64 - 2.0;
    Ok(binomial_ln(k, d) + exponent * (a / delta as f64).ln())
}

/// Smallest degree `k` at which the collision bound drops below
/// `delta^-exponent`, scanning upward from `k = 2d`; `None` if no
/// `k <= delta` gets there.
pub fn collision_bound_crossover(
    delta: u64,
    d: u64,
    a: f64,
    exponent: f64,
) -> Result<Option<u64>, DomainError> {
    require(exponent > 0.0, "exponent", exponent, "exponent > 0")?;
    let target = -exponent * (delta as f64).ln();
    for k in 2 * d..=delta {
        if symdiff_collision_bound_ln(k, delta, d, a)? < target {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Probability that a repair iteration fails when a pivot recolors `r`
/// edges from random lists of `r + beta` candidates:
/// `r (r-1)! / ((beta+1)(beta+2)...(beta+r-1))`. Evaluated through `ln Γ`
/// so the cost does not grow with `r`.
pub fn repair_failure_bound(r: u64, beta: u64) -> Result<f64, DomainError> {
    require(r >= 2, "r", r as f64, "r >= 2")?;
    require(beta >= 1, "beta", beta as f64, "beta >= 1")?;
    let (r, beta) = (r as f64, beta as f64);
    Ok((r.ln() + ln_gamma(r) - ln_gamma(beta + r) + ln_gamma(beta + 1.0)).exp())
}

/// A bound evaluation request, as accepted on the command line and in
/// experiment files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "bound", rename_all = "snake_case")]
pub enum TailBoundQuery {
    Chernoff { n: u64, p: f64, t: f64 },
    Talagrand { c: f64, r: f64, expectation: f64, t: f64 },
    LocalLemma { p: f64, d: u64 },
    BinomialSandwich { a: u64, b: u64 },
    SymdiffCollision { k: u64, delta: u64, d: u64, a: f64 },
    RepairFailure { r: u64, beta: u64 },
}

impl TailBoundQuery {
    /// Evaluates the query into named values, in a stable order.
    pub fn evaluate(&self) -> Result<Vec<(&'static str, f64)>, DomainError> {
        match *self {
            TailBoundQuery::Chernoff { n, p, t } => {
                Ok(vec![("tail", chernoff_tail(n, p, t)?)])
            }
            TailBoundQuery::Talagrand { c, r, expectation, t } => {
                let b = talagrand_tail(c, r, expectation, t)?;
                Ok(vec![("deviation", b.deviation), ("probability", b.probability)])
            }
            TailBoundQuery::LocalLemma { p, d } => {
                let c = lll_condition(p, d)?;
                Ok(vec![("value", c.value), ("holds", if c.holds { 1.0 } else { 0.0 })])
            }
            TailBoundQuery::BinomialSandwich { a, b } => {
                let s = binomial_sandwich(a, b)?;
                Ok(vec![("lower", s.lower), ("exact", s.exact), ("upper", s.upper)])
            }
            TailBoundQuery::SymdiffCollision { k, delta, d, a } => Ok(vec![
                ("bound", symdiff_collision_bound(k, delta, d, a)?),
                ("bound_ln", symdiff_collision_bound_ln(k, delta, d, a)?),
            ]),
            TailBoundQuery::RepairFailure { r, beta } => {
                Ok(vec![("bound", repair_failure_bound(r, beta)?)])
            }
        }
    }
}
