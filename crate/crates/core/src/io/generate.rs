//! Seeded generators for the graph families the experiments run on.
//!
//! Deterministic families are built directly. The random ones (gnp and
//! random regular) take a seed, either embedded in the family text or
//! inherited from the experiment, and are pure functions of it.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::MultiGraph;

use super::IoError;

/// Expands one global 64-bit seed into independent named streams. The
/// stream id is a pure function of (seed, label, index), FNV-1a over the
/// label pushed through the SplitMix64 finalizer, so adding a new consumer
/// never perturbs existing ones.
#[derive(Clone, Copy, Debug)]
pub struct SeedSplitter {
    base: u64,
}

impl SeedSplitter {
    pub fn new(seed: u64) -> SeedSplitter {
        SeedSplitter { base: seed }
    }

    pub fn stream(&self, label: &str, index: u64) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in label.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        let mut z = self
            .base
            .wrapping_add(h)
            .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn rng(&self, label: &str, index: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.stream(label, index))
    }
}

/// A graph family, as written on the command line: `path 5`, `cycle 7`,
/// `complete 4`, `complete_bipartite 3 4`, `gnp 100 0.25 [seed]`,
/// `regular 50 6 [seed]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Path { n: u32 },
    Cycle { n: u32 },
    Complete { n: u32 },
    CompleteBipartite { a: u32, b: u32 },
    Gnp { n: u32, p: f64, seed: Option<u64> },
    Regular { n: u32, d: u32, seed: Option<u64> },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Path { n } => write!(f, "path {n}"),
            Family::Cycle { n } => write!(f, "cycle {n}"),
            Family::Complete { n } => write!(f, "complete {n}"),
            Family::CompleteBipartite { a, b } => write!(f, "complete_bipartite {a} {b}"),
            Family::Gnp { n, p, seed } => match seed {
                Some(s) => write!(f, "gnp {n} {p} {s}"),
                None => write!(f, "gnp {n} {p}"),
            },
            Family::Regular { n, d, seed } => match seed {
                Some(s) => write!(f, "regular {n} {d} {s}"),
                None => write!(f, "regular {n} {d}"),
            },
        }
    }
}

impl Family {
    pub fn parse(text: &str) -> Result<Family, IoError> {
        let bad = |reason: &str| IoError::BadFamily {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let arg = |i: usize| -> Result<u32, IoError> {
            tokens
                .get(i)
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad("expected a nonnegative integer argument"))
        };
        let seed_arg = |i: usize| -> Result<Option<u64>, IoError> {
            match tokens.get(i) {
                None => Ok(None),
                Some(t) => t.parse().map(Some).map_err(|_| bad("seed must be a u64")),
            }
        };
        let expect_len = |len: usize| -> Result<(), IoError> {
            if tokens.len() == len {
                Ok(())
            } else {
                Err(bad("wrong number of arguments"))
            }
        };
        match tokens.first().copied() {
            Some("path") => {
                expect_len(2)?;
                Ok(Family::Path { n: arg(1)? })
            }
            Some("cycle") => {
                expect_len(2)?;
                Ok(Family::Cycle { n: arg(1)? })
            }
            Some("complete") => {
                expect_len(2)?;
                Ok(Family::Complete { n: arg(1)? })
            }
            Some("complete_bipartite") => {
                expect_len(3)?;
                Ok(Family::CompleteBipartite { a: arg(1)?, b: arg(2)? })
            }
            Some("gnp") => {
                if tokens.len() != 3 && tokens.len() != 4 {
                    return Err(bad("wrong number of arguments"));
                }
                let p: f64 = tokens[2].parse().map_err(|_| bad("p must be a real"))?;
                Ok(Family::Gnp { n: arg(1)?, p, seed: seed_arg(3)? })
            }
            Some("regular") => {
                if tokens.len() != 3 && tokens.len() != 4 {
                    return Err(bad("wrong number of arguments"));
                }
                Ok(Family::Regular { n: arg(1)?, d: arg(2)?, seed: seed_arg(3)? })
            }
            _ => Err(bad(
                "known families: path, cycle, complete, complete_bipartite, gnp, regular",
            )),
        }
    }

    /// Builds the graph. Random families use their embedded seed if one was
    /// given, otherwise `fallback_seed`.
    pub fn generate(&self, fallback_seed: u64) -> Result<Arc<MultiGraph>, IoError> {
        let infeasible = |reason: &str| IoError::InfeasibleFamily {
            family: self.to_string(),
            reason: reason.to_string(),
        };
        let build = |n: u32, edges: Vec<(u32, u32)>| {
            Arc::new(MultiGraph::build(n, &edges, 1).expect("generators emit simple graphs"))
        };
        match *self {
            Family::Path { n } => {
                let edges = (1..n).map(|i| (i - 1, i)).collect();
                Ok(build(n, edges))
            }
            Family::Cycle { n } => {
                if n < 3 {
                    return Err(infeasible("a cycle needs at least 3 vertices"));
                }
                let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
                Ok(build(n, edges))
            }
            Family::Complete { n } => {
                let mut edges = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        edges.push((i, j));
                    }
                }
                Ok(build(n, edges))
            }
            Family::CompleteBipartite { a, b } => {
                let mut edges = Vec::new();
                for i in 0..a {
                    for j in 0..b {
                        edges.push((i, a + j));
                    }
                }
                Ok(build(a + b, edges))
            }
            Family::Gnp { n, p, seed } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(infeasible("p must lie in [0, 1]"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(fallback_seed));
                let mut edges = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        if rng.gen::<f64>() < p {
                            edges.push((i, j));
                        }
                    }
                }
                Ok(build(n, edges))
            }
            Family::Regular { n, d, seed } => {
                if d >= n.max(1) {
                    return Err(infeasible("degree must be below the vertex count"));
                }
                if (n as u64 * d as u64) % 2 != 0 {
                    return Err(infeasible("n * d must be even"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(fallback_seed));
                let edges = random_regular(n, d, &mut rng).ok_or_else(|| {
                    infeasible("pairing model failed to produce a simple graph")
                })?;
                Ok(build(n, edges))
            }
        }
    }
}

/// Pairing-model sampler in the suitable-pair variant: keep joining two
/// random free stubs whose vertices are distinct and not yet adjacent,
/// restarting from scratch on a dead end. Plain rejection of whole
/// pairings would accept with probability about e^((1-d^2)/4), hopeless
/// already at d around 10; joining only suitable pairs keeps every
/// intermediate state extendable in practice and stays seed-deterministic.
fn random_regular(n: u32, d: u32, rng: &mut ChaCha8Rng) -> Option<Vec<(u32, u32)>> {
    if d == 0 {
        return Some(Vec::new());
    }
    'attempt: for _ in 0..200 {
        let mut stubs: Vec<u32> = (0..n).flat_map(|v| std::iter::repeat(v).take(d as usize)).collect();
        stubs.shuffle(rng);
        let mut present: HashSet<(u32, u32)> = HashSet::new();
        let mut edges: Vec<(u32, u32)> = Vec::with_capacity(stubs.len() / 2);
        while !stubs.is_empty() {
            let mut joined = false;
            for _ in 0..100 {
                let i = rng.gen_range(0..stubs.len());
                let j = rng.gen_range(0..stubs.len());
                let (u, v) = (stubs[i], stubs[j]);
                if i == j || u == v || present.contains(&(u.min(v), u.max(v))) {
                    continue;
                }
                present.insert((u.min(v), u.max(v)));
                edges.push((u, v));
                stubs.swap_remove(i.max(j));
                stubs.swap_remove(i.min(j));
                joined = true;
                break;
            }
            if joined {
                continue;
            }
            // Random draws keep colliding: scan for any suitable pair at
            // all before declaring this pairing stuck.
            let found = (0..stubs.len()).find_map(|i| {
                (i + 1..stubs.len())
                    .find(|&j| {
                        let (u, v) = (stubs[i], stubs[j]);
                        u != v && !present.contains(&(u.min(v), u.max(v)))
                    })
                    .map(|j| (i, j))
            });
            match found {
                Some((i, j)) => {
                    let (u, v) = (stubs[i], stubs[j]);
                    present.insert((u.min(v), u.max(v)));
                    edges.push((u, v));
                    stubs.swap_remove(j);
                    stubs.swap_remove(i);
                }
                None => continue 'attempt,
            }
        }
        return Some(edges);
    }
    None
}
