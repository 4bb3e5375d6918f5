//! Adjacent-vertex-distinguishing (avd) edge coloring toolkit.
//!
//! A proper edge coloring distinguishes adjacent vertices when every pair of
//! neighbors sees a different set of colors on its incident edges. This crate
//! provides:
//!
//! - [`graph`]: a compact immutable multigraph with degree classification,
//! - [`coloring`]: partial edge colorings, verifiers, and a constructive
//!   Vizing-style engine that colors any multigraph with `Δ + μ` colors,
//! - [`solver`]: an exact branch-and-bound search for the avd chromatic index
//!   plus a brute-force enumeration oracle for cross-checking,
//! - [`pipeline`]: a three-step randomized construction (contraction, two
//!   uncoloring phases with resampling, local repair) that produces an avd
//!   coloring with a small additive palette overhead,
//! - [`bounds`]: Chernoff/Talagrand/local-lemma tail evaluators and Monte
//!   Carlo validators for the randomized phases,
//! - [`io`]: edge-list and coloring file formats, seeded graph generators,
//!   and the experiment runner behind the `avd` binary.
//!
//! Every randomized entry point takes an explicit RNG or a 64-bit seed, and
//! identical seeds reproduce identical results byte for byte.
//!
//! The `examples/` directory is the guided tour: each major capability has a
//! runnable example (`cargo run --example exact_small_graphs`, etc.).

pub mod bounds;
pub mod coloring;
pub mod graph;
pub mod io;
pub mod pipeline;
pub mod solver;

pub use coloring::{Palette, PartialEdgeColoring};
pub use graph::{EdgeId, MultiGraph, VertexId};
