//! File formats, graph generators, and the experiment runner behind the
//! command-line binary.
//!
//! Everything here is plumbing: graphs travel as edge-list text, colorings
//! and reports as JSON, and a single 64-bit seed determines every random
//! choice an experiment makes. The binary itself only parses flags and
//! hands an [`ExperimentSpec`] to [`run`].

use thiserror::Error;

use crate::graph::GraphError;

mod experiment;
mod format;
mod generate;

pub use experiment::{run, Command, ExperimentSpec, GraphSource, ParamsChoice};
pub use format::{
    coloring_from_file, coloring_to_file, parse_edge_list, serialize_edge_list, ColoringFile,
};
pub use generate::{Family, SeedSplitter};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("coloring file does not fit the graph: {reason}")]
    BadColoring { reason: String },
    #[error("cannot parse family {text:?}: {reason}")]
    BadFamily { text: String, reason: String },
    #[error("cannot generate {family}: {reason}")]
    InfeasibleFamily { family: String, reason: String },
}
