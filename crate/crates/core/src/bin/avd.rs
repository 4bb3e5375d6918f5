//! `avd`: adjacent-vertex-distinguishing edge coloring from the command line.
//!
//! Every subcommand builds an [`ExperimentSpec`] and hands it to
//! [`avd_coloring::io::run`], which owns all semantics. Machine output (JSON,
//! or edge-list text for `gen`) goes to `--out` or standard out; a one-line
//! summary goes to standard error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use avd_coloring::bounds::TailBoundQuery;
use avd_coloring::io::{run, Command, ExperimentSpec, GraphSource, ParamsChoice};

#[derive(Parser)]
#[command(name = "avd", version, about = "avd edge coloring: pipeline, exact solver, bounds, Monte Carlo")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphArgs {
    /// Edge-list file: "n m" header, then one "u v" line per edge.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Generated graph, e.g. "cycle 9", "gnp 100 0.25 7", "regular 50 4 1".
    #[arg(long, value_name = "SPEC")]
    family: Option<String>,
}

impl GraphArgs {
    fn source(self) -> GraphSource {
        match (self.input, self.family) {
            (Some(path), None) => GraphSource::Input(path),
            (None, Some(text)) => GraphSource::Family(text),
            _ => unreachable!("clap enforces exactly one of --input/--family"),
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Global seed; every random stream in the run derives from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard out.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Machine output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Args)]
struct ParamArgs {
    /// Constant profile the pipeline starts from.
    #[arg(long, value_enum, default_value_t = Profile::Scaled)]
    profile: Profile,
    /// Override one pipeline constant, e.g. --params recovery_threshold=29.
    /// Repeatable; fractions read as "num/den".
    #[arg(long = "params", value_name = "FIELD=VALUE", value_parser = parse_override)]
    params: Vec<(String, String)>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    /// Published ratios rescaled to the input graph's max degree.
    Scaled,
    /// The published constants verbatim (meant for huge max degree).
    Published,
}

impl From<Profile> for ParamsChoice {
    fn from(p: Profile) -> Self {
        match p {
            Profile::Scaled => ParamsChoice::Scaled,
            Profile::Published => ParamsChoice::Published,
        }
    }
}

fn parse_override(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected FIELD=VALUE, got {s:?}"))
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the randomized coloring pipeline and emit a verified coloring.
    Color {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compute the exact avd chromatic index by branch and bound.
    Exact {
        #[command(flatten)]
        graph: GraphArgs,
        /// Search node budget; 0 means unlimited.
        #[arg(long, default_value_t = 0)]
        budget: u64,
        /// Largest palette to try; 0 means up to the edge count.
        #[arg(long, default_value_t = 0)]
        max_palette: u32,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Check a coloring file against a graph.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        /// Coloring JSON: {"k": K, "colors": [...]}, 0 meaning uncolored.
        #[arg(long, value_name = "PATH")]
        coloring: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit a graph as edge-list text.
    Gen {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evaluate one analytic tail bound.
    Bounds {
        #[command(subcommand)]
        bound: BoundCmd,
    },
    /// Monte Carlo estimates checked against the analytic bounds.
    Mc {
        #[command(subcommand)]
        experiment: McCmd,
    },
}

#[derive(Subcommand)]
enum BoundCmd {
    /// Binomial upper/lower tail exp(-t^2 / 3np).
    Chernoff {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Talagrand-style concentration for c-Lipschitz r-certifiable variables.
    Talagrand {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        expectation: f64,
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Symmetric local lemma check 4 p d <= 1.
    LocalLemma {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        d: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// (a/b)^b <= C(a,b) <= (ea/b)^b.
    BinomialSandwich {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Collision probability bound for a symmetric difference of size k.
    SymdiffCollision {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        delta: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        a: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Union bound for the repair step failing at list size r + slack.
    RepairFailure {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        beta: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Subcommand)]
enum McCmd {
    /// Phase-1 event frequencies on a graph, with Clopper-Pearson intervals.
    Graph {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// Number of independent pipeline trials.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Plain binomial upper-tail frequency, no graph involved.
    Binomial {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        threshold: u64,
        /// Number of binomial samples.
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn spec_from(command: Command, common: CommonArgs) -> ExperimentSpec {
    let mut spec = ExperimentSpec::new(command);
    spec.seed = common.seed;
    spec.out = common.out;
    spec
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = match cli.cmd {
        Cmd::Color { graph, params, common } => {
            let mut spec = spec_from(Command::Color, common);
            spec.source = Some(graph.source());
            spec.params = params.profile.into();
            spec.overrides = params.params;
            spec
        }
        Cmd::Exact { graph, budget, max_palette, common } => {
            let mut spec = spec_from(Command::Exact { budget, max_palette }, common);
            spec.source = Some(graph.source());
            spec
        }
        Cmd::Verify { graph, coloring, common } => {
            let mut spec = spec_from(Command::Verify { coloring }, common);
            spec.source = Some(graph.source());
            spec
        }
        Cmd::Gen { graph, common } => {
            let mut spec = spec_from(Command::Gen, common);
            spec.source = Some(graph.source());
            spec
        }
        Cmd::Bounds { bound } => {
            let (query, common) = match bound {
                BoundCmd::Chernoff { n, p, t, common } => {
                    (TailBoundQuery::Chernoff { n, p, t }, common)
                }
                BoundCmd::Talagrand { c, r, expectation, t, common } => {
                    (TailBoundQuery::Talagrand { c, r, expectation, t }, common)
                }
                BoundCmd::LocalLemma { p, d, common } => {
                    (TailBoundQuery::LocalLemma { p, d }, common)
                }
                BoundCmd::BinomialSandwich { a, b, common } => {
                    (TailBoundQuery::BinomialSandwich { a, b }, common)
                }
                BoundCmd::SymdiffCollision { k, delta, d, a, common } => {
                    (TailBoundQuery::SymdiffCollision { k, delta, d, a }, common)
                }
                BoundCmd::RepairFailure { r, beta, common } => {
                    (TailBoundQuery::RepairFailure { r, beta }, common)
                }
            };
            spec_from(Command::Bounds(query), common)
        }
        Cmd::Mc { experiment } => match experiment {
            McCmd::Graph { graph, params, trials, common } => {
                let mut spec = spec_from(Command::McGraph, common);
                spec.source = Some(graph.source());
                spec.params = params.profile.into();
                spec.overrides = params.params;
                spec.trials = trials;
                spec
            }
            McCmd::Binomial { n, p, threshold, trials, common } => {
                let mut spec = spec_from(Command::McBinomial { n, p, threshold }, common);
                spec.trials = trials;
                spec
            }
        },
    };
    ExitCode::from(u8::try_from(run(&spec)).unwrap_or(1))
}
