//! The experiment runner: one spec in, one report out.
//!
//! Every command is a pure function of its [`ExperimentSpec`], including
//! the seed expansion: graph generation, the coloring pipeline, and Monte
//! Carlo trials each get their own stream from the single global seed, so
//! rerunning a spec reproduces its report byte for byte. Machine output
//! (JSON, or edge-list text for `gen`) goes to the output path or standard
//! out; a one-line human summary goes to standard error.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::bounds::{
    monte_carlo_binomial_tail, monte_carlo_phase1, DomainError, MonteCarloReport, TailBoundQuery,
};
use crate::coloring::ColoringError;
use crate::graph::MultiGraph;
use crate::pipeline::{avd_color_pipeline, ParamsError, PipelineError, PipelineParams, RunReport};
use crate::solver::{avd_chromatic_number, SearchConfig, SolverError};

use super::format::{coloring_from_file, coloring_to_file, parse_edge_list, serialize_edge_list};
use super::generate::{Family, SeedSplitter};
use super::{ColoringFile, IoError};

/// Where the graph comes from: a file on disk or a generator.
#[derive(Clone, Debug)]
pub enum GraphSource {
    Input(PathBuf),
    /// Family text, parsed by [`Family::parse`] when the run needs it.
    Family(String),
}

/// Which constants the pipeline commands start from, before `--params`
/// overrides.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ParamsChoice {
    /// Published ratios scaled to the input graph's max degree.
    #[default]
    Scaled,
    /// The published constants themselves.
    Published,
}

#[derive(Clone, Debug)]
pub enum Command {
    /// Run the randomized pipeline, verify, and emit report + coloring.
    Color,
    /// Exact avd chromatic index by exhaustive search.
    Exact { budget: u64, max_palette: u32 },
    /// Check a coloring file against the graph.
    Verify { coloring: PathBuf },
    /// Emit the graph itself as edge-list text.
    Gen,
    /// Evaluate one analytic bound.
    Bounds(TailBoundQuery),
    /// Estimate phase-1 event frequencies on the graph.
    McGraph,
    /// Estimate a binomial upper tail, no graph involved.
    McBinomial { n: u64, p: f64, threshold: u64 },
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub command: Command,
    pub source: Option<GraphSource>,
    pub params: ParamsChoice,
    /// `(field, value)` overrides applied on top of the profile.
    pub overrides: Vec<(String, String)>,
    pub seed: u64,
    pub trials: u64,
    /// Report destination; standard out when absent.
    pub out: Option<PathBuf>,
}

impl ExperimentSpec {
    /// A spec with the given command and default plumbing: scaled profile,
    /// seed 0, a thousand trials, output to standard out.
    pub fn new(command: Command) -> ExperimentSpec {
        ExperimentSpec {
            command,
            source: None,
            params: ParamsChoice::default(),
            overrides: Vec::new(),
            seed: 0,
            trials: 1000,
            out: None,
        }
    }
}

#[derive(Debug, Error)]
enum RunError {
    #[error("this command needs a graph: pass an input path or a family")]
    MissingGraph,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Format(#[from] IoError),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Bounds(#[from] DomainError),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("pipeline produced an unverified coloring: {reason}")]
    Unverified { reason: String },
}

struct Output {
    code: i32,
    payload: String,
    summary: String,
}

#[derive(Serialize)]
struct ColorOutput<'a> {
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
    report: &'a RunReport,
    coloring: ColoringFile,
}

#[derive(Serialize)]
struct ExactRow {
    graph: String,
    n: u32,
    m: u32,
    delta: u32,
    chi_avd: Option<u32>,
    status: &'static str,
}

#[derive(Serialize)]
struct VerifyOutput {
    status: &'static str,
    total: bool,
    proper: bool,
    avd: bool,
    conflicts: Vec<(u32, u32)>,
    indistinguishable: Vec<(u32, u32)>,
}

#[derive(Serialize)]
struct BoundsOutput<'a> {
    status: &'a str,
    query: &'a TailBoundQuery,
    values: serde_json::Map<String, serde_json::Value>,
}

#[derive(Serialize)]
struct McOutput<'a> {
    status: &'a str,
    report: &'a MonteCarloReport,
    violations: Vec<String>,
}

/// Executes the spec and returns its exit code: 0 on success, 1 on any
/// failure (reported as JSON on the same output), 2 when the output itself
/// cannot be written.
pub fn run(spec: &ExperimentSpec) -> i32 {
    let (code, payload, summary) = match execute(spec) {
        Ok(out) => (out.code, out.payload, out.summary),
        Err(e) => {
            let payload = serde_json::json!({ "status": "error", "error": e.to_string() });
            let mut text = serde_json::to_string_pretty(&payload).expect("error JSON serializes");
            text.push('\n');
            (1, text, format!("error: {e}"))
        }
    };
    if let Err(e) = write_out(spec, &payload) {
        eprintln!("cannot write output: {e}");
        return 2;
    }
    eprintln!("{summary}");
    code
}

fn write_out(spec: &ExperimentSpec, payload: &str) -> std::io::Result<()> {
    match &spec.out {
        Some(path) => fs::write(path, payload),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn json_payload<T: Serialize>(value: &T) -> Result<String, RunError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn load_graph(spec: &ExperimentSpec) -> Result<(Arc<MultiGraph>, String), RunError> {
    match &spec.source {
        None => Err(RunError::MissingGraph),
        Some(GraphSource::Input(path)) => {
            let g = parse_edge_list(&fs::read_to_string(path)?)?;
            Ok((g, path.display().to_string()))
        }
        Some(GraphSource::Family(text)) => {
            let family = Family::parse(text)?;
            let fallback = SeedSplitter::new(spec.seed).stream("gen", 0);
            let g = family.generate(fallback)?;
            Ok((g, family.to_string()))
        }
    }
}

fn resolve_params(spec: &ExperimentSpec, delta: u32) -> Result<PipelineParams, RunError> {
    let mut p = match spec.params {
        ParamsChoice::Scaled => PipelineParams::scaled(delta.max(1)),
        ParamsChoice::Published => PipelineParams::published(),
    };
    for (field, value) in &spec.overrides {
        p.set_field(field, value)?;
    }
    p.validate()?;
    Ok(p)
}

fn execute(spec: &ExperimentSpec) -> Result<Output, RunError> {
    let seeds = SeedSplitter::new(spec.seed);
    match &spec.command {
        Command::Gen => {
            let (g, id) = load_graph(spec)?;
            Ok(Output {
                code: 0,
                payload: serialize_edge_list(&g),
                summary: format!(
                    "{id}: {} vertices, {} edges, max degree {}",
                    g.vertex_count(),
                    g.edge_count(),
                    g.max_degree()
                ),
            })
        }
        Command::Color => {
            let (g, id) = load_graph(spec)?;
            let params = resolve_params(spec, g.max_degree())?;
            let run = avd_color_pipeline(&g, &params, seeds.stream("pipeline", 0))?;
            // The pipeline verifies its own output; re-check here so this
            // command can never emit an unverified coloring even if that
            // contract rots.
            if !run.coloring.verify_proper().is_empty() {
                return Err(RunError::Unverified { reason: "coloring is not proper".into() });
            }
            match run.coloring.verify_avd() {
                Ok(pairs) if pairs.is_empty() => {}
                Ok(pairs) => {
                    return Err(RunError::Unverified {
                        reason: format!("{} adjacent pairs share color sets", pairs.len()),
                    })
                }
                Err(e) => return Err(RunError::Unverified { reason: e.to_string() }),
            }
            let warning = run
                .report
                .fallback_reason
                .as_ref()
                .map(|r| format!("deterministic fallback used: {r}"));
            let payload = json_payload(&ColorOutput {
                status: "ok",
                warning,
                report: &run.report,
                coloring: coloring_to_file(&run.coloring),
            })?;
            let summary = format!(
                "{id}: avd-colored with {} colors (max degree {}){}",
                run.report.palette_size,
                g.max_degree(),
                if run.report.fallback_used { ", via fallback" } else { "" }
            );
            Ok(Output { code: 0, payload, summary })
        }
        Command::Exact { budget, max_palette } => {
            let (g, id) = load_graph(spec)?;
            let config = SearchConfig { node_budget: *budget, max_palette: *max_palette };
            let (chi, status) = match avd_chromatic_number(&g, &config) {
                Ok(res) => (Some(res.chromatic_index), "exact"),
                Err(SolverError::BudgetExhausted { .. }) => (None, "budget"),
                Err(e) => return Err(e.into()),
            };
            let row = ExactRow {
                graph: id.clone(),
                n: g.vertex_count(),
                m: g.edge_count(),
                delta: g.max_degree(),
                chi_avd: chi,
                status,
            };
            let summary = match chi {
                Some(k) => format!("{id}: chi'_a = {k}"),
                None => format!("{id}: search budget exhausted"),
            };
            Ok(Output { code: 0, payload: json_payload(&row)?, summary })
        }
        Command::Verify { coloring } => {
            let (g, id) = load_graph(spec)?;
            let file: ColoringFile = serde_json::from_str(&fs::read_to_string(coloring)?)?;
            let c = coloring_from_file(&g, &file)?;
            let total = c.is_total();
            let conflicts: Vec<(u32, u32)> =
                c.verify_proper().iter().map(|&(e, f)| (e.0, f.0)).collect();
            let (avd, indistinguishable) = match c.verify_avd() {
                Ok(pairs) => {
                    let list: Vec<(u32, u32)> = pairs.iter().map(|&(u, v)| (u.0, v.0)).collect();
                    (list.is_empty(), list)
                }
                Err(_) => (false, Vec::new()),
            };
            let ok = total && conflicts.is_empty() && avd;
            let payload = json_payload(&VerifyOutput {
                status: if ok { "ok" } else { "error" },
                total,
                proper: conflicts.is_empty(),
                avd,
                conflicts,
                indistinguishable,
            })?;
            let summary = if ok {
                format!("{id}: coloring is proper and avd")
            } else {
                format!("{id}: coloring fails verification")
            };
            Ok(Output { code: if ok { 0 } else { 1 }, payload, summary })
        }
        Command::Bounds(query) => {
            let mut values = serde_json::Map::new();
            let mut lines = Vec::new();
            for (name, value) in query.evaluate()? {
                values.insert(name.to_string(), serde_json::json!(value));
                lines.push(format!("{name} = {value:.6e}"));
            }
            let payload = json_payload(&BoundsOutput { status: "ok", query, values })?;
            Ok(Output { code: 0, payload, summary: lines.join(", ") })
        }
        Command::McGraph => {
            let (g, id) = load_graph(spec)?;
            let params = resolve_params(spec, g.max_degree())?;
            let report =
                monte_carlo_phase1(&g, &params, spec.trials.max(1), seeds.stream("mc", 0));
            let violations = report.bound_violations();
            let summary = format!(
                "{id}: {} trials, {} bound violation(s)",
                report.trials,
                violations.len()
            );
            let payload = json_payload(&McOutput { status: "ok", report: &report, violations })?;
            Ok(Output { code: 0, payload, summary })
        }
        Command::McBinomial { n, p, threshold } => {
            let report =
                monte_carlo_binomial_tail(*n, *p, *threshold, spec.trials.max(1), seeds.stream("mc", 0));
            let row = &report.rows[0];
            let summary = format!(
                "Pr[Bin({n}, {p}) > {threshold}] ~ {:.3e} over {} samples",
                row.empirical, report.trials
            );
            let violations = report.bound_violations();
            let payload = json_payload(&McOutput { status: "ok", report: &report, violations })?;
            Ok(Output { code: 0, payload, summary })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_to_json(spec: &ExperimentSpec) -> (i32, serde_json::Value) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        let mut spec = spec.clone();
        spec.out = Some(path.clone());
        let code = run(&spec);
        let value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        (code, value)
    }

    fn family_spec(command: Command, family: &str) -> ExperimentSpec {
        let mut spec = ExperimentSpec::new(command);
        spec.source = Some(GraphSource::Family(family.to_string()));
        spec
    }

    #[test]
    fn color_on_a_single_edge_fails_with_the_isolated_edge_error() {
        let (code, value) = run_to_json(&family_spec(Command::Color, "path 2"));
        assert_eq!(code, 1);
        assert_eq!(value["status"], "error");
        assert!(value["error"].as_str().unwrap().contains("isolated edge"), "{value}");
    }

    #[test]
    fn exact_on_the_five_cycle_reports_five() {
        let (code, value) = run_to_json(&family_spec(
            Command::Exact { budget: 0, max_palette: 0 },
            "cycle 5",
        ));
        assert_eq!(code, 0);
        assert_eq!(value["chi_avd"], 5);
        assert_eq!(value["status"], "exact");
        assert_eq!(value["graph"], "cycle 5");
        assert_eq!(value["n"], 5);
        assert_eq!(value["m"], 5);
        assert_eq!(value["delta"], 2);
    }

    #[test]
    fn exact_budget_exhaustion_is_a_reportable_status() {
        let mut spec = family_spec(Command::Exact { budget: 1, max_palette: 0 }, "complete 5");
        spec.seed = 1;
        let (code, value) = run_to_json(&spec);
        assert_eq!(code, 0);
        assert_eq!(value["status"], "budget");
        assert_eq!(value["chi_avd"], serde_json::Value::Null);
    }

    #[test]
    fn color_emits_a_verified_coloring_and_reproduces_byte_for_byte() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = family_spec(Command::Color, "cycle 7");
        spec.seed = 5;
        let first = dir.path().join("a.json");
        let second = dir.path().join("b.json");
        spec.out = Some(first.clone());
        assert_eq!(run(&spec), 0);
        spec.out = Some(second.clone());
        assert_eq!(run(&spec), 0);
        assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());

        let value: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&first).unwrap()).unwrap();
        assert_eq!(value["status"], "ok");
        assert_eq!(value["report"]["proper"], true);
        assert_eq!(value["report"]["avd"], true);
        assert_eq!(value["coloring"]["colors"].as_array().unwrap().len(), 7);
    }

    #[test]
    fn verify_lists_the_indistinguishable_pairs() {
        // A proper 2-coloring of C4 gives every vertex the same color set.
        let dir = tempfile::tempdir().unwrap();
        let coloring_path = dir.path().join("c.json");
        fs::write(&coloring_path, r#"{"k": 2, "colors": [1, 2, 1, 2]}"#).unwrap();
        let mut spec =
            family_spec(Command::Verify { coloring: coloring_path }, "cycle 4");
        let out = dir.path().join("out.json");
        spec.out = Some(out.clone());
        let code = run(&spec);
        let value: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(code, 1);
        assert_eq!(value["status"], "error");
        assert_eq!(value["proper"], true);
        assert_eq!(value["avd"], false);
        assert_eq!(value["indistinguishable"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn verify_accepts_what_the_solver_produces() {
        let dir = tempfile::tempdir().unwrap();
        // C5 needs 5 colors; any witness must verify.
        let g = Family::parse("cycle 5").unwrap().generate(0).unwrap();
        let res = avd_chromatic_number(&g, &SearchConfig::default()).unwrap();
        let file = coloring_to_file(&res.witness.unwrap());
        let coloring_path = dir.path().join("c.json");
        fs::write(&coloring_path, serde_json::to_string(&file).unwrap()).unwrap();
        let mut spec =
            family_spec(Command::Verify { coloring: coloring_path }, "cycle 5");
        let out = dir.path().join("out.json");
        spec.out = Some(out.clone());
        assert_eq!(run(&spec), 0);
        let value: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(value["status"], "ok");
    }

    #[test]
    fn gen_output_parses_back_to_the_same_family() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = family_spec(Command::Gen, "regular 12 3 7");
        let out = dir.path().join("g.txt");
        spec.out = Some(out.clone());
        assert_eq!(run(&spec), 0);
        let g = parse_edge_list(&fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(g.vertex_count(), 12);
        assert!(g.vertices().all(|v| g.degree(v) == 3));
    }

    #[test]
    fn bounds_chernoff_evaluates_the_closed_form() {
        let query = TailBoundQuery::Chernoff { n: 900_000, p: 180.0 / 900_000.0, t: 110.0 };
        let (code, value) = run_to_json(&ExperimentSpec::new(Command::Bounds(query)));
        assert_eq!(code, 0);
        let tail = value["values"]["tail"].as_f64().unwrap();
        assert!((tail - 3.712e-10).abs() / 3.712e-10 < 1e-3, "{tail}");
        assert_eq!(value["query"]["bound"], "chernoff");
    }

    #[test]
    fn bounds_domain_errors_exit_nonzero() {
        let query = TailBoundQuery::Chernoff { n: 10, p: 0.5, t: 50.0 };
        let (code, value) = run_to_json(&ExperimentSpec::new(Command::Bounds(query)));
        assert_eq!(code, 1);
        assert_eq!(value["status"], "error");
    }

    #[test]
    fn mc_binomial_reports_rows_and_no_violations() {
        let mut spec = ExperimentSpec::new(Command::McBinomial {
            n: 1000,
            p: 0.18,
            threshold: 290,
        });
        spec.trials = 20_000;
        let (code, value) = run_to_json(&spec);
        assert_eq!(code, 0);
        assert_eq!(value["report"]["trials"], 20_000);
        assert_eq!(value["report"]["rows"][0]["event"], "binomial_upper_tail");
        assert_eq!(value["violations"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn mc_graph_runs_on_a_generated_graph() {
        let mut spec = family_spec(Command::McGraph, "regular 24 8 3");
        spec.trials = 50;
        let (code, value) = run_to_json(&spec);
        assert_eq!(code, 0);
        let rows = value["report"]["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0]["samples"], 24 * 50);
    }

    #[test]
    fn missing_graph_is_a_clean_error() {
        let (code, value) = run_to_json(&ExperimentSpec::new(Command::Color));
        assert_eq!(code, 1);
        assert!(value["error"].as_str().unwrap().contains("needs a graph"));
    }

    #[test]
    fn params_overrides_reach_the_report() {
        let mut spec = family_spec(Command::Color, "gnp 40 0.5 2");
        spec.overrides = vec![("max_attempts".into(), "7".into())];
        let (code, value) = run_to_json(&spec);
        assert_eq!(code, 0);
        assert_eq!(value["report"]["params"]["max_attempts"], 7);
        let bad = ExperimentSpec {
            overrides: vec![("nope".into(), "1".into())],
            ..family_spec(Command::Color, "gnp 40 0.5 2")
        };
        let (code, value) = run_to_json(&bad);
        assert_eq!(code, 1);
        assert!(value["error"].as_str().unwrap().contains("nope"));
    }
}
