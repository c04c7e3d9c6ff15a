//! The `ricci` command-line front end.
//!
//! Exit status: 0 success, 1 domain error (JSON on stderr), 2 usage error,
//! 3 a `check` found a violation.

pub mod render;

pub use render::export_dot;

use crate::curvature::{
    bound_suite, concavity_check, contraction_with, diameter_bound_check, propagation_with, sweep_with,
    CurvatureEngine, CurvatureError, DiameterMode, DiameterVerdict, EdgeValue, SweepMode,
};
use crate::directed::DirectedError;
use crate::graph::generate::sbm_generate;
use crate::graph::{parse_graph_text, Graph, GraphError, Vertex};
use crate::measures::{MeasureError, VertexMeasure};
use crate::netalgo::{
    adjusted_rand_index, curvature_rewire, negative_edge_removal_cluster, ricci_flow_weights, threshold_sweep_cluster,
    FlowParams, NetError, RemovalParams, RewireParams,
};
use crate::par::{self, Execution};
use crate::rational::{one, parse_rational, rat, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use render::{add_floats, opt_rational, rational, to_text};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "ricci", version, about = "Exact discrete Ricci curvature on graphs and digraphs")]
pub struct Cli {
    /// Worker threads for curvature sweeps. Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ollivier-Ricci curvature of the lazy walk on every edge.
    Curvature(CurvatureArgs),
    /// Lin-Lu-Yau curvature on every edge.
    Lly(LlyArgs),
    /// Community detection.
    Cluster(ClusterArgs),
    /// Curvature-guided rewiring; writes the new edge list.
    Rewire(RewireArgs),
    /// Random graph generators.
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Executable curvature inequalities; exit 3 on a violation.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Edge list (`u v [w]` per line) or JSON graph dump.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write decimal `*_f64` fields.
    #[arg(long)]
    pub floats: bool,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[arg(long, value_parser = rational_arg, default_value = "0")]
    pub alpha: Rational,
    /// Read arcs and use the out-degree walk.
    #[arg(long)]
    pub directed: bool,
    /// Include an optimal transport plan per edge.
    #[arg(long)]
    pub emit_plan: bool,
    /// Also write a DOT rendering.
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LlyArgs {
    #[command(flatten)]
    pub io: InputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClusterMethod {
    Flow,
    Remove,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[arg(long, value_enum, default_value = "flow")]
    pub method: ClusterMethod,
    #[arg(long, value_parser = rational_arg, default_value = "1/2")]
    pub nu: Rational,
    #[arg(long, default_value_t = 1e-4)]
    pub eps: f64,
    #[arg(long = "eps-d", default_value_t = 1e-4)]
    pub eps_d: f64,
    /// Flow iterations.
    #[arg(short = 'T', long = "iterations", default_value_t = 20)]
    pub iterations: usize,
    #[arg(long, value_parser = rational_arg, default_value = "0")]
    pub alpha: Rational,
    #[arg(long = "min-size", default_value_t = 1)]
    pub min_size: usize,
    /// Stop removing edges at this many communities.
    #[arg(long)]
    pub communities: Option<usize>,
    /// Ground-truth labels (as written by `generate sbm --labels`) for ARI.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RewireArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Edges to add.
    #[arg(long, default_value_t = 0)]
    pub h: usize,
    /// Edges to remove.
    #[arg(long, default_value_t = 0)]
    pub l: usize,
    #[arg(long)]
    pub heuristic: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = rational_arg, default_value = "0")]
    pub alpha: Rational,
}

#[derive(Debug, Subcommand)]
pub enum GenerateCommand {
    /// Stochastic block model with balanced round-robin blocks.
    Sbm(SbmArgs),
}

#[derive(Debug, Args)]
pub struct SbmArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long = "p-in")]
    pub p_in: f64,
    #[arg(long = "p-out")]
    pub p_out: f64,
    #[arg(long)]
    pub directed: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write block labels as JSON.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Bounds,
    Concavity,
    Contraction,
    Diameter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurvatureKind {
    Orc,
    Lly,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub kind: CheckKind,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = rational_arg, default_value = "0")]
    pub alpha: Rational,
    /// Comma-separated increasing alpha grid starting at 0.
    #[arg(long, default_value = "0,1/4,1/2,3/4")]
    pub grid: String,
    /// Curvature notion for the diameter bound.
    #[arg(long, value_enum, default_value = "orc")]
    pub mode: CurvatureKind,
    /// Random measure pairs for the contraction check.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// A failure reported as `{"error": {"kind", "message"}}` on stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Self { kind, message: message.into() }
    }

    pub fn to_json(&self) -> String {
        json!({"error": {"kind": self.kind, "message": self.message}}).to_string()
    }
}

macro_rules! cli_error_from {
    ($($ty:ty => $kind:literal),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::new($kind, e.to_string())
            }
        })*
    };
}

cli_error_from!(
    GraphError => "graph",
    CurvatureError => "curvature",
    MeasureError => "measure",
    DirectedError => "directed",
    NetError => "network",
    std::io::Error => "io",
);

/// What a command produced.
enum Outcome {
    Json(Value),
    Text(String, Value),
    Check { report: Value, passed: bool },
}

struct Context {
    command: String,
    params: Map<String, Value>,
    input_sha256: Option<String>,
    seed: Option<u64>,
    exec: Execution,
}

impl Context {
    fn new(command: &str) -> Self {
        Self { command: command.into(), params: Map::new(), input_sha256: None, seed: None, exec: Execution::default() }
    }

    fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.into(), value.into());
    }

    fn read_graph(&mut self, path: &Path, directed: bool) -> Result<Graph, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
        self.input_sha256 = Some(hex::encode(Sha256::digest(&bytes)));
        let text = String::from_utf8(bytes).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
        Ok(parse_graph_text(&text, directed)?)
    }

    /// Run description without wall-clock data, so reruns digest identically.
    fn manifest(&self) -> Value {
        json!({
            "command": self.command,
            "params": self.params,
            "input_sha256": self.input_sha256,
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))
}

/// Parses `argv`, runs the command and returns the exit status. Results go
/// to `--out` or stdout; errors go to stderr as JSON.
pub fn run_from<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let threads = cli.threads;
    match par::with_threads(threads, || run(cli)) {
        Ok(status) => status,
        Err(e) => {
            eprintln!("{}", e.to_json());
            EXIT_DOMAIN
        }
    }
}

/// Runs a parsed command. `Ok` carries the exit status.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    let started = Instant::now();
    let (ctx, outcome, out) = match cli.command {
        Command::Curvature(a) => {
            let (ctx, o) = curvature(&a)?;
            (ctx, o, a.io.out)
        }
        Command::Lly(a) => {
            let (ctx, o) = lly(&a)?;
            (ctx, o, a.io.out)
        }
        Command::Cluster(a) => {
            let (ctx, o) = cluster(&a)?;
            (ctx, o, a.io.out)
        }
        Command::Rewire(a) => {
            let (ctx, o) = rewire(&a)?;
            (ctx, o, a.out)
        }
        Command::Generate(GenerateCommand::Sbm(a)) => {
            let (ctx, o) = generate_sbm(&a)?;
            (ctx, o, a.out)
        }
        Command::Check(a) => {
            let (ctx, o) = check(&a)?;
            (ctx, o, a.out)
        }
    };
    let manifest = ctx.manifest();
    let (text, sidecar, status) = match outcome {
        Outcome::Json(mut v) => {
            v["manifest"] = manifest;
            (to_text(&v), None, 0)
        }
        Outcome::Text(text, report) => (text, Some(json!({"manifest": manifest, "report": report})), 0),
        Outcome::Check { mut report, passed } => {
            report["manifest"] = manifest;
            report["passed"] = json!(passed);
            (to_text(&report), None, if passed { 0 } else { EXIT_CHECK_FAILED })
        }
    };
    match out {
        Some(path) => {
            write(&path, &text)?;
            if let Some(side) = sidecar {
                write(&sidecar_path(&path, "manifest.json"), &to_text(&side))?;
            }
            let timing = json!({
                "command": ctx.command,
                "threads": rayon_threads(),
                "elapsed_ms": started.elapsed().as_secs_f64() * 1e3,
            });
            write(&sidecar_path(&path, "timing.json"), &to_text(&timing))?;
        }
        None => print!("{text}"),
    }
    Ok(status)
}

fn sidecar_path(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn rayon_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

fn curvature(a: &CurvatureArgs) -> Result<(Context, Outcome), CliError> {
    let floats = a.io.floats;
    let mut ctx = Context::new("curvature");
    ctx.param("alpha", rational(&a.alpha));
    ctx.param("directed", a.directed);
    ctx.param("emit_plan", a.emit_plan);
    ctx.param("floats", floats);
    let g = ctx.read_graph(&a.io.input, a.directed)?;
    if !g.is_directed() && g.is_weighted() {
        return Err(CurvatureError::WeightedUnsupported.into());
    }
    let engine = CurvatureEngine::with_execution(&g, ctx.exec);
    let sweep = sweep_with(&engine, &SweepMode::Orc(a.alpha.clone()), a.emit_plan, ctx.exec);
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for e in sweep {
        match e.outcome {
            Ok(EdgeValue::Orc(r)) => {
                rows.push(render::record(&g, &r, floats));
                records.push(r);
            }
            Ok(EdgeValue::Lly(_)) => unreachable!("ORC sweep"),
            Err(err) => rows.push(json!({"u": g.name(e.u), "v": g.name(e.v), "error": err.to_string()})),
        }
    }
    if let Some(path) = &a.dot {
        write(path, &export_dot(&g, &records))?;
    }
    Ok((ctx, Outcome::Json(json!({"directed": g.is_directed(), "edges": rows}))))
}

fn lly(a: &LlyArgs) -> Result<(Context, Outcome), CliError> {
    let mut ctx = Context::new("lly");
    ctx.param("floats", a.io.floats);
    let g = ctx.read_graph(&a.io.input, false)?;
    if g.is_weighted() {
        return Err(CurvatureError::WeightedUnsupported.into());
    }
    let engine = CurvatureEngine::with_execution(&g, ctx.exec);
    let rows: Vec<Value> = sweep_with(&engine, &SweepMode::Lly, false, ctx.exec)
        .into_iter()
        .map(|e| match e.outcome {
            Ok(EdgeValue::Lly(l)) => {
                let mut obj = Map::new();
                obj.insert("u".into(), json!(g.name(e.u)));
                obj.insert("v".into(), json!(g.name(e.v)));
                obj.insert("lly".into(), rational(&l.value));
                obj.insert("steps".into(), json!(l.steps));
                add_floats(&mut obj, a.io.floats, &[("lly", Some(&l.value))]);
                Value::Object(obj)
            }
            Ok(EdgeValue::Orc(_)) => unreachable!("LLY sweep"),
            Err(err) => json!({"u": g.name(e.u), "v": g.name(e.v), "error": err.to_string()}),
        })
        .collect();
    Ok((ctx, Outcome::Json(json!({"edges": rows}))))
}

fn read_truth(path: &Path, g: &Graph) -> Result<Vec<usize>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::new("input", format!("{}: {e}", path.display())))?;
    let map = v
        .get("labels")
        .and_then(Value::as_object)
        .ok_or_else(|| CliError::new("input", "truth file needs a \"labels\" object"))?;
    (0..g.n())
        .map(|u| {
            map.get(&g.name(u))
                .and_then(Value::as_u64)
                .map(|l| l as usize)
                .ok_or_else(|| CliError::new("input", format!("no label for vertex {}", g.name(u))))
        })
        .collect()
}

fn cluster(a: &ClusterArgs) -> Result<(Context, Outcome), CliError> {
    let mut ctx = Context::new("cluster");
    let method = match a.method {
        ClusterMethod::Flow => "flow",
        ClusterMethod::Remove => "remove",
    };
    ctx.param("method", method);
    ctx.param("alpha", rational(&a.alpha));
    let g = ctx.read_graph(&a.io.input, false)?;
    let assignment = match a.method {
        ClusterMethod::Flow => {
            ctx.param("nu", rational(&a.nu));
            ctx.param("eps", a.eps);
            ctx.param("eps_d", a.eps_d);
            ctx.param("iterations", a.iterations);
            let p = FlowParams { nu: a.nu.clone(), eps: a.eps, eps_d: a.eps_d, iterations: a.iterations, alpha: a.alpha.clone() };
            let t = ricci_flow_weights(&g, &p, ctx.exec)?;
            threshold_sweep_cluster(&g, t.last(), &p)?
        }
        ClusterMethod::Remove => {
            ctx.param("min_size", a.min_size);
            ctx.param("communities", a.communities);
            let p = RemovalParams { alpha: a.alpha.clone(), min_size: a.min_size, target_communities: a.communities };
            negative_edge_removal_cluster(&g, &p, ctx.exec)?
        }
    };
    let ari = match &a.truth {
        Some(path) => Some(adjusted_rand_index(&assignment.labels, &read_truth(path, &g)?)?),
        None => None,
    };
    Ok((
        ctx,
        Outcome::Json(json!({
            "method": method,
            "labels": render::labels(&g, &assignment.labels),
            "num_communities": assignment.num_communities,
            "modularity": assignment.modularity,
            "ari": ari,
        })),
    ))
}

fn rewire(a: &RewireArgs) -> Result<(Context, Outcome), CliError> {
    let mut ctx = Context::new("rewire");
    ctx.param("h", a.h);
    ctx.param("l", a.l);
    ctx.param("heuristic", a.heuristic);
    ctx.param("alpha", rational(&a.alpha));
    ctx.seed = Some(a.seed);
    let g = ctx.read_graph(&a.input, false)?;
    let p = RewireParams { heuristic: a.heuristic, add: a.h, remove: a.l, alpha: a.alpha.clone(), seed: a.seed };
    let r = curvature_rewire(&g, &p, ctx.exec)?;
    let names = |es: &[(Vertex, Vertex)]| -> Vec<[String; 2]> { es.iter().map(|&(u, v)| [g.name(u), g.name(v)]).collect() };
    let report = json!({"added": names(&r.added), "removed": names(&r.removed), "disconnected": r.disconnected});
    Ok((ctx, Outcome::Text(r.graph.to_edge_list(), report)))
}

fn generate_sbm(a: &SbmArgs) -> Result<(Context, Outcome), CliError> {
    let mut ctx = Context::new("generate sbm");
    ctx.param("n", a.n);
    ctx.param("k", a.k);
    ctx.param("p_in", a.p_in);
    ctx.param("p_out", a.p_out);
    ctx.param("directed", a.directed);
    ctx.seed = Some(a.seed);
    let (g, labels) = sbm_generate(a.n, a.k, a.p_in, a.p_out, a.directed, a.seed)?;
    if let Some(path) = &a.labels {
        write(path, &to_text(&json!({"manifest": ctx.manifest(), "labels": render::labels(&g, &labels)})))?;
    }
    let report = json!({"edges": g.edge_count()});
    Ok((ctx, Outcome::Text(g.to_edge_list(), report)))
}

fn parse_grid(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(|s| parse_rational(s.trim()).map_err(|e| CliError::new("usage", format!("--grid: {e}"))))
        .collect()
}

/// Random measure on at most 4 vertices with masses in multiples of 1/12.
fn random_measure(rng: &mut ChaCha8Rng, n: usize) -> VertexMeasure {
    let atoms = rng.random_range(1..=4usize.min(n));
    let mut cuts: Vec<i64> = (0..atoms - 1).map(|_| rng.random_range(0..=12)).collect();
    cuts.push(0);
    cuts.push(12);
    cuts.sort_unstable();
    let entries = cuts.windows(2).map(|w| (rng.random_range(0..n), rat(w[1] - w[0], 12)));
    VertexMeasure::new(entries.collect::<Vec<_>>()).expect("masses sum to one")
}

fn measure_json(g: &Graph, m: &VertexMeasure) -> Value {
    let map: Map<String, Value> = m.iter().map(|(v, r)| (g.name(v), rational(r))).collect();
    Value::Object(map)
}

fn check(a: &CheckArgs) -> Result<(Context, Outcome), CliError> {
    let kind = match a.kind {
        CheckKind::Bounds => "bounds",
        CheckKind::Concavity => "concavity",
        CheckKind::Contraction => "contraction",
        CheckKind::Diameter => "diameter",
    };
    let mut ctx = Context::new(&format!("check {kind}"));
    let g = ctx.read_graph(&a.input, false)?;
    let (report, passed) = match a.kind {
        CheckKind::Bounds => {
            ctx.param("grid", a.grid.as_str());
            let reports = bound_suite(&g, &parse_grid(&a.grid)?, ctx.exec)?;
            let passed = reports.iter().all(|r| r.holds());
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "u": g.name(r.u), "v": g.name(r.v),
                        "kappa0": rational(&r.kappa0),
                        "jost_liu": rational(&r.jost_liu),
                        "triangle": rational(&r.triangle),
                        "tree_equality": r.tree_equality,
                        "lower_bounds_hold": r.lower_bounds_hold,
                        "upper_bound_holds": r.upper_bound_holds,
                        "phi_monotone": r.phi_monotone,
                        "concave": r.concave,
                    })
                })
                .collect();
            let failures: Vec<Value> =
                reports.iter().zip(&rows).filter(|(r, _)| !r.holds()).map(|(_, row)| row.clone()).collect();
            (json!({"edges": rows, "counterexamples": failures}), passed)
        }
        CheckKind::Concavity => {
            ctx.param("grid", a.grid.as_str());
            let grid = parse_grid(&a.grid)?;
            let mut rows = Vec::new();
            let mut failures = Vec::new();
            for (u, v) in g.edges() {
                let r = concavity_check(&g, u, v, &grid)?;
                let values: Vec<Value> = r.values.iter().map(|(al, k)| json!([rational(al), rational(k)])).collect();
                let row = json!({
                    "u": g.name(u), "v": g.name(v),
                    "values": values,
                    "concave": r.concave,
                    "phi_monotone": r.phi_monotone,
                    "violation": r.violation.as_ref().map(|(x, y, z)| json!([rational(x), rational(y), rational(z)])),
                });
                if !(r.concave && r.phi_monotone) {
                    failures.push(row.clone());
                }
                rows.push(row);
            }
            let passed = failures.is_empty();
            (json!({"edges": rows, "counterexamples": failures}), passed)
        }
        CheckKind::Contraction => {
            ctx.param("alpha", rational(&a.alpha));
            ctx.param("samples", a.samples);
            ctx.seed = Some(a.seed);
            if !g.is_connected() {
                return Err(CurvatureError::Disconnected.into());
            }
            let engine = CurvatureEngine::with_execution(&g, ctx.exec);
            let k = propagation_with(&engine, &a.alpha, ctx.exec)?.k_pair.unwrap_or_else(one);
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let mut rows = Vec::new();
            let mut failures = Vec::new();
            for _ in 0..a.samples {
                let mu = random_measure(&mut rng, g.n());
                let nu = random_measure(&mut rng, g.n());
                let r = contraction_with(&engine, &a.alpha, &k, &mu, &nu)?;
                let row = json!({
                    "mu": measure_json(&g, &mu), "nu": measure_json(&g, &nu),
                    "lhs": rational(&r.lhs), "rhs": rational(&r.rhs), "holds": r.holds,
                });
                if !r.holds {
                    failures.push(row.clone());
                }
                rows.push(row);
            }
            let passed = failures.is_empty();
            (json!({"k": rational(&k), "samples": rows, "counterexamples": failures}), passed)
        }
        CheckKind::Diameter => {
            let mode = match a.mode {
                CurvatureKind::Orc => {
                    ctx.param("alpha", rational(&a.alpha));
                    DiameterMode::Orc(a.alpha.clone())
                }
                CurvatureKind::Lly => DiameterMode::Lly,
            };
            ctx.param("mode", if a.mode == CurvatureKind::Orc { "orc" } else { "lly" });
            let r = diameter_bound_check(&g, &mode)?;
            let verdict = match r.verdict {
                DiameterVerdict::Holds => "holds",
                DiameterVerdict::Violated => "violated",
                DiameterVerdict::NonpositiveCurvature => "nonpositive curvature (no bound)",
            };
            let report = json!({
                "k_min": opt_rational(r.k_min.as_ref()),
                "diameter": rational(&r.diameter),
                "sup_jump": opt_rational(r.sup_jump.as_ref()),
                "bound": opt_rational(r.bound.as_ref()),
                "verdict": verdict,
            });
            (report, r.verdict != DiameterVerdict::Violated)
        }
    };
    Ok((ctx, Outcome::Check { report, passed }))
}

#[cfg(test)]
mod tests;
