//! Command-line front end. JSON and CSV go to stdout (or `--out`),
//! diagnostics to stderr.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 no path between the
//! query vertices, 3 a guard or iteration limit was hit, 4 a verification
//! ran but failed its tolerance.

use std::fs;
use std::io::{self, Write};
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::asymptotics::approx::DEFAULT_SIZE_GUARD;
use crate::asymptotics::{analyze, approx_rate_sweep, solve_log_rate, AsymptoticClass, ComponentSummary};
use crate::enumeration::{
    default_window, enumerate_paths_guarded, fit_asymptotics, FitModel, FitReport, Limit,
    DEFAULT_FRONTIER_GUARD,
};
use crate::error::{Error, Result};
use crate::graph::{parse_graph, VertexId, WeightedDigraph};
use crate::markov::{from_markov_with_map, parse_markov_csv, RowKind};
use crate::structure::{count_variants, enumerate_variants, DEFAULT_VARIANT_GUARD};

pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NO_PATH: i32 = 2;
pub const EXIT_GUARD: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "pathrank", version, about = "Ranked path weights in weighted digraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Query {
    /// Graph JSON file.
    pub graph: PathBuf,
    /// Start vertex name.
    pub v1: String,
    /// End vertex name.
    pub v2: String,
}

#[derive(Debug, Args)]
pub struct Guards {
    /// Maximum number of itinerary variants to list.
    #[arg(long, default_value_t = DEFAULT_VARIANT_GUARD)]
    pub guard_variants: usize,
    /// Maximum number of partial paths kept by the enumerator.
    #[arg(long, default_value_t = DEFAULT_FRONTIER_GUARD)]
    pub guard_frontier: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the ranked weight sequence of all paths between two vertices.
    Analyze {
        #[command(flatten)]
        query: Query,
        /// Include the itinerary variants in the report.
        #[arg(long)]
        explain: bool,
        /// Also enumerate this many paths and fit the top decade.
        #[arg(long)]
        fit_rank: Option<u64>,
        #[command(flatten)]
        guards: Guards,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List paths in non-decreasing weight as CSV.
    Enumerate {
        #[command(flatten)]
        query: Query,
        #[arg(long)]
        max_rank: Option<u64>,
        #[arg(long)]
        max_weight: Option<f64>,
        /// Add a column with the slash-separated edge ids of each path.
        #[arg(long)]
        paths: bool,
        #[command(flatten)]
        guards: Guards,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the analytic rate with a fit to enumerated paths.
    Verify {
        #[command(flatten)]
        query: Query,
        #[arg(long, default_value_t = 100_000)]
        max_rank: u64,
        /// Fit over the top fraction of ranks.
        #[arg(long, default_value_t = 0.9)]
        tail_fraction: f64,
        /// Allowed relative gap; 0.10 for logarithmic, 0.05 for polynomial by default.
        #[arg(long)]
        tolerance: Option<f64>,
        #[command(flatten)]
        guards: Guards,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn a Markov transition matrix (CSV) into a weighted graph.
    ConvertMarkov {
        matrix: PathBuf,
        /// Write the graph here; otherwise it goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rates of uniformly weighted approximations of one component.
    ApproxSweep {
        graph: PathBuf,
        /// Any vertex of the component.
        #[arg(long)]
        component: String,
        /// Comma-separated base weights.
        #[arg(long, value_delimiter = ',', required = true)]
        bases: Vec<f64>,
        /// Maximum vertex count of an approximate graph.
        #[arg(long, default_value_t = DEFAULT_SIZE_GUARD)]
        guard_size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random test graph.
    #[command(hide = true)]
    GenGraph {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        min_weight: f64,
        #[arg(long, default_value_t = 2.0)]
        max_weight: f64,
        /// Start from a ring through all vertices.
        #[arg(long)]
        strong: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoPath { .. } => EXIT_NO_PATH,
        Error::GuardExceeded { .. } | Error::CountOverflow(_) | Error::NoConvergence { .. } => {
            EXIT_GUARD
        }
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { 0 };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "pathrank: {e}");
            exit_code(&e)
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Analyze {
            query,
            explain,
            fit_rank,
            guards,
            out,
        } => {
            let report = cmd_analyze(&query, explain, fit_rank, &guards)?;
            emit_json(&report, out.as_deref(), stdout)?;
            Ok(0)
        }
        Command::Enumerate {
            query,
            max_rank,
            max_weight,
            paths,
            guards,
            out,
        } => {
            let limit = Limit {
                max_rank,
                max_weight,
            };
            match out {
                Some(p) => {
                    let mut f = io::BufWriter::new(fs::File::create(p)?);
                    cmd_enumerate(&query, limit, paths, guards.guard_frontier, &mut f)?;
                    f.flush()?;
                }
                None => cmd_enumerate(&query, limit, paths, guards.guard_frontier, stdout)?,
            }
            Ok(0)
        }
        Command::Verify {
            query,
            max_rank,
            tail_fraction,
            tolerance,
            guards,
            out,
        } => {
            let report = cmd_verify(&query, max_rank, tail_fraction, tolerance, &guards)?;
            emit_json(&report, out.as_deref(), stdout)?;
            if report.pass {
                Ok(0)
            } else {
                writeln!(stderr, "verification failed: {}", report.summary)?;
                Ok(EXIT_VERIFY_FAILED)
            }
        }
        Command::ConvertMarkov { matrix, out } => {
            let (graph, summary) = cmd_convert_markov(&matrix)?;
            writeln!(stderr, "{}", summary["note"].as_str().unwrap_or_default())?;
            match out {
                Some(p) => {
                    fs::write(p, graph.to_json() + "\n")?;
                    writeln!(stdout, "{}", serde_json::to_string_pretty(&summary)?)?;
                }
                None => writeln!(stdout, "{}", graph.to_json())?,
            }
            Ok(0)
        }
        Command::ApproxSweep {
            graph,
            component,
            bases,
            guard_size,
            out,
        } => {
            let csv = cmd_approx_sweep(&graph, &component, &bases, guard_size)?;
            emit_text(&csv, out.as_deref(), stdout)?;
            Ok(0)
        }
        Command::GenGraph {
            vertices,
            edges,
            seed,
            min_weight,
            max_weight,
            strong,
            out,
        } => {
            let g = random_graph(vertices, edges, seed, min_weight, max_weight, strong)?;
            emit_text(&(g.to_json() + "\n"), out.as_deref(), stdout)?;
            Ok(0)
        }
    }
}

fn emit_text(text: &str, out: Option<&FsPath>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json<T: Serialize>(value: &T, out: Option<&FsPath>, stdout: &mut dyn Write) -> Result<()> {
    emit_text(&(serde_json::to_string_pretty(value)? + "\n"), out, stdout)
}

fn read(path: &FsPath) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_query(q: &Query) -> Result<(WeightedDigraph, VertexId, VertexId)> {
    let g = parse_graph(&read(&q.graph)?)?;
    let v1 = g.vertex(&q.v1)?;
    let v2 = g.vertex(&q.v2)?;
    Ok((g, v1, v2))
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub input: InputDigest,
    pub query: QueryRecord,
    pub relevant_vertices: usize,
    pub components: Vec<ComponentSummary>,
    /// `None` when the count overflows.
    pub variant_count: Option<u64>,
    #[serde(flatten)]
    pub class: AsymptoticClass,
    /// Slope of `log P` against `log r` when weights are `-log P`; only for
    /// the logarithmic case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loglog_slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variants: Option<Vec<Value>>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct QueryRecord {
    pub from: String,
    pub to: String,
}

pub fn cmd_analyze(
    q: &Query,
    explain: bool,
    fit_rank: Option<u64>,
    guards: &Guards,
) -> Result<AnalysisReport> {
    let start = Instant::now();
    let (g, v1, v2) = load_query(q)?;
    let analysis = analyze(&g, v1, v2)?;
    let variant_count = match count_variants(&g, &analysis.scc, v1, v2) {
        Ok(n) => Some(n),
        Err(Error::CountOverflow(_)) => None,
        Err(e) => return Err(e),
    };
    let variants = if explain {
        let vs = enumerate_variants(&g, &analysis.scc, v1, v2, guards.guard_variants)?;
        Some(vs.iter().map(|v| v.to_json(&g)).collect())
    } else {
        None
    };
    let fit = match (fit_rank, FitModel::for_class(&analysis.class)) {
        (Some(r), Ok(model)) => {
            let weights = enumerate_weights(&g, v1, v2, r, guards.guard_frontier)?;
            Some(fit_asymptotics(&weights, model, default_window(weights.len()))?)
        }
        _ => None,
    };
    let loglog_slope = match analysis.class {
        AsymptoticClass::Logarithmic { s } => Some(-s),
        _ => None,
    };
    Ok(AnalysisReport {
        input: InputDigest {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
        },
        query: QueryRecord {
            from: q.v1.clone(),
            to: q.v2.clone(),
        },
        relevant_vertices: analysis.relevant.len(),
        components: analysis.components,
        variant_count,
        class: analysis.class,
        loglog_slope,
        fit,
        variants,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn enumerate_weights(
    g: &WeightedDigraph,
    v1: VertexId,
    v2: VertexId,
    max_rank: u64,
    guard: usize,
) -> Result<Vec<f64>> {
    let mut stream = enumerate_paths_guarded(g, v1, v2, Limit::rank(max_rank), guard)?.without_paths();
    let weights: Vec<f64> = stream.by_ref().map(|r| r.weight).collect();
    match stream.error() {
        Some(e) => Err(e.clone()),
        None => Ok(weights),
    }
}

pub fn cmd_enumerate(
    q: &Query,
    limit: Limit,
    with_paths: bool,
    guard: usize,
    out: &mut dyn Write,
) -> Result<()> {
    let (g, v1, v2) = load_query(q)?;
    let mut stream = enumerate_paths_guarded(&g, v1, v2, limit, guard)?;
    if !with_paths {
        stream = stream.without_paths();
    }
    let mut w = io::BufWriter::new(out);
    writeln!(w, "{}", if with_paths { "rank,weight,path" } else { "rank,weight" })?;
    for r in stream.by_ref() {
        if with_paths {
            let ids: Vec<String> = r
                .path
                .as_ref()
                .map(|p| p.edges().iter().map(|e| e.to_string()).collect())
                .unwrap_or_default();
            writeln!(w, "{},{:?},{}", r.rank, r.weight, ids.join("/"))?;
        } else {
            writeln!(w, "{},{:?}", r.rank, r.weight)?;
        }
    }
    w.flush()?;
    match stream.error() {
        Some(e) => Err(e.clone()),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub query: QueryRecord,
    #[serde(flatten)]
    pub class: AsymptoticClass,
    pub enumerated: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitReport>,
    pub pass: bool,
    pub summary: String,
}

pub fn cmd_verify(
    q: &Query,
    max_rank: u64,
    tail_fraction: f64,
    tolerance: Option<f64>,
    guards: &Guards,
) -> Result<VerifyReport> {
    if max_rank < 100 {
        return Err(Error::InvalidArgument("--max-rank must be at least 100".into()));
    }
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(Error::InvalidArgument(
            "--tail-fraction must lie in (0, 1)".into(),
        ));
    }
    let (g, v1, v2) = load_query(q)?;
    let analysis = analyze(&g, v1, v2)?;
    let query = QueryRecord {
        from: q.v1.clone(),
        to: q.v2.clone(),
    };
    if let AsymptoticClass::Finite { count } = analysis.class {
        let weights = enumerate_weights(&g, v1, v2, count.saturating_add(1), guards.guard_frontier)?;
        let pass = weights.len() as u64 == count;
        return Ok(VerifyReport {
            query,
            class: analysis.class,
            enumerated: weights.len(),
            fitted_s: None,
            relative_gap: None,
            tolerance: None,
            fit: None,
            pass,
            summary: format!(
                "finite: analytic count {} {} enumerated count {}",
                count,
                if pass { "=" } else { "!=" },
                weights.len()
            ),
        });
    }
    let model = FitModel::for_class(&analysis.class)?;
    let analytic = analysis.class.rate().expect("infinite class has a rate");
    let tolerance = tolerance.unwrap_or(match model {
        FitModel::Log => 0.10,
        _ => 0.05,
    });
    let weights = enumerate_weights(&g, v1, v2, max_rank, guards.guard_frontier)?;
    let n = weights.len();
    let lo = ((n as f64 * (1.0 - tail_fraction)).ceil() as usize).max(1);
    let fit = fit_asymptotics(&weights, model, (lo, n))?;
    let gap = (fit.s / analytic - 1.0).abs();
    let pass = gap <= tolerance;
    Ok(VerifyReport {
        query,
        class: analysis.class,
        enumerated: n,
        fitted_s: Some(fit.s),
        relative_gap: Some(gap),
        tolerance: Some(tolerance),
        fit: Some(fit),
        pass,
        summary: format!(
            "{}: analytic s = {analytic}, fitted s = {}, gap {gap:.4} {} tolerance {tolerance}",
            analysis.class.case_name(),
            fit.s,
            if pass { "<=" } else { ">" }
        ),
    })
}

pub fn cmd_convert_markov(matrix: &FsPath) -> Result<(WeightedDigraph, Value)> {
    let chain = parse_markov_csv(&read(matrix)?)?;
    let mg = from_markov_with_map(&chain)?;
    let sub: Vec<&str> = chain
        .row_kinds()
        .iter()
        .zip(chain.names())
        .filter(|(k, _)| **k == RowKind::SubStochastic)
        .map(|(_, n)| n.as_str())
        .collect();
    let kind = if sub.is_empty() {
        "stochastic"
    } else {
        "sub-stochastic"
    };
    let merged: Vec<Value> = (0..chain.len())
        .filter(|&i| mg.vertex_of[i].is_none())
        .map(|i| json!({"state": chain.names()[i], "into": mg.graph.name(mg.representative[i])}))
        .collect();
    let note = if sub.is_empty() {
        "stochastic matrix".to_string()
    } else {
        format!(
            "sub-stochastic matrix (rows {}); components through these states have rate s > 1",
            sub.join(", ")
        )
    };
    let summary = json!({
        "matrix": kind,
        "sub_stochastic_rows": sub,
        "vertices": mg.graph.vertex_count(),
        "edges": mg.graph.edge_count(),
        "merged": merged,
        "note": note,
    });
    Ok((mg.graph, summary))
}

pub fn cmd_approx_sweep(
    graph: &FsPath,
    vertex: &str,
    bases: &[f64],
    size_guard: usize,
) -> Result<String> {
    let g = parse_graph(&read(graph)?)?;
    let v = g.vertex(vertex)?;
    let scc = crate::structure::scc_decompose(&g);
    let c = scc.component_of(v);
    let solver = solve_log_rate(&g, &scc, c)?;
    let sweep = approx_rate_sweep(&g, &scc, c, bases, size_guard)?;
    let mut out = String::from("b,s_b,solver_s,relative_gap\n");
    for p in sweep {
        out.push_str(&format!(
            "{:?},{:?},{:?},{:?}\n",
            p.base,
            p.rate,
            solver,
            (p.rate / solver - 1.0).abs()
        ));
    }
    Ok(out)
}

/// Random graph on `n` vertices `v0..`; with `strong` the first `n` edges
/// form a ring, so the graph is strongly connected.
pub fn random_graph(
    n: usize,
    m: usize,
    seed: u64,
    min_weight: f64,
    max_weight: f64,
    strong: bool,
) -> Result<WeightedDigraph> {
    if n == 0 || !(min_weight > 0.0 && min_weight <= max_weight) {
        return Err(Error::InvalidArgument(
            "need at least one vertex and 0 < min weight <= max weight".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight = |rng: &mut ChaCha8Rng| {
        if min_weight == max_weight {
            min_weight
        } else {
            rng.gen_range(min_weight..max_weight)
        }
    };
    let mut edges = Vec::with_capacity(m.max(n));
    if strong {
        for i in 0..n {
            let w = weight(&mut rng);
            edges.push((i, (i + 1) % n, w));
        }
    }
    while edges.len() < m {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let w = weight(&mut rng);
        edges.push((a, b, w));
    }
    WeightedDigraph::new((0..n).map(|i| format!("v{i}")).collect(), edges)
}
