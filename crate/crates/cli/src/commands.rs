use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use curvkit_core::audit::{audit_rewiring, export_condition_scatter};
use curvkit_core::curvature::{curvature_distribution, distribution_to_csv};
use curvkit_core::graph::generators::double_star;
use curvkit_core::io::{edge_list_to_string_with_ids, load_edge_list, load_labels, IdMap, LoadedGraph};
use curvkit_core::mpnn::{verify_sensitivity_bound, Activation, MpnnConfig};
use curvkit_core::stats::{
    homophily, saturation_analysis_with, saturation_to_csv, spectral_gap, top_fraction_summary_with, SampleSet,
    StdConvention,
};
use curvkit_core::{largest_connected_component, sdrf, CurvatureKind, EdgeCurvature, Graph, SdrfParams};
use serde_json::json;

/// Bad user input that is not a library error (exit code 1).
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Parser)]
#[command(
    name = "curvkit",
    version,
    about = "Discrete curvature, SDRF rewiring and bottleneck audits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-edge curvature distribution.
    Curvature(CurvatureArgs),
    /// Run SDRF and write the rewired graph and its trace.
    Rewire(RewireArgs),
    /// Run SDRF and audit every selected edge against the bottleneck conditions.
    Audit(RewireArgs),
    /// Check the Jacobian sensitivity bound numerically at one edge.
    VerifyBound(VerifyArgs),
    /// Homophily, spectral gap, top-fraction and saturation statistics.
    Stats(StatsArgs),
    /// Extract the largest connected component.
    Lcc(LccArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Edge list: one `u v` pair per line, `#` comments.
    #[arg(long)]
    pub edges: PathBuf,
    /// Treat the input as directed arcs (symmetrized on load).
    #[arg(long)]
    pub directed: bool,
    /// Restrict to the largest connected component after loading.
    #[arg(long)]
    pub lcc: bool,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "bfc")]
    pub kind: CurvatureKind,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RewireArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Curvature driving the rewiring.
    #[arg(long, alias = "curvature", default_value = "bfc")]
    pub kind: CurvatureKind,
    /// Number of SDRF iterations.
    #[arg(long)]
    pub max_iter: usize,
    /// Softmax temperature (typical range 1 to 500).
    #[arg(long)]
    pub tau: f64,
    /// Removal threshold (typical range 0.2 to 21.2); omit to disable removals.
    #[arg(long)]
    pub cplus: Option<f64>,
    /// Seed for the ChaCha8 generator driving candidate sampling.
    #[arg(long)]
    pub seed: u64,
    /// Recompute all curvatures after every mutation.
    #[arg(long)]
    pub full_recompute: bool,
    /// Dataset name recorded in the audit summary (defaults to the file stem).
    #[arg(long)]
    pub dataset: Option<String>,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Edge list to test; mutually exclusive with --double-star.
    #[arg(long, conflicts_with = "double_star", required_unless_present = "double_star")]
    pub edges: Option<PathBuf>,
    #[arg(long)]
    pub directed: bool,
    /// Built-in double star whose two centers both have this degree.
    #[arg(long)]
    pub double_star: Option<usize>,
    /// Edge to test, as two original node ids. Defaults to the most
    /// negatively curved edge (the centers for --double-star).
    #[arg(long, num_args = 2, value_names = ["U", "V"])]
    pub edge: Option<Vec<u64>>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value = "identity")]
    pub activation: Activation,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long, default_value_t = 0)]
    pub l0: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Accuracy samples as CSV with header `config_id,accuracy`.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    pub fraction: f64,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.33, 0.66, 1.0])]
    pub checkpoints: Vec<f64>,
    /// Use the n - 1 divisor for standard deviations.
    #[arg(long)]
    pub sample_std: bool,
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[arg(long)]
    pub directed: bool,
    #[arg(long)]
    pub lcc: bool,
    /// `node_id label` per line, keyed by original ids.
    #[arg(long, requires = "edges")]
    pub labels: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct LccArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub directed: bool,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Curvature(a) => run_curvature(a),
        Command::Rewire(a) => run_rewire(a),
        Command::Audit(a) => run_audit(a),
        Command::VerifyBound(a) => run_verify(a),
        Command::Stats(a) => run_stats(a),
        Command::Lcc(a) => run_lcc(a),
    }
}

fn load(path: &Path, directed: bool, lcc: bool) -> Result<LoadedGraph> {
    let loaded = load_edge_list(path, directed)?;
    Ok(if lcc { restrict_to_lcc(loaded) } else { loaded })
}

fn restrict_to_lcc(loaded: LoadedGraph) -> LoadedGraph {
    let (graph, kept) = largest_connected_component(&loaded.graph);
    LoadedGraph {
        graph,
        ids: loaded.ids.restrict(&kept),
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn prepare_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn write_ids(dir: &Path, ids: &IdMap) -> Result<()> {
    write(dir, "idmap.csv", &ids.to_csv())
}

fn run_curvature(a: CurvatureArgs) -> Result<String> {
    let loaded = load(&a.input.edges, a.input.directed, a.input.lcc)?;
    let records = curvature_distribution(&loaded.graph, a.kind)?;
    let original: Vec<EdgeCurvature> = records
        .iter()
        .map(|r| EdgeCurvature {
            u: loaded.ids.original(r.u) as usize,
            v: loaded.ids.original(r.v) as usize,
            value: r.value,
        })
        .collect();
    prepare_out(&a.out)?;
    write(&a.out, "curvature.csv", &distribution_to_csv(&original))?;
    write_ids(&a.out, &loaded.ids)?;
    let min = records.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let max = records.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
    Ok(format!(
        "curvature: {} edges, kind {}, min {min:.6}, max {max:.6} -> {}",
        records.len(),
        a.kind,
        a.out.join("curvature.csv").display()
    ))
}

fn sdrf_params(a: &RewireArgs) -> SdrfParams {
    let mut p = SdrfParams::new(a.kind, a.max_iter, a.tau, a.seed).with_full_recompute(a.full_recompute);
    p.c_plus = a.cplus;
    p
}

fn run_rewire(a: RewireArgs) -> Result<String> {
    let loaded = load(&a.input.edges, a.input.directed, a.input.lcc)?;
    let (rewired, trace) = sdrf(&loaded.graph, &sdrf_params(&a))?;
    prepare_out(&a.out)?;
    write(
        &a.out,
        "rewired.edges",
        &edge_list_to_string_with_ids(&rewired, &loaded.ids),
    )?;
    write(&a.out, "trace.jsonl", &trace.to_jsonl()?)?;
    write_ids(&a.out, &loaded.ids)?;
    Ok(format!(
        "rewire: {} iterations, {} added, {} removed, {} -> {} edges",
        trace.len(),
        trace.additions(),
        trace.removals(),
        loaded.graph.edge_count(),
        rewired.edge_count()
    ))
}

fn run_audit(a: RewireArgs) -> Result<String> {
    let loaded = load(&a.input.edges, a.input.directed, a.input.lcc)?;
    let dataset = a.dataset.clone().unwrap_or_else(|| {
        a.input
            .edges
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    let report = audit_rewiring(&loaded.graph, &sdrf_params(&a), &dataset)?;
    prepare_out(&a.out)?;
    write(&a.out, "summary.json", &report.summary.to_json()?)?;
    write(&a.out, "scatter.csv", &export_condition_scatter(&report.records))?;
    write(&a.out, "trace.jsonl", &report.trace.to_jsonl()?)?;
    write_ids(&a.out, &loaded.ids)?;
    let s = &report.summary;
    Ok(format!(
        "audit: {dataset}: {} edges rewired, cond2 {} ({:.2}%), cond2b {} ({:.2}%)",
        s.edges_rewired, s.cond2.count, s.cond2.percent, s.cond2b.count, s.cond2b.percent
    ))
}

fn most_negative_bfc_edge(g: &Graph) -> Result<(usize, usize)> {
    let records = curvature_distribution(g, CurvatureKind::Bfc)?;
    let mut best: Option<(usize, usize, f64)> = None;
    for r in records {
        if best.is_none_or(|(_, _, v)| r.value < v) {
            best = Some((r.u, r.v, r.value));
        }
    }
    best.map(|(u, v, _)| (u, v))
        .ok_or_else(|| InputError("graph has no edges".into()).into())
}

fn run_verify(a: VerifyArgs) -> Result<String> {
    let loaded = match (&a.edges, a.double_star) {
        (Some(path), _) => load_edge_list(path, a.directed)?,
        (None, Some(d)) => {
            if d < 2 {
                return Err(InputError("--double-star needs a degree of at least 2".into()).into());
            }
            let graph = double_star(d);
            LoadedGraph {
                ids: IdMap::identity(graph.node_count()),
                graph,
            }
        }
        (None, None) => unreachable!("clap enforces one input"),
    };
    let (i, j) = match &a.edge {
        Some(pair) => {
            let lookup = |id: u64| {
                loaded
                    .ids
                    .compact(id)
                    .ok_or_else(|| InputError(format!("node {id} is not in the graph")))
            };
            (lookup(pair[0])?, lookup(pair[1])?)
        }
        None => most_negative_bfc_edge(&loaded.graph)?,
    };
    let cfg = MpnnConfig {
        depth: a.depth,
        alpha: a.alpha,
        beta: a.beta,
        l0: a.l0,
        activation: a.activation,
    };
    let report = verify_sensitivity_bound(&loaded.graph, i, j, &cfg)?;
    let [ri, rj] = report.edge;
    let body = json!({
        "edge": [loaded.ids.original(ri), loaded.ids.original(rj)],
        "delta": report.delta,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "q_size": report.q_size,
        "one_over_delta": report.one_over_delta,
        "pass": report.pass,
    });
    let text = serde_json::to_string_pretty(&body)? + "\n";
    if let Some(dir) = &a.out {
        prepare_out(dir)?;
        write(dir, "bound.json", &text)?;
    }
    Ok(text.trim_end().to_string())
}

fn run_stats(a: StatsArgs) -> Result<String> {
    if a.samples.is_none() && a.edges.is_none() {
        return Err(InputError("stats needs --samples and/or --edges".into()).into());
    }
    let convention = if a.sample_std {
        StdConvention::Sample
    } else {
        StdConvention::Population
    };
    prepare_out(&a.out)?;
    let mut summary = serde_json::Map::new();
    let mut line = Vec::new();

    if let Some(path) = &a.samples {
        let samples = SampleSet::load_csv(path)?;
        let top = top_fraction_summary_with(samples.values(), a.fraction, convention)?;
        let rows = saturation_analysis_with(samples.values(), &a.checkpoints, convention)?;
        write(&a.out, "saturation.csv", &saturation_to_csv(&rows))?;
        line.push(format!(
            "top {:.0}%: {:.4} ± {:.4}",
            100.0 * a.fraction,
            top.mean,
            top.std
        ));
        summary.insert("samples".into(), json!(samples.tag));
        summary.insert("sample_count".into(), json!(samples.len()));
        summary.insert("top_fraction".into(), serde_json::to_value(&top)?);
    }

    if let Some(path) = &a.edges {
        let loaded = load(path, a.directed, a.lcc)?;
        let gap = spectral_gap(&loaded.graph)?;
        line.push(format!("spectral gap {gap:.6}"));
        summary.insert("nodes".into(), json!(loaded.graph.node_count()));
        summary.insert("edges".into(), json!(loaded.graph.edge_count()));
        summary.insert("spectral_gap".into(), json!(gap));
        if let Some(labels) = &a.labels {
            let h = homophily(&load_labels(labels, &loaded)?)?;
            line.push(format!("homophily {h:.4}"));
            summary.insert("homophily".into(), json!(h));
        }
        write_ids(&a.out, &loaded.ids)?;
    }

    let text = serde_json::to_string_pretty(&serde_json::Value::Object(summary))? + "\n";
    write(&a.out, "summary.json", &text)?;
    Ok(format!("stats: {}", line.join(", ")))
}

fn run_lcc(a: LccArgs) -> Result<String> {
    let loaded = load_edge_list(&a.edges, a.directed)?;
    let before = (loaded.graph.node_count(), loaded.graph.edge_count());
    let lcc = restrict_to_lcc(loaded);
    prepare_out(&a.out)?;
    write(&a.out, "lcc.edges", &edge_list_to_string_with_ids(&lcc.graph, &lcc.ids))?;
    write_ids(&a.out, &lcc.ids)?;
    Ok(format!(
        "lcc: {} nodes / {} edges -> {} nodes / {} edges",
        before.0,
        before.1,
        lcc.graph.node_count(),
        lcc.graph.edge_count()
    ))
}
