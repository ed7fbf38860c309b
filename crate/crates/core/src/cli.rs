//! Command-line front end: `measure`, `rewire`, `causal`, `correlate`.
//!
//! Every flag may also come from a TOML file passed with `--config`; keys are
//! the flag names with underscores. Flags on the command line win.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;

use crate::decay::PairDecay;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{
    edge_list_files, format_edge_list, largest_connected_component, load_edge_list, load_tudataset,
    read_effects_csv, read_gains_csv, render_json, write_text, CausalSection, CorrelationEntry,
    GraphEntry, InputDescriptor, NodeTaskEntry, Report,
};
use crate::metrics::{categorize, dataset_summary, measure_graph, GraphMeasurement, Metric};
use crate::rewiring::{edge_accounting, rewire, EdgeAccounting, Method, RewireParams};
use crate::sensitivity::fmt17;
use crate::stats::{
    align_pairs, ate_all, ite, mcnemar, paired_t, responsiveness, spearman, Observation,
    TreatmentEffectSet, DEFAULT_ALPHA,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Tudataset,
    Edgelist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Graph,
    Node,
}

#[derive(Debug, Parser)]
#[command(
    name = "oversquash",
    version,
    about = "Pairwise over-squashing measurement and rewiring analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Measure,
    Rewire,
    Causal,
    Correlate,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-graph and dataset over-squashing summaries.
    Measure(Flags),
    /// Rewire every input graph and emit edge lists plus edge accounting.
    Rewire(Flags),
    /// Treatment effects of a rewiring (on the fly or from --treated-dir).
    Causal(Flags),
    /// Spearman correlation between per-configuration effects (--input) and
    /// accuracy gains (--gains).
    Correlate(Flags),
}

/// Shared flags. All optional here; each command checks what it needs.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    /// TOML file with defaults for any of these flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Dataset name (TUDataset file prefix); defaults to the directory name.
    #[arg(long)]
    pub name: Option<String>,
    /// Restrict every graph to its largest connected component.
    #[arg(long)]
    #[serde(default)]
    pub lcc_only: bool,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Teleport probability for diffusion rewiring.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub num_edges: Option<usize>,
    #[arg(long)]
    pub init_iters: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub task: Option<Task>,
    /// Directory of rewired edge lists, matched to the inputs by sorted
    /// file name.
    #[arg(long)]
    pub treated_dir: Option<PathBuf>,
    #[arg(long)]
    pub gains: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub pairs_csv: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Significance level of the treatment-effect tests.
    #[arg(long)]
    pub significance: Option<f64>,
    /// Report effects relative to the control dataset means.
    #[arg(long)]
    #[serde(default)]
    pub responsiveness: bool,
}

impl Flags {
    /// Fills unset fields from `base`.
    pub fn merged_over(self, base: Flags) -> Flags {
        Flags {
            config: self.config,
            input: self.input.or(base.input),
            format: self.format.or(base.format),
            name: self.name.or(base.name),
            lcc_only: self.lcc_only || base.lcc_only,
            method: self.method.or(base.method),
            alpha: self.alpha.or(base.alpha),
            eps: self.eps.or(base.eps),
            num_edges: self.num_edges.or(base.num_edges),
            init_iters: self.init_iters.or(base.init_iters),
            seed: self.seed.or(base.seed),
            task: self.task.or(base.task),
            treated_dir: self.treated_dir.or(base.treated_dir),
            gains: self.gains.or(base.gains),
            out: self.out.or(base.out),
            pairs_csv: self.pairs_csv.or(base.pairs_csv),
            threads: self.threads.or(base.threads),
            significance: self.significance.or(base.significance),
            responsiveness: self.responsiveness || base.responsiveness,
        }
    }

    /// Merges the `--config` file, if any, underneath the flags.
    pub fn resolve(self) -> Result<Flags> {
        match &self.config {
            None => Ok(self),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                let base: Flags = toml::from_str(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                Ok(self.merged_over(base))
            }
        }
    }
}

/// Validated configuration of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub input: PathBuf,
    pub format: Format,
    pub name: Option<String>,
    pub lcc_only: bool,
    pub rewiring: Option<RewireParams>,
    pub task: Task,
    pub treated_dir: Option<PathBuf>,
    pub gains: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub pairs_csv: Option<PathBuf>,
    pub threads: usize,
    pub alpha: f64,
    pub responsiveness: bool,
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl RunConfig {
    pub fn from_flags(command: CommandKind, flags: Flags) -> Result<Self> {
        let f = flags.resolve()?;
        let input = f
            .input
            .clone()
            .ok_or_else(|| config_error("--input is required"))?;
        if !input.exists() {
            return Err(config_error(format!(
                "input {} does not exist",
                input.display()
            )));
        }
        let format = f
            .format
            .unwrap_or(if input.is_dir() && command != CommandKind::Correlate {
                if looks_like_tudataset(&input) {
                    Format::Tudataset
                } else {
                    Format::Edgelist
                }
            } else {
                Format::Edgelist
            });
        let alpha = f.significance.unwrap_or(DEFAULT_ALPHA);
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(config_error(format!("significance {alpha} outside (0, 1)")));
        }
        if f.threads == Some(0) {
            return Err(config_error("--threads must be at least 1"));
        }

        let rewiring = match command {
            CommandKind::Rewire | CommandKind::Causal => {
                let needs_params = command == CommandKind::Rewire || f.treated_dir.is_none();
                if needs_params {
                    let method = f
                        .method
                        .ok_or_else(|| config_error("--method is required"))?;
                    let mut p = RewireParams::new(method);
                    p.alpha = f.alpha.unwrap_or(p.alpha);
                    p.eps = f.eps.unwrap_or(p.eps);
                    p.num_edges = f.num_edges;
                    p.init_iters = f.init_iters.unwrap_or(p.init_iters);
                    p.seed = f.seed;
                    if method == Method::Import {
                        // Per-graph files come from --treated-dir.
                        p.path = f.treated_dir.clone();
                    }
                    p.validate()?;
                    Some(p)
                } else {
                    None
                }
            }
            _ => None,
        };
        if let Some(dir) = &f.treated_dir {
            if !dir.is_dir() {
                return Err(config_error(format!(
                    "treated dir {} is not a directory",
                    dir.display()
                )));
            }
        }
        match command {
            CommandKind::Rewire if f.out.is_none() => {
                return Err(config_error("--out (output directory) is required"))
            }
            CommandKind::Correlate if f.gains.is_none() => {
                return Err(config_error("--gains is required"))
            }
            _ => {}
        }
        Ok(RunConfig {
            command,
            input,
            format,
            name: f.name,
            lcc_only: f.lcc_only,
            rewiring,
            task: f.task.unwrap_or(Task::Graph),
            treated_dir: f.treated_dir,
            gains: f.gains,
            out: f.out,
            pairs_csv: f.pairs_csv,
            threads: f.threads.unwrap_or(1),
            alpha,
            responsiveness: f.responsiveness,
        })
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| config_error(format!("thread pool: {e}")))
    }

    fn descriptor(&self, graphs: usize) -> InputDescriptor {
        InputDescriptor {
            path: self.input.display().to_string(),
            format: match self.format {
                Format::Tudataset => "tudataset",
                Format::Edgelist => "edgelist",
            }
            .to_string(),
            name: self.name.clone(),
            lcc_only: self.lcc_only,
            graphs,
        }
    }
}

/// Input graphs with their ids, after optional LCC extraction.
#[derive(Debug, Clone)]
pub struct LabeledGraphs {
    pub ids: Vec<String>,
    pub graphs: Vec<Graph>,
}

pub fn load_inputs(cfg: &RunConfig) -> Result<LabeledGraphs> {
    let (ids, graphs) = match cfg.format {
        Format::Tudataset => {
            let name = match &cfg.name {
                Some(n) => n.clone(),
                None => cfg
                    .input
                    .file_name()
                    .and_then(|s| s.to_str())
                    .ok_or_else(|| config_error("cannot infer dataset name; pass --name"))?
                    .to_string(),
            };
            let bundle = load_tudataset(&cfg.input, &name)?;
            let ids = (1..=bundle.graphs.len())
                .map(|i| format!("{i:05}"))
                .collect();
            (ids, bundle.graphs)
        }
        Format::Edgelist => {
            let files = if cfg.input.is_dir() {
                edge_list_files(&cfg.input)?
            } else {
                vec![cfg.input.clone()]
            };
            if files.is_empty() {
                return Err(config_error(format!(
                    "no edge lists in {}",
                    cfg.input.display()
                )));
            }
            let graphs = files
                .iter()
                .map(|p| load_edge_list(p))
                .collect::<Result<Vec<_>>>()?;
            (files.iter().map(|p| file_id(p)).collect(), graphs)
        }
    };
    let graphs = if cfg.lcc_only {
        graphs
            .iter()
            .map(|g| largest_connected_component(g).0)
            .collect()
    } else {
        graphs
    };
    Ok(LabeledGraphs { ids, graphs })
}

fn looks_like_tudataset(dir: &Path) -> bool {
    std::fs::read_dir(dir).is_ok_and(|entries| {
        entries.filter_map(|e| e.ok()).any(|e| {
            e.file_name()
                .to_string_lossy()
                .ends_with("_graph_indicator.txt")
        })
    })
}

fn file_id(p: &Path) -> String {
    p.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn measure_all(pool: &rayon::ThreadPool, graphs: &[Graph]) -> Result<Vec<GraphMeasurement>> {
    pool.install(|| graphs.par_iter().map(measure_graph).collect())
}

fn graph_entry(id: &str, m: &GraphMeasurement) -> GraphEntry {
    let s = &m.summary;
    GraphEntry {
        id: id.to_string(),
        n: m.num_nodes,
        m: m.num_edges,
        components: m.components,
        diameter: m.diameter,
        measurable: !s.is_empty(),
        prevalence: s.prevalence,
        intensity: s.intensity,
        variability: s.variability,
        extremity: s.extremity,
        categories: (!s.is_empty()).then(|| categorize(s)),
        valid_pairs: s.valid_pairs,
        positive_pairs: s.positive_pairs,
        excluded_cross_component_pairs: s.excluded_cross_component_pairs,
    }
}

fn pairs_csv_text(ids: &[String], measurements: &[GraphMeasurement]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["graph", "u", "v", "k", "ln_n0"])?;
    for (id, m) in ids.iter().zip(measurements) {
        for p in &m.rates {
            w.write_record([
                id.clone(),
                p.source.to_string(),
                p.target.to_string(),
                fmt17(p.fit.k),
                fmt17(p.fit.ln_n0),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| config_error(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Files a command wants written, kept in memory until everything succeeded.
#[derive(Debug, Default)]
pub struct Outputs {
    pub stdout: Option<String>,
    pub files: Vec<(PathBuf, String)>,
}

impl Outputs {
    fn emit(&mut self, path: Option<&Path>, text: String) {
        match path {
            Some(p) => self.files.push((p.to_path_buf(), text)),
            None => self.stdout = Some(text),
        }
    }

    pub fn write(self) -> Result<()> {
        for (path, text) in &self.files {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
            write_text(path, text)?;
        }
        if let Some(text) = self.stdout {
            print!("{text}");
        }
        Ok(())
    }
}

fn tool_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

pub fn cmd_measure(cfg: &RunConfig) -> Result<(Report, Outputs)> {
    let inputs = load_inputs(cfg)?;
    let pool = cfg.pool()?;
    let ms = measure_all(&pool, &inputs.graphs)?;
    let summaries: Vec<_> = ms.iter().map(|m| m.summary).collect();
    let dataset = dataset_summary(&summaries)?;
    let report = Report {
        tool_version: tool_version(),
        input: cfg.descriptor(inputs.graphs.len()),
        graphs: inputs
            .ids
            .iter()
            .zip(&ms)
            .map(|(id, m)| graph_entry(id, m))
            .collect(),
        dataset: Some(dataset),
        dataset_categories: Some(categorize(&dataset.as_summary())),
        causal: None,
        correlations: Vec::new(),
    };
    let mut out = Outputs::default();
    if let Some(p) = &cfg.pairs_csv {
        out.files
            .push((p.clone(), pairs_csv_text(&inputs.ids, &ms)?));
    }
    out.emit(cfg.out.as_deref(), render_json(&report)?);
    Ok((report, out))
}

/// Rewired graphs in input order, plus how many were left unchanged because
/// their component had no room for new edges.
fn rewire_all(
    pool: &rayon::ThreadPool,
    params: &RewireParams,
    inputs: &LabeledGraphs,
) -> Result<(Vec<Graph>, usize)> {
    if params.method == Method::Import {
        let dir = params.path.as_deref().expect("validated");
        return Ok((load_treated(dir, &inputs.graphs)?, 0));
    }
    let results: Vec<Result<Option<Graph>>> = pool.install(|| {
        inputs
            .graphs
            .par_iter()
            .map(|g| match rewire(g, params) {
                Ok(r) => Ok(Some(r)),
                Err(Error::NoCandidateEdges) => Ok(None),
                Err(e) => Err(e),
            })
            .collect()
    });
    let mut out = Vec::with_capacity(results.len());
    let mut unchanged = 0;
    for (r, g) in results.into_iter().zip(&inputs.graphs) {
        match r? {
            Some(h) => out.push(h),
            None => {
                unchanged += 1;
                out.push(g.clone());
            }
        }
    }
    Ok((out, unchanged))
}

/// Treated graphs from a directory of edge lists, paired with `controls`
/// by sorted file name.
fn load_treated(dir: &Path, controls: &[Graph]) -> Result<Vec<Graph>> {
    let files = edge_list_files(dir)?;
    if files.len() != controls.len() {
        return Err(Error::LengthMismatch(controls.len(), files.len()));
    }
    files
        .iter()
        .zip(controls)
        .map(|(p, g)| crate::rewiring::import_rewired(p, g))
        .collect()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AccountingRow {
    pub id: String,
    #[serde(flatten)]
    pub accounting: EdgeAccounting,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RewireSummary {
    pub tool_version: String,
    pub input: InputDescriptor,
    pub params: RewireParams,
    pub graphs: Vec<AccountingRow>,
    pub mean_added: f64,
    pub mean_removed: f64,
    pub mean_net: f64,
    /// Graphs passed through because no candidate edge existed.
    pub unchanged_no_candidates: usize,
}

pub fn cmd_rewire(cfg: &RunConfig) -> Result<(RewireSummary, Outputs)> {
    let params = cfg.rewiring.clone().expect("validated");
    let out_dir = cfg.out.clone().expect("validated");
    let inputs = load_inputs(cfg)?;
    let pool = cfg.pool()?;
    let (rewired, unchanged) = rewire_all(&pool, &params, &inputs)?;
    let rows: Vec<AccountingRow> = inputs
        .ids
        .iter()
        .zip(inputs.graphs.iter().zip(&rewired))
        .map(|(id, (g, h))| AccountingRow {
            id: id.clone(),
            accounting: edge_accounting(g, h),
        })
        .collect();
    let n = rows.len().max(1) as f64;
    let mean =
        |f: fn(&EdgeAccounting) -> f64| rows.iter().map(|r| f(&r.accounting)).sum::<f64>() / n;
    let summary = RewireSummary {
        tool_version: tool_version(),
        input: cfg.descriptor(inputs.graphs.len()),
        mean_added: mean(|a| a.added as f64),
        mean_removed: mean(|a| a.removed as f64),
        mean_net: mean(|a| a.net as f64),
        params,
        graphs: rows,
        unchanged_no_candidates: unchanged,
    };
    let mut out = Outputs::default();
    for (id, h) in inputs.ids.iter().zip(&rewired) {
        out.files
            .push((out_dir.join(format!("{id}.txt")), format_edge_list(h)));
    }
    out.files
        .push((out_dir.join("accounting.json"), render_json(&summary)?));
    Ok((summary, out))
}

fn observations(ids: &[String], ms: &[GraphMeasurement]) -> Vec<Observation> {
    ids.iter()
        .zip(ms)
        .map(|(id, m)| Observation {
            graph_id: id.clone(),
            summary: m.summary,
        })
        .collect()
}

fn mean_ites(ites: &[TreatmentEffectSet], metric: Metric) -> f64 {
    ites.iter().map(|t| t.get(metric)).sum::<f64>() / ites.len().max(1) as f64
}

fn node_entry(id: &str, before: &[PairDecay], after: &[PairDecay]) -> Result<NodeTaskEntry> {
    let aligned = align_pairs(before, after);
    Ok(NodeTaskEntry {
        graph_id: id.to_string(),
        mcnemar: mcnemar(&aligned.before_flags(), &aligned.after_flags())?,
        paired_t: paired_t(&aligned.before_k, &aligned.after_k)?,
        pairs_only_before: aligned.only_before,
        pairs_only_after: aligned.only_after,
    })
}

pub fn cmd_causal(cfg: &RunConfig) -> Result<(Report, Outputs)> {
    let inputs = load_inputs(cfg)?;
    let pool = cfg.pool()?;
    let (treated, treatment, accounting) = match (&cfg.treated_dir, &cfg.rewiring) {
        (Some(dir), None) => (
            load_treated(dir, &inputs.graphs)?,
            format!("import:{}", dir.display()),
            None,
        ),
        (_, Some(p)) => {
            let (t, _) = rewire_all(&pool, p, &inputs)?;
            let acc = inputs
                .graphs
                .iter()
                .zip(&t)
                .map(|(g, h)| edge_accounting(g, h))
                .collect();
            (t, p.method.to_string(), Some(acc))
        }
        (None, None) => return Err(config_error("need --method or --treated-dir")),
    };
    let before = measure_all(&pool, &inputs.graphs)?;
    let after = measure_all(&pool, &treated)?;
    let control = dataset_summary(&before.iter().map(|m| m.summary).collect::<Vec<_>>())?;
    let treated_summary =
        dataset_summary(&after.iter().map(|m| m.summary).collect::<Vec<_>>()).ok();

    let obs_b = observations(&inputs.ids, &before);
    let obs_a = observations(&inputs.ids, &after);
    // Graphs with no measurable pairs in either condition carry no effect.
    let ites = obs_b
        .iter()
        .zip(&obs_a)
        .filter(|(b, a)| !b.summary.is_empty() && !a.summary.is_empty())
        .map(|(b, a)| ite(b, a))
        .collect::<Result<Vec<_>>>()?;

    let (ate, node) = match cfg.task {
        Task::Graph => (ate_all(&ites, cfg.alpha)?, Vec::new()),
        Task::Node => {
            let entries = inputs
                .ids
                .iter()
                .zip(before.iter().zip(&after))
                .map(|(id, (b, a))| node_entry(id, &b.rates, &a.rates))
                .collect::<Result<Vec<_>>>()?;
            (Vec::new(), entries)
        }
    };
    let responsiveness = cfg.responsiveness.then(|| {
        Metric::ALL
            .iter()
            .map(|&m| {
                (
                    m.name().to_string(),
                    responsiveness(mean_ites(&ites, m), control.get(m)),
                )
            })
            .collect::<BTreeMap<_, _>>()
    });
    let report = Report {
        tool_version: tool_version(),
        input: cfg.descriptor(inputs.graphs.len()),
        graphs: inputs
            .ids
            .iter()
            .zip(&before)
            .map(|(id, m)| graph_entry(id, m))
            .collect(),
        dataset: Some(control),
        dataset_categories: Some(categorize(&control.as_summary())),
        causal: Some(CausalSection {
            task: match cfg.task {
                Task::Graph => "graph",
                Task::Node => "node",
            }
            .to_string(),
            treatment,
            alpha: cfg.alpha,
            ate,
            node,
            ites,
            responsiveness,
            treated_dataset: treated_summary,
            accounting: accounting.unwrap_or_default(),
        }),
        correlations: Vec::new(),
    };
    let mut out = Outputs::default();
    out.emit(cfg.out.as_deref(), render_json(&report)?);
    Ok((report, out))
}

pub fn cmd_correlate(cfg: &RunConfig) -> Result<(Report, Outputs)> {
    let effects = read_effects_csv(&cfg.input)?;
    let gains: BTreeMap<String, f64> = read_gains_csv(cfg.gains.as_deref().expect("validated"))?
        .into_iter()
        .collect();
    let effect_ids: BTreeSet<&str> = effects.iter().map(|e| e.config_id.as_str()).collect();
    let gain_ids: BTreeSet<&str> = gains.keys().map(String::as_str).collect();
    if effect_ids != gain_ids || effect_ids.len() != effects.len() {
        let unmatched: Vec<&str> = effect_ids
            .symmetric_difference(&gain_ids)
            .copied()
            .collect();
        return Err(config_error(format!(
            "config ids differ between effects and gains (or repeat): {unmatched:?}"
        )));
    }
    let y: Vec<f64> = effects.iter().map(|e| gains[&e.config_id]).collect();
    let mut correlations = Vec::new();
    for m in Metric::ALL {
        let x: Vec<f64> = effects
            .iter()
            .map(|e| match m {
                Metric::Prevalence => e.prevalence,
                Metric::Intensity => e.intensity,
                Metric::Variability => e.variability,
                Metric::Extremity => e.extremity,
            })
            .collect();
        correlations.push(CorrelationEntry {
            metric: m.name().to_string(),
            result: spearman(&x, &y)?,
        });
    }
    let report = Report {
        tool_version: tool_version(),
        input: InputDescriptor {
            path: cfg.input.display().to_string(),
            format: "effects-csv".into(),
            name: None,
            lcc_only: false,
            graphs: 0,
        },
        graphs: Vec::new(),
        dataset: None,
        dataset_categories: None,
        causal: None,
        correlations,
    };
    let mut csv_text = String::from("metric,rho,p,n\n");
    for c in &report.correlations {
        let opt = |x: Option<f64>| x.map(fmt17).unwrap_or_default();
        csv_text.push_str(&format!(
            "{},{},{},{}\n",
            c.metric,
            opt(c.result.rho),
            opt(c.result.p_two_tailed),
            c.result.n
        ));
    }
    let mut out = Outputs::default();
    if let Some(p) = &cfg.out {
        out.files.push((p.with_extension("csv"), csv_text));
    }
    out.emit(cfg.out.as_deref(), render_json(&report)?);
    Ok((report, out))
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoMeasurablePairs | Error::AllGraphsSkipped => EXIT_DEGENERATE,
        _ => EXIT_INPUT,
    }
}

/// Parses `args`, runs the command and writes its outputs. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let (kind, flags) = match cli.command {
        Command::Measure(f) => (CommandKind::Measure, f),
        Command::Rewire(f) => (CommandKind::Rewire, f),
        Command::Causal(f) => (CommandKind::Causal, f),
        Command::Correlate(f) => (CommandKind::Correlate, f),
    };
    let result = RunConfig::from_flags(kind, flags).and_then(|cfg| {
        let outputs = match kind {
            CommandKind::Measure => cmd_measure(&cfg)?.1,
            CommandKind::Rewire => cmd_rewire(&cfg)?.1,
            CommandKind::Causal => cmd_causal(&cfg)?.1,
            CommandKind::Correlate => cmd_correlate(&cfg)?.1,
        };
        outputs.write()
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
