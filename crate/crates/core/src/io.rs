//! File formats: TUDataset bundles, plain edge lists, CSV inputs and the
//! JSON report.
//!
//! TUDataset bundles are read from `<name>_A.txt` (comma-separated, 1-based
//! global edges) and `<name>_graph_indicator.txt` (graph id of node `i` on
//! line `i`). Label and attribute files are ignored.
//!
//! Edge lists are whitespace-separated 0-based `u v` lines with an optional
//! `# nodes: N` header; other `#` lines are comments.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_graph, connected_components, Graph};
use crate::metrics::{CategoryLabels, DatasetSummary};
use crate::rewiring::EdgeAccounting;
use crate::stats::{AteReport, PairedReport, SpearmanResult, TreatmentEffectSet};

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBundle {
    pub name: String,
    pub graphs: Vec<Graph>,
    pub source: PathBuf,
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_index(path: &Path, line: usize, field: &str) -> Result<usize> {
    field.trim().parse().map_err(|_| {
        Error::parse(
            path,
            line,
            format!("expected a node index, found {field:?}"),
        )
    })
}

pub fn load_tudataset(dir: &Path, name: &str) -> Result<DatasetBundle> {
    let indicator_path = dir.join(format!("{name}_graph_indicator.txt"));
    let edges_path = dir.join(format!("{name}_A.txt"));

    // graph_of[global node - 1] = graph id as written in the file.
    let mut graph_of = Vec::new();
    for (i, line) in read_to_string(&indicator_path)?.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        graph_of.push(parse_index(&indicator_path, i + 1, line)?);
    }
    if graph_of.is_empty() {
        return Err(Error::parse(&indicator_path, 1, "no graphs"));
    }
    let mut ids: Vec<usize> = graph_of.clone();
    ids.sort_unstable();
    ids.dedup();
    let slot = |id: usize| ids.binary_search(&id).expect("id comes from the indicator");

    let mut local = vec![0; graph_of.len()];
    let mut counts = vec![0usize; ids.len()];
    for (node, &gid) in graph_of.iter().enumerate() {
        let s = slot(gid);
        local[node] = counts[s];
        counts[s] += 1;
    }

    let mut edge_lists = vec![Vec::new(); ids.len()];
    for (i, line) in read_to_string(&edges_path)?.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse(&edges_path, i + 1, "expected \"i, j\""));
        };
        let (a, b) = (
            parse_index(&edges_path, i + 1, a)?,
            parse_index(&edges_path, i + 1, b)?,
        );
        for x in [a, b] {
            if x == 0 || x > graph_of.len() {
                return Err(Error::parse(
                    &edges_path,
                    i + 1,
                    format!("node {x} outside 1..={}", graph_of.len()),
                ));
            }
        }
        let (ga, gb) = (graph_of[a - 1], graph_of[b - 1]);
        if ga != gb {
            return Err(Error::CrossGraphEdge {
                u: a,
                v: b,
                graph_u: ga,
                graph_v: gb,
            });
        }
        edge_lists[slot(ga)].push((local[a - 1], local[b - 1]));
    }

    let graphs = counts
        .iter()
        .zip(&edge_lists)
        .map(|(&n, edges)| Graph::new(n, edges))
        .collect::<Result<Vec<_>>>()?;
    Ok(DatasetBundle {
        name: name.to_string(),
        graphs,
        source: dir.to_path_buf(),
    })
}

/// Writes a bundle back out in TUDataset layout (both directions of every
/// edge, graphs numbered from 1).
pub fn write_tudataset(bundle: &DatasetBundle, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut indicator = String::new();
    let mut edges = String::new();
    let mut offset = 0;
    for (gi, g) in bundle.graphs.iter().enumerate() {
        for _ in 0..g.num_nodes() {
            indicator.push_str(&format!("{}\n", gi + 1));
        }
        for &(u, v) in g.edges() {
            edges.push_str(&format!("{}, {}\n", offset + u + 1, offset + v + 1));
            edges.push_str(&format!("{}, {}\n", offset + v + 1, offset + u + 1));
        }
        offset += g.num_nodes();
    }
    let ind_path = dir.join(format!("{}_graph_indicator.txt", bundle.name));
    fs::write(&ind_path, indicator).map_err(|e| Error::io(&ind_path, e))?;
    let a_path = dir.join(format!("{}_A.txt", bundle.name));
    fs::write(&a_path, edges).map_err(|e| Error::io(&a_path, e))
}

/// Raw contents of an edge-list file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListFile {
    pub edges: Vec<(usize, usize)>,
    pub declared_nodes: Option<usize>,
    pub max_index: Option<usize>,
}

impl EdgeListFile {
    pub fn num_nodes(&self) -> usize {
        self.declared_nodes
            .unwrap_or_else(|| self.max_index.map_or(0, |m| m + 1))
    }
}

pub fn parse_edge_list(text: &str, path: &Path) -> Result<EdgeListFile> {
    let mut edges = Vec::new();
    let mut lines_of = Vec::new();
    let mut declared_nodes = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(n) = comment.trim().strip_prefix("nodes:") {
                declared_nodes = Some(n.trim().parse().map_err(|_| {
                    Error::parse(path, i + 1, format!("bad node count {:?}", n.trim()))
                })?);
            }
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse(path, i + 1, "expected \"u v\""));
        };
        edges.push((parse_index(path, i + 1, a)?, parse_index(path, i + 1, b)?));
        lines_of.push(i + 1);
    }
    let max_index = edges.iter().map(|&(u, v)| u.max(v)).max();
    if let (Some(n), Some(_)) = (declared_nodes, max_index) {
        if let Some(pos) = edges.iter().position(|&(u, v)| u.max(v) >= n) {
            return Err(Error::parse(
                path,
                lines_of[pos],
                format!("node index outside the declared 0..{n}"),
            ));
        }
    }
    Ok(EdgeListFile {
        edges,
        declared_nodes,
        max_index,
    })
}

pub fn load_edge_list_file(path: &Path) -> Result<EdgeListFile> {
    parse_edge_list(&read_to_string(path)?, path)
}

pub fn load_edge_list(path: &Path) -> Result<Graph> {
    let file = load_edge_list_file(path)?;
    Ok(build_graph(file.num_nodes(), &file.edges)?.graph)
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("# nodes: {}\n", g.num_nodes());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn write_edge_list(g: &Graph, path: &Path) -> Result<()> {
    fs::write(path, format_edge_list(g)).map_err(|e| Error::io(path, e))
}

/// Edge-list files (`.txt`, `.edges`, `.el`) in a directory, sorted by name.
pub fn edge_list_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && matches!(
                    p.extension().and_then(|e| e.to_str()),
                    Some("txt" | "edges" | "el")
                )
        })
        .collect();
    files.sort();
    Ok(files)
}

/// Induced subgraph on the largest component, reindexed, with
/// `mapping[new] = old`.
pub fn largest_connected_component(g: &Graph) -> (Graph, Vec<usize>) {
    let comps = connected_components(g);
    let members = comps
        .largest()
        .map(|c| comps.members(c))
        .unwrap_or_default();
    (g.induced_subgraph(&members), members)
}

/// Gains file rows `(config_id, gain_percent)`.
pub fn read_gains_csv(path: &Path) -> Result<Vec<(String, f64)>> {
    #[derive(Deserialize)]
    struct Row {
        config_id: String,
        gain_percent: f64,
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    reader
        .deserialize::<Row>()
        .map(|r| {
            r.map(|r| (r.config_id, r.gain_percent))
                .map_err(Error::from)
        })
        .collect()
}

/// One row of an effects file: per-configuration ATEs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectRow {
    pub config_id: String,
    pub prevalence: f64,
    pub intensity: f64,
    pub variability: f64,
    pub extremity: f64,
}

pub fn read_effects_csv(path: &Path) -> Result<Vec<EffectRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    reader
        .deserialize::<EffectRow>()
        .map(|r| r.map_err(Error::from))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDescriptor {
    pub path: String,
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub lcc_only: bool,
    pub graphs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphEntry {
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub components: usize,
    pub diameter: usize,
    pub measurable: bool,
    pub prevalence: f64,
    pub intensity: f64,
    pub variability: f64,
    pub extremity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub categories: Option<CategoryLabels>,
    pub valid_pairs: usize,
    pub positive_pairs: usize,
    pub excluded_cross_component_pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeTaskEntry {
    pub graph_id: String,
    pub mcnemar: PairedReport,
    pub paired_t: PairedReport,
    /// Pairs valid only before / only after rewiring (component churn).
    pub pairs_only_before: usize,
    pub pairs_only_after: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalSection {
    pub task: String,
    pub treatment: String,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ate: Vec<AteReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub node: Vec<NodeTaskEntry>,
    pub ites: Vec<TreatmentEffectSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub responsiveness: Option<BTreeMap<String, Option<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub treated_dataset: Option<DatasetSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub accounting: Vec<EdgeAccounting>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEntry {
    pub metric: String,
    #[serde(flatten)]
    pub result: SpearmanResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub input: InputDescriptor,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub graphs: Vec<GraphEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<DatasetSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset_categories: Option<CategoryLabels>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub causal: Option<CausalSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub correlations: Vec<CorrelationEntry>,
}

/// Canonical form: pretty JSON with keys sorted, newline-terminated.
pub fn render_json<T: Serialize>(value: &T) -> Result<String> {
    // Going through `Value` sorts object keys.
    let tree = serde_json::to_value(value)?;
    let mut text = serde_json::to_string_pretty(&tree)?;
    text.push('\n');
    Ok(text)
}

pub fn write_report(r: &Report, path: &Path) -> Result<()> {
    write_text(path, &render_json(r)?)
}

pub fn read_report(path: &Path) -> Result<Report> {
    Ok(serde_json::from_str(&read_to_string(path)?)?)
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}
