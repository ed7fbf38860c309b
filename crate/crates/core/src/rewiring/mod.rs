//! Rewiring treatments: every method keeps the node set and replaces the
//! edge set.
//!
//! * `digl`: personalized PageRank diffusion followed by threshold
//!   sparsification.
//! * `gtr`: greedy total-effective-resistance reduction.
//! * `fosr`: greedy spectral-gap edge addition driven by power iteration.
//! * `import`: edges produced by an external tool, read from an edge list.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::load_edge_list_file;

pub mod diffusion;
pub mod resistance;
pub mod spectral;

pub use diffusion::{ppr, rewire_digl, DiffusionMatrix};
pub use resistance::{effective_resistance, rewire_gtr, ResistanceState};
pub use spectral::{rewire_fosr, SpectralState};

pub const DEFAULT_ALPHA: f64 = 0.15;
pub const DEFAULT_EPS: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Digl,
    Gtr,
    Fosr,
    Import,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Digl => "digl",
            Method::Gtr => "gtr",
            Method::Fosr => "fosr",
            Method::Import => "import",
        })
    }
}

/// Method-specific hyperparameters; fields unused by a method are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewireParams {
    pub method: Method,
    pub alpha: f64,
    pub eps: f64,
    pub num_edges: Option<usize>,
    pub init_iters: usize,
    pub seed: Option<u64>,
    pub path: Option<PathBuf>,
}

impl RewireParams {
    pub fn new(method: Method) -> Self {
        RewireParams {
            method,
            alpha: DEFAULT_ALPHA,
            eps: DEFAULT_EPS,
            num_edges: None,
            init_iters: spectral::DEFAULT_INIT_ITERS,
            seed: None,
            path: None,
        }
    }

    pub fn digl(alpha: f64, eps: f64) -> Self {
        RewireParams {
            alpha,
            eps,
            ..Self::new(Method::Digl)
        }
    }

    pub fn gtr(num_edges: usize) -> Self {
        RewireParams {
            num_edges: Some(num_edges),
            ..Self::new(Method::Gtr)
        }
    }

    pub fn fosr(num_edges: usize, init_iters: usize, seed: u64) -> Self {
        RewireParams {
            num_edges: Some(num_edges),
            init_iters,
            seed: Some(seed),
            ..Self::new(Method::Fosr)
        }
    }

    pub fn import(path: impl Into<PathBuf>) -> Self {
        RewireParams {
            path: Some(path.into()),
            ..Self::new(Method::Import)
        }
    }

    /// Checks that the fields the method needs are present and in range.
    pub fn validate(&self) -> Result<()> {
        let missing = |what: &str| {
            Err(Error::InvalidParameter(format!(
                "method {} requires {what}",
                self.method
            )))
        };
        match self.method {
            Method::Digl => {
                if !(self.alpha > 0.0 && self.alpha < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "alpha {} outside (0, 1)",
                        self.alpha
                    )));
                }
                if self.eps.is_nan() || self.eps < 0.0 {
                    return Err(Error::InvalidParameter(format!("eps {} < 0", self.eps)));
                }
            }
            Method::Gtr => {
                if self.num_edges.is_none() {
                    return missing("num_edges");
                }
            }
            Method::Fosr => {
                if self.num_edges.is_none() {
                    return missing("num_edges");
                }
                if self.seed.is_none() {
                    return missing("a seed");
                }
            }
            Method::Import => {
                if self.path.is_none() {
                    return missing("a path");
                }
            }
        }
        Ok(())
    }
}

/// Applies the treatment described by `p`.
pub fn rewire(g: &Graph, p: &RewireParams) -> Result<Graph> {
    p.validate()?;
    let out = match p.method {
        Method::Digl => rewire_digl(g, p.alpha, p.eps)?,
        Method::Gtr => rewire_gtr(g, p.num_edges.unwrap_or_default())?,
        Method::Fosr => rewire_fosr(
            g,
            p.num_edges.unwrap_or_default(),
            p.init_iters,
            p.seed.unwrap_or_default(),
        )?,
        Method::Import => import_rewired(p.path.as_deref().expect("validated"), g)?,
    };
    debug_assert_eq!(out.num_nodes(), g.num_nodes());
    Ok(out)
}

/// Reads an externally rewired edge list for `base`'s node set.
pub fn import_rewired(path: &Path, base: &Graph) -> Result<Graph> {
    let loaded = load_edge_list_file(path)?;
    if let Some(declared) = loaded.declared_nodes {
        if declared != base.num_nodes() {
            return Err(Error::NodeCountMismatch {
                expected: base.num_nodes(),
                found: declared,
            });
        }
    }
    if let Some(max) = loaded.max_index {
        if max >= base.num_nodes() {
            return Err(Error::NodeCountMismatch {
                expected: base.num_nodes(),
                found: max + 1,
            });
        }
    }
    Graph::new(base.num_nodes(), &loaded.edges)
}

/// Edge-set change between a graph and its rewired version.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeAccounting {
    pub edges_before: usize,
    pub edges_after: usize,
    pub added: usize,
    pub removed: usize,
    /// `edges_after − edges_before`.
    pub net: i64,
}

pub fn edge_accounting(before: &Graph, after: &Graph) -> EdgeAccounting {
    let added = after
        .edges()
        .iter()
        .filter(|&&(u, v)| !before.has_edge(u, v))
        .count();
    let removed = before
        .edges()
        .iter()
        .filter(|&&(u, v)| !after.has_edge(u, v))
        .count();
    EdgeAccounting {
        edges_before: before.num_edges(),
        edges_after: after.num_edges(),
        added,
        removed,
        net: after.num_edges() as i64 - before.num_edges() as i64,
    }
}
