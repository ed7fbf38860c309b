// Shared fixtures and dense reference computations for the integration tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use oversquash::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi graph.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}

pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    Graph::new(n, &edges).unwrap()
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::new(n, &edges).unwrap()
}

/// Complete binary tree in heap order with `depth` edge levels.
pub fn binary_tree(depth: u32) -> Graph {
    let n = (1usize << (depth + 1)) - 1;
    let edges: Vec<_> = (1..n).map(|i| ((i - 1) / 2, i)).collect();
    Graph::new(n, &edges).unwrap()
}

pub fn adjacency(g: &Graph) -> DMatrix<f64> {
    let n = g.num_nodes();
    let mut a = DMatrix::zeros(n, n);
    for &(u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    a
}

/// `(A + I)^layer`, dense.
pub fn dense_power(g: &Graph, layer: usize) -> DMatrix<f64> {
    let n = g.num_nodes();
    let at = adjacency(g) + DMatrix::identity(n, n);
    let mut p = DMatrix::identity(n, n);
    for _ in 0..layer {
        p = &at * p;
    }
    p
}

/// Column `v` of `(A + I)^layer` divided by its sum.
pub fn dense_normalized_column(g: &Graph, v: usize, layer: usize) -> Vec<f64> {
    let p = dense_power(g, layer);
    let col = p.column(v);
    let s = col.sum();
    col.iter().map(|x| x / s).collect()
}

/// Plain least-squares slope of `ln y` on `x`, negated.
pub fn dense_decay_rate(points: &[(usize, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 as f64 - mx) * (p.1.ln() - my))
        .sum();
    let sxx: f64 = points.iter().map(|p| (p.0 as f64 - mx).powi(2)).sum();
    -sxy / sxx
}

/// Laplacian pseudoinverse through nalgebra's SVD.
pub fn svd_pinv(g: &Graph) -> DMatrix<f64> {
    let a = adjacency(g);
    let n = g.num_nodes();
    let mut l = -a.clone();
    for i in 0..n {
        l[(i, i)] = a.row(i).sum();
    }
    l.pseudo_inverse(1e-9).unwrap()
}

pub fn total_resistance(pinv: &DMatrix<f64>) -> f64 {
    pinv.nrows() as f64 * pinv.trace()
}

pub fn resistance(pinv: &DMatrix<f64>, u: usize, v: usize) -> f64 {
    pinv[(u, u)] + pinv[(v, v)] - 2.0 * pinv[(u, v)]
}

pub fn write_edge_lists(dir: &Path, graphs: &[Graph]) {
    std::fs::create_dir_all(dir).unwrap();
    for (i, g) in graphs.iter().enumerate() {
        oversquash::io::write_edge_list(g, &dir.join(format!("g{i:03}.txt"))).unwrap();
    }
}

/// Location of a local MUTAG copy, if any.
pub fn mutag_dir() -> Option<PathBuf> {
    let candidates = [
        std::env::var_os("OVERSQUASH_MUTAG_DIR").map(PathBuf::from),
        Some(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/MUTAG")),
    ];
    candidates
        .into_iter()
        .flatten()
        .find(|d| d.join("MUTAG_A.txt").is_file())
}
