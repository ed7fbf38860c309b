//! Spectral-gap oriented edge addition.
//!
//! Tracks an approximation `x` of the first nontrivial eigenvector of
//! `D^{-1/2} A D^{-1/2}` on the largest component and repeatedly connects the
//! pair with the most negative `x_u x_v / sqrt((1 + d_u)(1 + d_v))`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{connected_components, Graph};
use crate::rewiring::resistance::non_edges;

pub const DEFAULT_INIT_ITERS: usize = 50;

/// Power-iteration state over one component, in local indices.
#[derive(Debug, Clone)]
pub struct SpectralState {
    adjacency: Vec<Vec<usize>>,
    x: Vec<f64>,
}

impl SpectralState {
    /// Seeded uniform random unit start vector, deflated.
    pub fn new(adjacency: Vec<Vec<usize>>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = (0..adjacency.len())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let mut state = SpectralState { adjacency, x };
        state.deflate_and_normalize();
        state
    }

    pub fn vector(&self) -> &[f64] {
        &self.x
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// The trivial eigenvector direction, `sqrt(deg)`.
    pub fn trivial_direction(&self) -> Vec<f64> {
        self.adjacency
            .iter()
            .map(|nbrs| (nbrs.len() as f64).sqrt())
            .collect()
    }

    fn deflate_and_normalize(&mut self) {
        let s = self.trivial_direction();
        let ss: f64 = s.iter().map(|v| v * v).sum();
        if ss > 0.0 {
            // Two passes of projection keep the residual at rounding level.
            for _ in 0..2 {
                let dot: f64 = self.x.iter().zip(&s).map(|(a, b)| a * b).sum();
                let c = dot / ss;
                for (xi, si) in self.x.iter_mut().zip(&s) {
                    *xi -= c * si;
                }
            }
        }
        let norm = self.x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for xi in &mut self.x {
                *xi /= norm;
            }
        }
    }

    /// One deflated power-iteration step.
    pub fn step(&mut self) {
        let inv_sqrt: Vec<f64> = self
            .adjacency
            .iter()
            .map(|n| {
                if n.is_empty() {
                    0.0
                } else {
                    1.0 / (n.len() as f64).sqrt()
                }
            })
            .collect();
        let y: Vec<f64> = (0..self.x.len())
            .map(|i| {
                let acc: f64 = self.adjacency[i]
                    .iter()
                    .map(|&j| inv_sqrt[j] * self.x[j])
                    .sum();
                inv_sqrt[i] * acc
            })
            .collect();
        self.x = y;
        self.deflate_and_normalize();
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        for (p, q) in [(a, b), (b, a)] {
            if let Err(pos) = self.adjacency[p].binary_search(&q) {
                self.adjacency[p].insert(pos, q);
            }
        }
    }
}

/// FoSR-style edge score; lower is better.
pub fn spectral_score(x_u: f64, x_v: f64, d_u: usize, d_v: usize) -> f64 {
    x_u * x_v / (((1 + d_u) * (1 + d_v)) as f64).sqrt()
}

/// Candidate with the smallest score; the first one wins ties.
pub fn pick_spectral_edge(
    x: &[f64],
    degrees: &[usize],
    candidates: &[(usize, usize)],
) -> Option<((usize, usize), f64)> {
    let mut best: Option<((usize, usize), f64)> = None;
    for &(u, v) in candidates {
        let s = spectral_score(x[u], x[v], degrees[u], degrees[v]);
        if best.is_none_or(|(_, b)| s < b) {
            best = Some(((u, v), s));
        }
    }
    best
}

/// Adds up to `num_edges` edges to the largest component. Stops early once
/// the component is complete.
pub fn rewire_fosr(g: &Graph, num_edges: usize, init_iters: usize, seed: u64) -> Result<Graph> {
    let comps = connected_components(g);
    let nodes = comps
        .largest()
        .map(|c| comps.members(c))
        .unwrap_or_default();
    let sub = g.induced_subgraph(&nodes);
    let mut candidates = non_edges(&sub, &(0..sub.num_nodes()).collect::<Vec<_>>());
    if candidates.is_empty() {
        return Err(Error::NoCandidateEdges);
    }
    let adjacency = (0..sub.num_nodes())
        .map(|i| sub.neighbors(i).to_vec())
        .collect();
    let mut state = SpectralState::new(adjacency, seed);
    for _ in 0..init_iters {
        state.step();
    }
    let mut added = Vec::new();
    for _ in 0..num_edges {
        let degrees: Vec<usize> = (0..nodes.len()).map(|i| state.degree(i)).collect();
        let Some(((a, b), _)) = pick_spectral_edge(state.vector(), &degrees, &candidates) else {
            break;
        };
        candidates.retain(|&e| e != (a, b));
        state.add_edge(a, b);
        state.step();
        added.push((nodes[a], nodes[b]));
    }
    g.with_added_edges(&added)
}
