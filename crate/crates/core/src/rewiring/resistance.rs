//! Effective resistance from the Laplacian pseudoinverse, and greedy
//! resistance-reducing edge addition.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::{connected_components, Graph};

/// Laplacian pseudoinverse over one connected component.
#[derive(Debug, Clone)]
pub struct ResistanceState {
    /// Global ids of the component, ascending. Row `i` of the matrices
    /// belongs to `nodes[i]`.
    nodes: Vec<usize>,
    local: Vec<Option<usize>>,
    laplacian_pinv: DMatrix<f64>,
    total_resistance: f64,
}

/// Laplacian of the subgraph of `g` induced by `nodes`, in `nodes` order.
pub fn laplacian(g: &Graph, nodes: &[usize]) -> DMatrix<f64> {
    let sub = g.induced_subgraph(nodes);
    let n = sub.num_nodes();
    let mut l = DMatrix::zeros(n, n);
    for &(u, v) in sub.edges() {
        l[(u, v)] -= 1.0;
        l[(v, u)] -= 1.0;
        l[(u, u)] += 1.0;
        l[(v, v)] += 1.0;
    }
    l
}

/// `L⁺ = (L + J/n)⁻¹ − J/n` for the Laplacian of a connected graph.
fn connected_pinv(l: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = l.nrows();
    let shift = 1.0 / n as f64;
    let shifted = l.add_scalar(shift);
    let inv = shifted
        .cholesky()
        .ok_or_else(|| Error::InvalidParameter("component is not connected".into()))?
        .inverse();
    Ok(inv.add_scalar(-shift))
}

impl ResistanceState {
    /// Builds the state for the component made of `nodes`, which must be
    /// connected in `g`.
    pub fn new(g: &Graph, nodes: &[usize]) -> Result<Self> {
        let mut nodes = nodes.to_vec();
        nodes.sort_unstable();
        nodes.dedup();
        let mut local = vec![None; g.num_nodes()];
        for (i, &n) in nodes.iter().enumerate() {
            if n >= g.num_nodes() {
                return Err(Error::InvalidNode {
                    node: n,
                    num_nodes: g.num_nodes(),
                });
            }
            local[n] = Some(i);
        }
        let laplacian_pinv = if nodes.is_empty() {
            DMatrix::zeros(0, 0)
        } else {
            connected_pinv(&laplacian(g, &nodes))?
        };
        let mut state = ResistanceState {
            nodes,
            local,
            laplacian_pinv,
            total_resistance: 0.0,
        };
        state.refresh_total();
        Ok(state)
    }

    /// State for the largest component (ties: the one holding the smallest
    /// node).
    pub fn for_largest_component(g: &Graph) -> Result<Self> {
        let comps = connected_components(g);
        let members = comps
            .largest()
            .map(|c| comps.members(c))
            .unwrap_or_default();
        Self::new(g, &members)
    }

    fn refresh_total(&mut self) {
        self.total_resistance = self.nodes.len() as f64 * self.laplacian_pinv.trace();
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn laplacian_pinv(&self) -> &DMatrix<f64> {
        &self.laplacian_pinv
    }

    /// Sum of effective resistances over unordered pairs, `n · tr(L⁺)`.
    pub fn total_resistance(&self) -> f64 {
        self.total_resistance
    }

    fn local_pair(&self, u: usize, v: usize) -> Result<(usize, usize)> {
        let get = |x: usize| self.local.get(x).copied().flatten();
        match (get(u), get(v)) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::InfiniteResistance { u, v }),
        }
    }

    /// `L⁺ (e_u − e_v)` in local coordinates.
    fn pinv_difference(&self, a: usize, b: usize) -> DVector<f64> {
        self.laplacian_pinv.column(a) - self.laplacian_pinv.column(b)
    }

    fn local_resistance(&self, a: usize, b: usize) -> f64 {
        let p = &self.laplacian_pinv;
        ((p[(a, a)] + p[(b, b)]) - (p[(a, b)] + p[(b, a)])).max(0.0)
    }

    /// Exact drop of the total resistance if edge `(u, v)` were added:
    /// `n · ‖L⁺ b‖² / (1 + R_uv)`.
    pub fn total_resistance_decrease(&self, u: usize, v: usize) -> Result<f64> {
        let (a, b) = self.local_pair(u, v)?;
        let w = self.pinv_difference(a, b);
        Ok(self.nodes.len() as f64 * w.norm_squared() / (1.0 + self.local_resistance(a, b)))
    }

    /// Adds edge `(u, v)` through the rank-one update
    /// `L⁺ ← L⁺ − (L⁺b)(L⁺b)ᵀ / (1 + bᵀL⁺b)`.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let (a, b) = self.local_pair(u, v)?;
        let w = self.pinv_difference(a, b);
        let denom = 1.0 + w[a] - w[b];
        self.laplacian_pinv -= (&w * w.transpose()) / denom;
        self.refresh_total();
        Ok(())
    }
}

/// `R_uv = L⁺_uu + L⁺_vv − 2 L⁺_uv`.
pub fn effective_resistance(rs: &ResistanceState, u: usize, v: usize) -> Result<f64> {
    let (a, b) = rs.local_pair(u, v)?;
    Ok(rs.local_resistance(a, b))
}

/// Non-edges `(u, v)`, `u < v`, among `nodes`, in lexicographic order.
pub(crate) fn non_edges(g: &Graph, nodes: &[usize]) -> Vec<(usize, usize)> {
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    for (i, &u) in sorted.iter().enumerate() {
        for &v in &sorted[i + 1..] {
            if !g.has_edge(u, v) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Greedily adds up to `num_edges` edges to the largest component, each
/// time the one with the largest drop in total effective resistance.
/// Other components pass through unchanged. Stops early once the component
/// is complete.
pub fn rewire_gtr(g: &Graph, num_edges: usize) -> Result<Graph> {
    let mut state = ResistanceState::for_largest_component(g)?;
    let mut candidates = non_edges(g, state.nodes());
    if candidates.is_empty() {
        return Err(Error::NoCandidateEdges);
    }
    let mut added = Vec::new();
    for _ in 0..num_edges {
        let mut best: Option<(usize, f64)> = None;
        for (i, &(u, v)) in candidates.iter().enumerate() {
            let gain = state.total_resistance_decrease(u, v)?;
            // Strict improvement keeps the lexicographically first maximum.
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((i, gain));
            }
        }
        let Some((i, _)) = best else { break };
        let (u, v) = candidates.remove(i);
        state.add_edge(u, v)?;
        added.push((u, v));
    }
    g.with_added_edges(&added)
}
