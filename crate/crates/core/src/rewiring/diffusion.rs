//! Personalized PageRank diffusion and threshold sparsification.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{connected_components, Graph};

/// Column-stochastic diffusion `S = α (I − (1 − α) A D⁻¹)⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionMatrix {
    pub s: DMatrix<f64>,
}

impl DiffusionMatrix {
    pub fn column_sums(&self) -> Vec<f64> {
        self.s.column_iter().map(|c| c.sum()).collect()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "teleport probability {alpha} outside (0, 1)"
        )))
    }
}

/// Personalized PageRank diffusion, solved densely one component at a time.
/// Isolated nodes keep all their mass (`S e_i = e_i`).
pub fn ppr(g: &Graph, alpha: f64) -> Result<DiffusionMatrix> {
    check_alpha(alpha)?;
    let n = g.num_nodes();
    let mut s = DMatrix::zeros(n, n);
    let comps = connected_components(g);
    for c in 0..comps.num_components {
        let nodes = comps.members(c);
        let k = nodes.len();
        if k == 1 {
            s[(nodes[0], nodes[0])] = 1.0;
            continue;
        }
        let sub = g.induced_subgraph(&nodes);
        let mut m = DMatrix::<f64>::identity(k, k);
        for j in 0..k {
            let w = (1.0 - alpha) / sub.degree(j) as f64;
            for &i in sub.neighbors(j) {
                m[(i, j)] -= w;
            }
        }
        let rhs = DMatrix::<f64>::identity(k, k) * alpha;
        let block = m
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::InvalidParameter("singular diffusion system".into()))?;
        for (bj, &gj) in nodes.iter().enumerate() {
            for (bi, &gi) in nodes.iter().enumerate() {
                s[(gi, gj)] = block[(bi, bj)];
            }
        }
    }
    Ok(DiffusionMatrix { s })
}

/// Keeps `(u, v)` when `S_uv ≥ eps` or `S_vu ≥ eps` (and the entry is
/// positive); the diagonal is ignored and the result is unweighted.
pub fn rewire_digl(g: &Graph, alpha: f64, eps: f64) -> Result<Graph> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "sparsification threshold {eps} is negative"
        )));
    }
    let s = ppr(g, alpha)?.s;
    let keep = |x: f64| x > 0.0 && x >= eps;
    let n = g.num_nodes();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if keep(s[(u, v)]) || keep(s[(v, u)]) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dyad() -> Graph {
        Graph::new(2, &[(0, 1)]).unwrap()
    }

    #[test]
    fn dyad_closed_form() {
        let s = ppr(&dyad(), 0.5).unwrap().s;
        let want = [[2.0 / 3.0, 1.0 / 3.0], [1.0 / 3.0, 2.0 / 3.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((s[(i, j)] - want[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn near_pure_teleport_is_identity() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = ppr(&g, 1.0 - 1e-9).unwrap().s;
        assert!((s - DMatrix::<f64>::identity(4, 4)).abs().max() < 1e-8);
    }

    #[test]
    fn columns_are_stochastic() {
        let g = Graph::new(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (1, 4)]).unwrap();
        let d = ppr(&g, 0.15).unwrap();
        for sum in d.column_sums() {
            assert!((sum - 1.0).abs() < 1e-10);
        }
        assert!(d.s.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn isolated_node_keeps_mass() {
        let g = Graph::new(3, &[(0, 1)]).unwrap();
        let s = ppr(&g, 0.3).unwrap().s;
        assert_eq!(s[(2, 2)], 1.0);
        assert_eq!(s[(0, 2)], 0.0);
        assert_eq!(s[(2, 0)], 0.0);
    }

    #[test]
    fn alpha_must_be_open_unit() {
        assert!(ppr(&dyad(), 0.0).is_err());
        assert!(ppr(&dyad(), 1.0).is_err());
    }

    #[test]
    fn digl_thresholds() {
        assert_eq!(rewire_digl(&dyad(), 0.5, 0.3).unwrap(), dyad());
        assert_eq!(rewire_digl(&dyad(), 0.5, 0.4).unwrap().num_edges(), 0);
    }

    #[test]
    fn digl_zero_threshold_completes_each_component() {
        let g = Graph::new(7, &[(0, 1), (1, 2), (2, 3), (4, 5), (5, 6)]).unwrap();
        let out = rewire_digl(&g, 0.15, 0.0).unwrap();
        assert_eq!(out.num_edges(), 6 + 3);
        assert!(!out.has_edge(0, 4));
    }

    #[test]
    fn digl_threshold_above_max_empties() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let s = ppr(&g, 0.2).unwrap().s;
        let mut max_off = 0.0f64;
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    max_off = max_off.max(s[(i, j)]);
                }
            }
        }
        assert_eq!(
            rewire_digl(&g, 0.2, max_off * 1.000001)
                .unwrap()
                .num_edges(),
            0
        );
        assert!(rewire_digl(&g, 0.2, max_off).unwrap().num_edges() >= 1);
    }
}
