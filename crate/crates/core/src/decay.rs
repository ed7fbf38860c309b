//! Exponential decay fits of normalized sensitivity against depth.
//!
//! `ln J̃_ℓ(v, u) = ln N0 − k_vu · ℓ` is fitted by ordinary least squares for
//! every ordered pair of distinct nodes sharing a component.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{connected_components, Graph};
use crate::sensitivity::{column_series, fmt17, layer_range, LayerRange};

/// Absolute rounding noise assumed on each `ln J̃`. Slopes the noise alone
/// could produce are reported as exactly zero, so that constant series do
/// not pick up a labeling-dependent sign.
const LN_NOISE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// Decay rate per layer (the negated slope).
    pub k: f64,
    /// Intercept, `ln N0`.
    pub ln_n0: f64,
    pub num_points: usize,
}

/// Decay of target `v`'s sensitivity to source `u`. `k_vu` and `k_uv` are
/// separate records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDecay {
    pub source: usize,
    pub target: usize,
    pub fit: DecayFit,
}

impl PairDecay {
    pub fn k(&self) -> f64 {
        self.fit.k
    }

    /// Strictly positive decay.
    pub fn is_oversquashed(&self) -> bool {
        self.fit.k > 0.0
    }
}

pub fn fit_decay(points: &[(usize, f64)]) -> Result<DecayFit> {
    if points.len() < 2 {
        return Err(Error::InvalidSeries(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    if let Some(&(layer, y)) = points.iter().find(|&&(_, y)| y.is_nan() || y <= 0.0) {
        return Err(Error::InvalidSeries(format!(
            "nonpositive sensitivity {y} at layer {layer}"
        )));
    }
    let n = points.len() as f64;
    let x_mean = points.iter().map(|&(l, _)| l as f64).sum::<f64>() / n;
    let y_mean = points.iter().map(|&(_, y)| y.ln()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(l, y) in points {
        let dx = l as f64 - x_mean;
        sxy += dx * (y.ln() - y_mean);
        sxx += dx * dx;
    }
    if sxx == 0.0 {
        return Err(Error::InvalidSeries("all points share one layer".into()));
    }
    let noise = LN_NOISE
        * points
            .iter()
            .map(|&(l, _)| (l as f64 - x_mean).abs())
            .sum::<f64>();
    let slope = if sxy.abs() <= noise { 0.0 } else { sxy / sxx };
    Ok(DecayFit {
        k: -slope,
        ln_n0: y_mean - slope * x_mean,
        num_points: points.len(),
    })
}

/// Coefficient of determination of `fit` on `points`. Debugging aid only.
pub fn r_squared(points: &[(usize, f64)], fit: &DecayFit) -> f64 {
    let n = points.len() as f64;
    let y_mean = points.iter().map(|&(_, y)| y.ln()).sum::<f64>() / n;
    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for &(l, y) in points {
        let pred = fit.ln_n0 - fit.k * l as f64;
        ss_res += (y.ln() - pred).powi(2);
        ss_tot += (y.ln() - y_mean).powi(2);
    }
    if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    }
}

/// Decay rates of every ordered same-component pair, using the graph's own
/// layer range. Ordered by target, then source.
pub fn graph_decay_rates(g: &Graph) -> Result<Vec<PairDecay>> {
    let range = layer_range(g)?;
    graph_decay_rates_in(g, range)
}

pub fn graph_decay_rates_in(g: &Graph, range: LayerRange) -> Result<Vec<PairDecay>> {
    let comps = connected_components(g);
    let per_target: Vec<Vec<PairDecay>> = (0..g.num_nodes())
        .into_par_iter()
        .map(|v| {
            if comps.sizes[comps.label[v]] < 2 {
                return Ok(Vec::new());
            }
            let cs = column_series(g, v, range)?;
            let mut out = Vec::new();
            for u in 0..g.num_nodes() {
                if u == v || !comps.same_component(u, v) {
                    continue;
                }
                let points = cs.points(u).ok_or_else(|| {
                    Error::InvalidSeries(format!("pair ({u}, {v}) never reached"))
                })?;
                out.push(PairDecay {
                    source: u,
                    target: v,
                    fit: fit_decay(&points)?,
                });
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(per_target.into_iter().flatten().collect())
}

/// Writes `(u, v, k, ln_n0)` rows.
pub fn write_pairs_csv<W: Write>(out: W, rates: &[PairDecay]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["u", "v", "k", "ln_n0"])?;
    for p in rates {
        w.write_record([
            p.source.to_string(),
            p.target.to_string(),
            fmt17(p.fit.k),
            fmt17(p.fit.ln_n0),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<pairs csv>", e))?;
    Ok(())
}
