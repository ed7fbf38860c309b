//! Normalized sensitivity `J̃_ℓ(v, u)`: column `v` of `(A + I)^ℓ` divided
//! by its column sum.
//!
//! Columns are streamed one target at a time by repeated multiplication
//! with the self-loop augmented adjacency. The working vector is divided by
//! its sum after every step; the final normalization cancels any positive
//! factor, so the rescaling keeps magnitudes bounded without changing the
//! result. All sums run in ascending node order.

use std::io::Write;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::graph::{diameter, Graph};

/// Inclusive depth sweep `[D, max(2D - 1, D + 1)]` for a graph of diameter `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerRange {
    pub start: usize,
    pub end: usize,
}

impl LayerRange {
    pub fn from_diameter(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::NoMeasurablePairs);
        }
        Ok(LayerRange {
            start: d,
            end: (2 * d - 1).max(d + 1),
        })
    }

    pub fn layers(&self) -> RangeInclusive<usize> {
        self.start..=self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub fn layer_range(g: &Graph) -> Result<LayerRange> {
    LayerRange::from_diameter(diameter(g).value)
}

/// Streaming evaluator of `(A + I)^ℓ e_v`, up to a positive scalar.
#[derive(Debug, Clone)]
pub struct ColumnPropagator<'g> {
    graph: &'g Graph,
    target: usize,
    layer: usize,
    work: Vec<f64>,
    scratch: Vec<f64>,
}

impl<'g> ColumnPropagator<'g> {
    pub fn new(graph: &'g Graph, target: usize) -> Result<Self> {
        let n = graph.num_nodes();
        if target >= n {
            return Err(Error::InvalidNode {
                node: target,
                num_nodes: n,
            });
        }
        let mut work = vec![0.0; n];
        work[target] = 1.0;
        Ok(ColumnPropagator {
            graph,
            target,
            layer: 0,
            work,
            scratch: vec![0.0; n],
        })
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn layer(&self) -> usize {
        self.layer
    }

    /// One multiplication by `A + I` followed by division by the vector sum.
    pub fn advance(&mut self) {
        for (i, out) in self.scratch.iter_mut().enumerate() {
            let mut acc = self.work[i];
            for &j in self.graph.neighbors(i) {
                acc += self.work[j];
            }
            *out = acc;
        }
        std::mem::swap(&mut self.work, &mut self.scratch);
        let total = ordered_sum(&self.work);
        self.scale_by(total.recip());
        self.layer += 1;
    }

    /// Multiplies the working vector by `factor > 0`.
    pub fn scale_by(&mut self, factor: f64) {
        debug_assert!(factor > 0.0);
        for x in &mut self.work {
            *x *= factor;
        }
    }

    /// The current column normalized to sum 1.
    pub fn normalized(&self) -> Vec<f64> {
        let total = ordered_sum(&self.work);
        self.work.iter().map(|x| x / total).collect()
    }
}

fn ordered_sum(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |acc, x| acc + x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityColumn {
    pub target: usize,
    pub layer: usize,
    /// `values[u] = J̃_layer(target, u)`.
    pub values: Vec<f64>,
}

pub fn normalized_column(g: &Graph, v: usize, layer: usize) -> Result<SensitivityColumn> {
    let mut prop = ColumnPropagator::new(g, v)?;
    for _ in 0..layer {
        prop.advance();
    }
    Ok(SensitivityColumn {
        target: v,
        layer,
        values: prop.normalized(),
    })
}

/// Normalized columns for one target over every depth of a [`LayerRange`].
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSeries {
    pub target: usize,
    pub range: LayerRange,
    /// `columns[i][u]` is `J̃_{range.start + i}(target, u)`.
    pub columns: Vec<Vec<f64>>,
}

impl ColumnSeries {
    /// Ascending-depth series for source `u`, or `None` when `u` is never
    /// reached (different component).
    pub fn series(&self, u: usize) -> Option<Vec<f64>> {
        let s: Vec<f64> = self.columns.iter().map(|c| c[u]).collect();
        if s.iter().all(|&x| x == 0.0) {
            None
        } else {
            Some(s)
        }
    }

    /// `(ℓ, J̃_ℓ)` points for source `u`.
    pub fn points(&self, u: usize) -> Option<Vec<(usize, f64)>> {
        self.series(u).map(|s| self.range.layers().zip(s).collect())
    }
}

/// Streams the columns of target `v` for all depths in `range` in a single
/// forward pass.
pub fn column_series(g: &Graph, v: usize, range: LayerRange) -> Result<ColumnSeries> {
    let mut prop = ColumnPropagator::new(g, v)?;
    let mut columns = Vec::with_capacity(range.len());
    while prop.layer() < range.start {
        prop.advance();
    }
    loop {
        columns.push(prop.normalized());
        if prop.layer() == range.end {
            break;
        }
        prop.advance();
    }
    Ok(ColumnSeries {
        target: v,
        range,
        columns,
    })
}

/// Formats a float with 17 significant digits.
pub(crate) fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes every `(v, u, ℓ, jtilde)` row of the graph's series as CSV.
pub fn write_series_csv<W: Write>(out: W, g: &Graph, range: LayerRange) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["v", "u", "layer", "jtilde"])?;
    for v in 0..g.num_nodes() {
        let cs = column_series(g, v, range)?;
        for (i, layer) in range.layers().enumerate() {
            for (u, &val) in cs.columns[i].iter().enumerate() {
                w.write_record([v.to_string(), u.to_string(), layer.to_string(), fmt17(val)])?;
            }
        }
    }
    w.flush().map_err(|e| Error::io("<series csv>", e))?;
    Ok(())
}
