//! Graph-level over-squashing statistics built from pairwise decay rates.

use serde::{Deserialize, Serialize};

use crate::decay::{graph_decay_rates_in, PairDecay};
use crate::error::{Error, Result};
use crate::graph::{connected_components, diameter, Graph};
use crate::sensitivity::LayerRange;

/// Lower edge of the moderate band for rate-valued statistics.
pub const RATE_MODERATE: f64 = 0.13;
/// Upper edge of the moderate band for rate-valued statistics.
pub const RATE_STRONG: f64 = 0.23;
pub const PREVALENCE_MODERATE: f64 = 0.25;
pub const PREVALENCE_LARGE: f64 = 0.50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    /// Fraction of valid pairs with `k > 0`.
    pub prevalence: f64,
    /// Mean positive rate.
    pub intensity: f64,
    /// Sample standard deviation of the positive rates.
    pub variability: f64,
    /// Largest positive rate.
    pub extremity: f64,
    pub valid_pairs: usize,
    pub positive_pairs: usize,
    pub excluded_cross_component_pairs: usize,
}

impl GraphSummary {
    /// No valid pairs at all; such graphs are skipped in dataset means.
    pub fn is_empty(&self) -> bool {
        self.valid_pairs == 0
    }

    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Prevalence => self.prevalence,
            Metric::Intensity => self.intensity,
            Metric::Variability => self.variability,
            Metric::Extremity => self.extremity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Prevalence,
    Intensity,
    Variability,
    Extremity,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::Prevalence,
        Metric::Intensity,
        Metric::Variability,
        Metric::Extremity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Prevalence => "prevalence",
            Metric::Intensity => "intensity",
            Metric::Variability => "variability",
            Metric::Extremity => "extremity",
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub fn summarize(rates: &[PairDecay]) -> GraphSummary {
    // Sorting first makes every reduction independent of input order.
    let mut positive: Vec<f64> = rates.iter().map(|p| p.k()).filter(|&k| k > 0.0).collect();
    positive.sort_by(f64::total_cmp);
    let valid_pairs = rates.len();
    let positive_pairs = positive.len();
    let prevalence = if valid_pairs == 0 {
        0.0
    } else {
        positive_pairs as f64 / valid_pairs as f64
    };
    let (intensity, variability, extremity) = match positive_pairs {
        0 => (0.0, 0.0, 0.0),
        1 => (positive[0], 0.0, positive[0]),
        n => {
            let mean = positive.iter().sum::<f64>() / n as f64;
            let ss: f64 = positive.iter().map(|k| (k - mean).powi(2)).sum();
            (mean, (ss / (n - 1) as f64).sqrt(), positive[n - 1])
        }
    };
    GraphSummary {
        prevalence,
        intensity,
        variability,
        extremity,
        valid_pairs,
        positive_pairs,
        excluded_cross_component_pairs: 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strength {
    Weak,
    Moderate,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spread {
    Low,
    Moderate,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extent {
    Small,
    Moderate,
    Large,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CategoryLabels {
    pub prevalence: Extent,
    pub intensity: Strength,
    pub variability: Spread,
    pub extremity: Strength,
    /// `ln 2 / intensity`, absent when intensity is 0.
    pub intensity_half_life: Option<f64>,
    pub extremity_half_life: Option<f64>,
}

fn rate_band(x: f64) -> u8 {
    if x < RATE_MODERATE {
        0
    } else if x <= RATE_STRONG {
        1
    } else {
        2
    }
}

fn strength(x: f64) -> Strength {
    [Strength::Weak, Strength::Moderate, Strength::Strong][rate_band(x) as usize]
}

fn half_life(k: f64) -> Option<f64> {
    (k > 0.0).then(|| std::f64::consts::LN_2 / k)
}

pub fn categorize(s: &GraphSummary) -> CategoryLabels {
    let prevalence = if s.prevalence < PREVALENCE_MODERATE {
        Extent::Small
    } else if s.prevalence <= PREVALENCE_LARGE {
        Extent::Moderate
    } else {
        Extent::Large
    };
    CategoryLabels {
        prevalence,
        intensity: strength(s.intensity),
        variability: [Spread::Low, Spread::Moderate, Spread::High]
            [rate_band(s.variability) as usize],
        extremity: strength(s.extremity),
        intensity_half_life: half_life(s.intensity),
        extremity_half_life: half_life(s.extremity),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub prevalence: f64,
    pub intensity: f64,
    pub variability: f64,
    pub extremity: f64,
    pub graphs_counted: usize,
    pub graphs_skipped: usize,
}

impl DatasetSummary {
    /// Dataset means viewed as a single summary (pair counts zeroed), handy
    /// for categorization and responsiveness baselines.
    pub fn as_summary(&self) -> GraphSummary {
        GraphSummary {
            prevalence: self.prevalence,
            intensity: self.intensity,
            variability: self.variability,
            extremity: self.extremity,
            valid_pairs: 0,
            positive_pairs: 0,
            excluded_cross_component_pairs: 0,
        }
    }

    pub fn get(&self, metric: Metric) -> f64 {
        self.as_summary().get(metric)
    }
}

pub fn dataset_summary(summaries: &[GraphSummary]) -> Result<DatasetSummary> {
    let counted: Vec<&GraphSummary> = summaries.iter().filter(|s| !s.is_empty()).collect();
    if counted.is_empty() {
        return Err(Error::AllGraphsSkipped);
    }
    let n = counted.len() as f64;
    let mean = |f: fn(&GraphSummary) -> f64| counted.iter().map(|s| f(s)).sum::<f64>() / n;
    Ok(DatasetSummary {
        prevalence: mean(|s| s.prevalence),
        intensity: mean(|s| s.intensity),
        variability: mean(|s| s.variability),
        extremity: mean(|s| s.extremity),
        graphs_counted: counted.len(),
        graphs_skipped: summaries.len() - counted.len(),
    })
}

/// Everything measured on one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphMeasurement {
    pub num_nodes: usize,
    pub num_edges: usize,
    pub components: usize,
    pub diameter: usize,
    /// `None` when every component is a singleton.
    pub range: Option<LayerRange>,
    pub rates: Vec<PairDecay>,
    pub summary: GraphSummary,
}

/// Runs the full pair-decay pipeline on one graph. Graphs without measurable
/// pairs yield an empty (flagged) summary rather than an error.
pub fn measure_graph(g: &Graph) -> Result<GraphMeasurement> {
    let comps = connected_components(g);
    let d = diameter(g).value;
    let range = LayerRange::from_diameter(d).ok();
    let rates = match range {
        Some(r) => graph_decay_rates_in(g, r)?,
        None => Vec::new(),
    };
    let mut summary = summarize(&rates);
    let n = g.num_nodes();
    summary.excluded_cross_component_pairs = n * n.saturating_sub(1) - rates.len();
    Ok(GraphMeasurement {
        num_nodes: n,
        num_edges: g.num_edges(),
        components: comps.num_components,
        diameter: d,
        range,
        rates,
        summary,
    })
}
