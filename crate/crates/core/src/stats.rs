//! Treatment effects of rewiring and their significance tests.
//!
//! Graph tasks use per-graph effects (ITE) averaged into an ATE with a
//! one-sample two-tailed t-test and a Bonferroni threshold over the four
//! metrics. Node tasks move the unit of analysis to node pairs: McNemar on
//! the over-squashed flags and a paired t-test on the raw decay rates.

use serde::{Deserialize, Serialize};

use crate::decay::PairDecay;
use crate::error::{Error, Result};
use crate::metrics::{GraphSummary, Metric};
use crate::special::{average_ranks, chi_square_sf_df1, student_t_two_tailed};

pub const DEFAULT_ALPHA: f64 = 0.05;

/// A graph summary tagged with the id of the graph it was measured on.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub graph_id: String,
    pub summary: GraphSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreatmentEffectSet {
    pub graph_id: String,
    pub prevalence: f64,
    pub intensity: f64,
    pub variability: f64,
    pub extremity: f64,
}

impl TreatmentEffectSet {
    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Prevalence => self.prevalence,
            Metric::Intensity => self.intensity,
            Metric::Variability => self.variability,
            Metric::Extremity => self.extremity,
        }
    }
}

/// Per-metric `after − before` on one graph.
pub fn ite(before: &Observation, after: &Observation) -> Result<TreatmentEffectSet> {
    if before.graph_id != after.graph_id {
        return Err(Error::GraphIdMismatch(
            before.graph_id.clone(),
            after.graph_id.clone(),
        ));
    }
    let (b, a) = (&before.summary, &after.summary);
    Ok(TreatmentEffectSet {
        graph_id: before.graph_id.clone(),
        prevalence: a.prevalence - b.prevalence,
        intensity: a.intensity - b.intensity,
        variability: a.variability - b.variability,
        extremity: a.extremity - b.extremity,
    })
}

/// One-sample t-test of `values` against zero.
#[derive(Debug, Clone, Copy, PartialEq)]
struct OneSample {
    mean: f64,
    std: f64,
    n: usize,
    t: Option<f64>,
    p: f64,
    degenerate: bool,
}

fn one_sample_t(values: &[f64]) -> Result<OneSample> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n });
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|x| (x - mean).powi(2)).sum();
    let std = (ss / (n - 1) as f64).sqrt();
    if std == 0.0 {
        // Zero spread: no evidence when the mean is zero, certainty otherwise.
        let p = if mean == 0.0 { 1.0 } else { 0.0 };
        return Ok(OneSample {
            mean,
            std,
            n,
            t: None,
            p,
            degenerate: true,
        });
    }
    let t = mean / (std / (n as f64).sqrt());
    let p = student_t_two_tailed(t, (n - 1) as f64)?.p;
    Ok(OneSample {
        mean,
        std,
        n,
        t: Some(t),
        p,
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AteReport {
    pub metric: Metric,
    pub ate: f64,
    pub std: f64,
    pub n: usize,
    /// Absent when the ITEs have zero spread.
    pub t_stat: Option<f64>,
    pub p_two_tailed: f64,
    /// `p < alpha / 4`.
    pub significant: bool,
    pub degenerate: bool,
}

pub fn ate(ites: &[TreatmentEffectSet], metric: Metric) -> Result<AteReport> {
    ate_with_alpha(ites, metric, DEFAULT_ALPHA)
}

pub fn ate_with_alpha(
    ites: &[TreatmentEffectSet],
    metric: Metric,
    alpha: f64,
) -> Result<AteReport> {
    let values: Vec<f64> = ites.iter().map(|e| e.get(metric)).collect();
    let test = one_sample_t(&values)?;
    Ok(AteReport {
        metric,
        ate: test.mean,
        std: test.std,
        n: test.n,
        t_stat: test.t,
        p_two_tailed: test.p,
        significant: bonferroni(&[test.p; 4], alpha)[0],
        degenerate: test.degenerate,
    })
}

/// ATE reports for all four metrics.
pub fn ate_all(ites: &[TreatmentEffectSet], alpha: f64) -> Result<Vec<AteReport>> {
    Metric::ALL
        .iter()
        .map(|&m| ate_with_alpha(ites, m, alpha))
        .collect()
}

/// Significance flags `p_i < alpha / 4` for the four metric tests.
pub fn bonferroni(ps: &[f64; 4], alpha: f64) -> [bool; 4] {
    let threshold = alpha / ps.len() as f64;
    ps.map(|p| p < threshold)
}

/// Unweighted mean of configuration-level ATEs.
pub fn aggregate_ate(reports: &[AteReport]) -> Option<f64> {
    (!reports.is_empty()).then(|| reports.iter().map(|r| r.ate).sum::<f64>() / reports.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairedTest {
    Mcnemar,
    PairedT,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedReport {
    pub test: PairedTest,
    pub statistic: Option<f64>,
    pub p: f64,
    pub n_pairs: usize,
    /// McNemar only: pairs flipping over-squashed → not.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    /// McNemar only: pairs flipping not → over-squashed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

/// McNemar's test without continuity correction.
pub fn mcnemar(before: &[bool], after: &[bool]) -> Result<PairedReport> {
    if before.len() != after.len() {
        return Err(Error::LengthMismatch(before.len(), after.len()));
    }
    let b = before.iter().zip(after).filter(|&(&x, &y)| x && !y).count();
    let c = before.iter().zip(after).filter(|&(&x, &y)| !x && y).count();
    let (statistic, p, flag) = if b + c == 0 {
        (None, 1.0, Some("no discordant pairs".to_string()))
    } else {
        let diff = b as f64 - c as f64;
        let stat = diff * diff / (b + c) as f64;
        (Some(stat), chi_square_sf_df1(stat)?.p, None)
    };
    Ok(PairedReport {
        test: PairedTest::Mcnemar,
        statistic,
        p,
        n_pairs: before.len(),
        b: Some(b),
        c: Some(c),
        flag,
    })
}

/// Paired two-tailed t-test on `after − before`.
pub fn paired_t(before: &[f64], after: &[f64]) -> Result<PairedReport> {
    if before.len() != after.len() {
        return Err(Error::LengthMismatch(before.len(), after.len()));
    }
    let diffs: Vec<f64> = after.iter().zip(before).map(|(a, b)| a - b).collect();
    let test = one_sample_t(&diffs)?;
    Ok(PairedReport {
        test: PairedTest::PairedT,
        statistic: test.t,
        p: test.p,
        n_pairs: test.n,
        b: None,
        c: None,
        flag: test
            .degenerate
            .then(|| "zero variance of differences".to_string()),
    })
}

/// Pair-level rates aligned across two conditions of the same graph.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AlignedPairs {
    pub pairs: Vec<(usize, usize)>,
    pub before_k: Vec<f64>,
    pub after_k: Vec<f64>,
    /// Valid before rewiring only.
    pub only_before: usize,
    /// Valid after rewiring only.
    pub only_after: usize,
}

impl AlignedPairs {
    pub fn before_flags(&self) -> Vec<bool> {
        self.before_k.iter().map(|&k| k > 0.0).collect()
    }

    pub fn after_flags(&self) -> Vec<bool> {
        self.after_k.iter().map(|&k| k > 0.0).collect()
    }
}

/// Keeps the ordered `(source, target)` pairs valid in both conditions.
pub fn align_pairs(before: &[PairDecay], after: &[PairDecay]) -> AlignedPairs {
    let key = |p: &PairDecay| (p.target, p.source);
    let mut b: Vec<&PairDecay> = before.iter().collect();
    let mut a: Vec<&PairDecay> = after.iter().collect();
    b.sort_by_key(|p| key(p));
    a.sort_by_key(|p| key(p));
    let mut out = AlignedPairs::default();
    let (mut i, mut j) = (0, 0);
    while i < b.len() && j < a.len() {
        match key(b[i]).cmp(&key(a[j])) {
            std::cmp::Ordering::Less => {
                out.only_before += 1;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.only_after += 1;
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.pairs.push((b[i].source, b[i].target));
                out.before_k.push(b[i].k());
                out.after_k.push(a[j].k());
                i += 1;
                j += 1;
            }
        }
    }
    out.only_before += b.len() - i;
    out.only_after += a.len() - j;
    out
}

/// `100 · effect / baseline`; `None` when the baseline is not positive.
pub fn responsiveness(avg_effect: f64, baseline: f64) -> Option<f64> {
    (baseline > 0.0).then(|| 100.0 * avg_effect / baseline)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpearmanResult {
    /// `None` when either input has zero rank variance.
    pub rho: Option<f64>,
    pub p_two_tailed: Option<f64>,
    pub n: usize,
}

pub fn spearman(x: &[f64], y: &[f64]) -> Result<SpearmanResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::InsufficientSamples { needed: 3, got: n });
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let mean = (n as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mean) * (b - mean);
        sxx += (a - mean) * (a - mean);
        syy += (b - mean) * (b - mean);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(SpearmanResult {
            rho: None,
            p_two_tailed: None,
            n,
        });
    }
    let rho = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let p = if rho.abs() == 1.0 {
        0.0
    } else {
        let t = rho * ((n as f64 - 2.0) / (1.0 - rho * rho)).sqrt();
        student_t_two_tailed(t, n as f64 - 2.0)?.p
    };
    Ok(SpearmanResult {
        rho: Some(rho),
        p_two_tailed: Some(p),
        n,
    })
}
