//! Run aggregation, morphological complexity, and rank correlation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::eval::EvalResult;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("complexity profile is empty")]
    EmptyProfile,
    #[error("feature {feature} has value {value}, outside [0, 1]")]
    OutOfRange { feature: String, value: f64 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least two observations, got {0}")]
    TooShort(usize),
    #[error("input is constant; rank correlation is undefined")]
    Constant,
    #[error("input contains a non-finite value")]
    NonFinite,
    #[error("no runs to aggregate")]
    NoRuns,
    #[error("run {run_id} covers a different set of constructions than run {first}")]
    MismatchedConstructions { first: String, run_id: String },
}

/// Normalized morphological feature values for one language.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityProfile {
    pub language: String,
    pub features: Vec<(String, f64)>,
}

impl ComplexityProfile {
    pub fn n(&self) -> usize {
        self.features.len()
    }

    /// Full WALS-based profiles carry 27 or 28 features; other sizes are
    /// accepted but worth flagging.
    pub fn has_standard_size(&self) -> bool {
        matches!(self.n(), 27 | 28)
    }
}

/// Mean of the normalized feature values, `Σ f_i / n`.
pub fn c_wals(p: &ComplexityProfile) -> Result<f64, MetricsError> {
    if p.features.is_empty() {
        return Err(MetricsError::EmptyProfile);
    }
    for (feature, value) in &p.features {
        if !(0.0..=1.0).contains(value) {
            return Err(MetricsError::OutOfRange {
                feature: feature.clone(),
                value: *value,
            });
        }
    }
    let sum: f64 = p.features.iter().map(|(_, v)| v).sum();
    Ok(sum / p.n() as f64)
}

/// Spearman's rank correlation: Pearson correlation of average ranks, so tied
/// values share the mean of the positions they occupy.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64, MetricsError> {
    if x.len() != y.len() {
        return Err(MetricsError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(MetricsError::TooShort(x.len()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(MetricsError::NonFinite);
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

/// 1-based ranks; ties receive the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = alloc::vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // Positions i+1 ..= j share their mean.
        let rank = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = rank;
        }
        i = j;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64, MetricsError> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(MetricsError::Constant);
    }
    // sqrt of the product (not product of sqrts) keeps r(x, x) exactly 1.
    let r = sxy / libm::sqrt(sxx * syy);
    Ok(r.clamp(-1.0, 1.0))
}

/// Results of one training run (one seed) across constructions.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResults {
    pub run_id: String,
    pub results: BTreeMap<String, EvalResult>,
}

impl RunResults {
    pub fn new(run_id: impl Into<String>, results: impl IntoIterator<Item = EvalResult>) -> Self {
        RunResults {
            run_id: run_id.into(),
            results: results
                .into_iter()
                .map(|r| (r.construction_id.clone(), r))
                .collect(),
        }
    }
}

/// Mean and spread of one construction's accuracy across runs.
///
/// Runs with undefined accuracy (everything skipped) are left out; `defined`
/// counts the rest. `std` is the sample standard deviation and needs at least
/// two defined runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionSummary {
    pub construction_id: String,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub defined: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateReport {
    pub run_count: usize,
    /// Ordered by construction id.
    pub constructions: Vec<ConstructionSummary>,
    /// Unweighted mean of the defined construction means.
    pub average: Option<f64>,
}

pub fn aggregate_runs(runs: &[RunResults]) -> Result<AggregateReport, MetricsError> {
    let first = runs.first().ok_or(MetricsError::NoRuns)?;
    let ids: BTreeSet<&String> = first.results.keys().collect();
    for run in &runs[1..] {
        if run.results.keys().collect::<BTreeSet<_>>() != ids {
            return Err(MetricsError::MismatchedConstructions {
                first: first.run_id.clone(),
                run_id: run.run_id.clone(),
            });
        }
    }

    let constructions: Vec<ConstructionSummary> = ids
        .into_iter()
        .map(|id| {
            let values: Vec<f64> = runs
                .iter()
                .filter_map(|r| r.results[id].accuracy())
                .collect();
            summarize(id, &values)
        })
        .collect();
    let average = mean(constructions.iter().filter_map(|c| c.mean));
    Ok(AggregateReport {
        run_count: runs.len(),
        constructions,
        average,
    })
}

fn summarize(id: &str, values: &[f64]) -> ConstructionSummary {
    let m = mean(values.iter().copied());
    let std = match (m, values.len()) {
        (Some(m), n) if n >= 2 => {
            let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
            Some(libm::sqrt(ss / (n - 1) as f64))
        }
        _ => None,
    };
    ConstructionSummary {
        construction_id: id.into(),
        mean: m,
        std,
        defined: values.len(),
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}
