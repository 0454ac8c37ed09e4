//! Period of an orbit from the levels of its successive peaks.

use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;

/// Minimum number of peaks needed to call a period.
pub const MIN_PEAKS: usize = 8;

/// A cluster wider than this many linkage distances is a continuous band
/// (torus or chaos), not a peak level.
const BAND_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PeriodEstimate {
    /// `n` distinct peak levels visited in a repeating order.
    Periodic(usize),
    /// Peaks fill bands or never settle into a repeating order.
    Aperiodic { clusters: usize },
    /// Outcome changes between half and one-and-a-half times the tolerance.
    Ambiguous { counts: [usize; 3] },
}

impl PeriodEstimate {
    pub fn period(&self) -> Option<usize> {
        match self {
            PeriodEstimate::Periodic(n) => Some(*n),
            _ => None,
        }
    }
}

/// Single-linkage clusters of `values` with linkage distance `threshold`.
/// Returns the label of each value (labels ordered by level) and the width
/// of each cluster.
fn cluster_levels(values: &[f64], threshold: f64) -> (Vec<usize>, Vec<f64>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut labels = vec![0; values.len()];
    let mut widths = Vec::new();
    let mut start = values[order[0]];
    let mut label = 0;
    for w in 0..order.len() {
        let idx = order[w];
        if w > 0 && values[idx] - values[order[w - 1]] > threshold {
            widths.push(values[order[w - 1]] - start);
            start = values[idx];
            label += 1;
        }
        labels[idx] = label;
    }
    widths.push(values[order[order.len() - 1]] - start);
    (labels, widths)
}

fn estimate_at(values: &[f64], threshold: f64) -> PeriodEstimate {
    let (labels, widths) = cluster_levels(values, threshold);
    let n = widths.len();
    let banded = widths.iter().any(|&w| w > BAND_FACTOR * threshold);
    let repeats = n < labels.len() && labels.iter().zip(&labels[n..]).all(|(a, b)| a == b);
    if !banded && repeats {
        PeriodEstimate::Periodic(n)
    } else {
        PeriodEstimate::Aperiodic { clusters: n }
    }
}

/// Number of distinct peak levels of a periodic orbit.
///
/// Peaks are grouped by single linkage with distance
/// `cluster_tol_rel * max|peak|`; the orbit is periodic with period `n` when
/// there are `n` tight groups and the sequence of group labels repeats with
/// period `n`. The call is repeated at half and one-and-a-half times the
/// tolerance and reported as ambiguous if the three disagree.
pub fn detect_period(z_maxima: &[f64], cluster_tol_rel: f64) -> Result<PeriodEstimate, AnalysisError> {
    if z_maxima.len() < MIN_PEAKS {
        return Err(AnalysisError::TooFewSamples { needed: MIN_PEAKS, got: z_maxima.len() });
    }
    if !(cluster_tol_rel > 0.0 && cluster_tol_rel.is_finite()) {
        return Err(AnalysisError::Invalid(format!("cluster_tol_rel must be > 0 (got {cluster_tol_rel})")));
    }
    if z_maxima.iter().any(|v| !v.is_finite()) {
        return Err(AnalysisError::Invalid("non-finite peak value".into()));
    }
    let scale = z_maxima.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-9);
    let at = |rel: f64| estimate_at(z_maxima, rel * scale);
    let runs = [at(0.5 * cluster_tol_rel), at(cluster_tol_rel), at(1.5 * cluster_tol_rel)];
    let count = |e: &PeriodEstimate| match e {
        PeriodEstimate::Periodic(n) | PeriodEstimate::Aperiodic { clusters: n } => *n,
        PeriodEstimate::Ambiguous { .. } => 0,
    };
    if runs.iter().all(|r| *r == runs[1]) {
        return Ok(runs[1]);
    }
    if runs.iter().all(|r| matches!(r, PeriodEstimate::Aperiodic { .. })) {
        return Ok(runs[1]);
    }
    Ok(PeriodEstimate::Ambiguous { counts: runs.map(|r| count(&r)) })
}
