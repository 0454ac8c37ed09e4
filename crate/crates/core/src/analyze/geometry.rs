//! Spiral-lobe decomposition and double-spiral recognition.
//!
//! The attractors wind around two lobes related by `(x, y, z) -> (-x, -y, z)`;
//! in the `(y, z)` plane one lobe has `y > 0` and the other `y < 0`. Each
//! peak of `z` is assigned to a lobe by the sign of `y` at the peak.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::period::{detect_period, PeriodEstimate, MIN_PEAKS};
use crate::error::AnalysisError;
use crate::integrate::{local_maxima, Extremum, Trajectory};
use crate::model::State;

/// Minimum samples for [`detect_double_spiral`].
pub const MIN_CLOUD_SAMPLES: usize = 10_000;
/// Fraction of samples each half-space `x > d`, `x < -d` must hold.
pub const HALF_SPACE_OCCUPANCY: f64 = 0.25;
/// Half-space margin `d` as a fraction of the cloud diameter.
pub const HALF_SPACE_MARGIN: f64 = 0.01;
/// Peaks at or above this quantile of all z-peaks are the tallest excursions.
pub const TALL_PEAK_QUANTILE: f64 = 0.9;
/// Median `|x| / max|x|` of the tallest peaks above which they sit off the
/// symmetry axis, one excursion per lobe.
pub const TWIN_PEAK_OFFSET: f64 = 0.3;

/// Peaks of `z(t)` split by spiral lobe.
#[derive(Debug, Clone, PartialEq)]
pub struct LobePeaks {
    /// Peaks with `y > 0`.
    pub upper: Vec<Extremum>,
    /// Peaks with `y < 0`.
    pub lower: Vec<Extremum>,
}

impl LobePeaks {
    pub fn upper_values(&self) -> Vec<f64> {
        self.upper.iter().map(|e| e.value).collect()
    }

    pub fn lower_values(&self) -> Vec<f64> {
        self.lower.iter().map(|e| e.value).collect()
    }
}

/// All refined maxima of `z(t)` along the trajectory.
pub fn z_maxima(traj: &Trajectory) -> Result<Vec<Extremum>, AnalysisError> {
    local_maxima(&traj.zs(), traj.times())
}

pub fn lobe_peaks(traj: &Trajectory) -> Result<LobePeaks, AnalysisError> {
    let peaks = z_maxima(traj)?;
    let states = traj.states();
    let (upper, lower) = peaks.into_iter().partition(|e| states[e.index].y > 0.0);
    Ok(LobePeaks { upper, lower })
}

/// Period per spiral lobe. Both lobes must agree when both carry enough
/// peaks; an orbit confined to one lobe is judged on that lobe alone.
pub fn spiral_period(traj: &Trajectory, cluster_tol_rel: f64) -> Result<PeriodEstimate, AnalysisError> {
    let lobes = lobe_peaks(traj)?;
    let (up, lo) = (lobes.upper_values(), lobes.lower_values());
    match (up.len() >= MIN_PEAKS, lo.len() >= MIN_PEAKS) {
        (true, true) => {
            let a = detect_period(&up, cluster_tol_rel)?;
            let b = detect_period(&lo, cluster_tol_rel)?;
            Ok(match (a, b) {
                _ if a == b => a,
                (PeriodEstimate::Aperiodic { .. }, PeriodEstimate::Aperiodic { .. }) => a,
                (PeriodEstimate::Periodic(m), PeriodEstimate::Periodic(n)) => {
                    PeriodEstimate::Ambiguous { counts: [m.min(n), m.max(n), m.max(n)] }
                }
                (PeriodEstimate::Ambiguous { .. }, _) => a,
                _ => b,
            })
        }
        (true, false) => detect_period(&up, cluster_tol_rel),
        (false, true) => detect_period(&lo, cluster_tol_rel),
        (false, false) => Err(AnalysisError::TooFewSamples { needed: MIN_PEAKS, got: up.len().max(lo.len()) }),
    }
}

fn bounding_diagonal(points: &[State]) -> f64 {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in points {
        for (k, v) in p.to_array().into_iter().enumerate() {
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
    }
    (0..3).map(|k| (hi[k] - lo[k]).powi(2)).sum::<f64>().sqrt()
}

/// Uniform grid for fixed-radius neighbour queries.
struct Grid<'a> {
    points: &'a [State],
    cell: f64,
    buckets: HashMap<[i64; 3], Vec<usize>>,
}

impl<'a> Grid<'a> {
    fn new(points: &'a [State], cell: f64) -> Self {
        let mut buckets: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            buckets.entry(Self::key(p, cell)).or_default().push(i);
        }
        Self { points, cell, buckets }
    }

    fn key(p: &State, cell: f64) -> [i64; 3] {
        p.to_array().map(|v| (v / cell).floor() as i64)
    }

    fn any_within(&self, q: &State, radius: f64) -> bool {
        let k = Self::key(q, self.cell);
        let r2 = radius * radius;
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let Some(bucket) = self.buckets.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) else {
                        continue;
                    };
                    for &i in bucket {
                        let p = &self.points[i];
                        let d2 = (p.x - q.x).powi(2) + (p.y - q.y).powi(2) + (p.z - q.z).powi(2);
                        if d2 <= r2 {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

/// Measurements behind [`detect_double_spiral`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpiralGeometry {
    /// Fraction of mirrored samples with a sample within `sym_tol` diameters.
    pub mirror_fraction: f64,
    /// Fractions of samples with `x > d` and `x < -d`.
    pub occupancy: [f64; 2],
    /// Median `|x| / max|x|` over the tallest z-peaks.
    pub tall_peak_offset: f64,
}

/// Mirror-invariance and half-space occupancy of a point cloud:
/// `(mirror_fraction, [frac x > d, frac x < -d])`.
pub fn mirror_symmetry(points: &[State], sym_tol: f64) -> (f64, [f64; 2]) {
    if points.is_empty() {
        return (0.0, [0.0, 0.0]);
    }
    let diameter = bounding_diagonal(points);
    let radius = (sym_tol * diameter).max(f64::MIN_POSITIVE);
    let grid = Grid::new(points, radius);
    let hits = points.iter().filter(|p| grid.any_within(&p.mirror(), radius)).count();
    let margin = HALF_SPACE_MARGIN * diameter;
    let n = points.len() as f64;
    let pos = points.iter().filter(|p| p.x > margin).count() as f64 / n;
    let neg = points.iter().filter(|p| p.x < -margin).count() as f64 / n;
    (hits as f64 / n, [pos, neg])
}

/// True when the cloud maps onto itself under the flow symmetry and fills
/// both `x` half-spaces.
pub fn is_mirror_symmetric(points: &[State], sym_tol: f64) -> bool {
    let (fraction, [pos, neg]) = mirror_symmetry(points, sym_tol);
    fraction >= 1.0 - sym_tol && pos >= HALF_SPACE_OCCUPANCY && neg >= HALF_SPACE_OCCUPANCY
}

pub fn spiral_geometry(traj: &Trajectory, sym_tol: f64) -> Result<SpiralGeometry, AnalysisError> {
    if traj.len() < MIN_CLOUD_SAMPLES {
        return Err(AnalysisError::TooFewSamples { needed: MIN_CLOUD_SAMPLES, got: traj.len() });
    }
    if !(sym_tol > 0.0 && sym_tol < 1.0) {
        return Err(AnalysisError::Invalid(format!("sym_tol must lie in (0, 1) (got {sym_tol})")));
    }
    let (mirror_fraction, occupancy) = mirror_symmetry(traj.states(), sym_tol);
    let peaks = z_maxima(traj)?;
    let x_scale = traj.states().iter().fold(0.0f64, |m, s| m.max(s.x.abs())).max(f64::MIN_POSITIVE);
    let tall_peak_offset = if peaks.is_empty() {
        0.0
    } else {
        let mut levels: Vec<f64> = peaks.iter().map(|e| e.value).collect();
        levels.sort_by(f64::total_cmp);
        let cut = levels[((levels.len() - 1) as f64 * TALL_PEAK_QUANTILE).floor() as usize];
        let mut offsets: Vec<f64> =
            peaks.iter().filter(|e| e.value >= cut).map(|e| traj.states()[e.index].x.abs() / x_scale).collect();
        offsets.sort_by(f64::total_cmp);
        let m = offsets.len();
        if m % 2 == 1 {
            offsets[m / 2]
        } else {
            0.5 * (offsets[m / 2 - 1] + offsets[m / 2])
        }
    };
    Ok(SpiralGeometry { mirror_fraction, occupancy, tall_peak_offset })
}

impl SpiralGeometry {
    pub fn is_double_spiral(&self, sym_tol: f64) -> bool {
        self.mirror_fraction >= 1.0 - sym_tol
            && self.occupancy.iter().all(|&f| f >= HALF_SPACE_OCCUPANCY)
            && self.tall_peak_offset >= TWIN_PEAK_OFFSET
    }
}

/// A double spiral is a single attractor that contains both mirror-image
/// lobes and whose tallest excursions happen away from the symmetry axis,
/// out in one of the lobes. A single spiral chaotic attractor is
/// also mirror-invariant here but its tallest excursions leave from the axis.
pub fn detect_double_spiral(traj: &Trajectory, sym_tol: f64) -> Result<bool, AnalysisError> {
    Ok(spiral_geometry(traj, sym_tol)?.is_double_spiral(sym_tol))
}
