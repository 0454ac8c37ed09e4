//! Stability, Lyapunov, dimension and attractor-class analysis.

mod classify;
mod dimension;
mod eigen;
mod geometry;
mod lyapunov;
mod period;

pub use classify::{classify_attractor, AttractorClass, AttractorKind, Sign, SignPattern};
pub use dimension::kaplan_yorke;
pub use eigen::{classify_fixed_point, origin_eigenvalues, EigenReport, FixedPointKind};
pub use geometry::{
    detect_double_spiral, is_mirror_symmetric, lobe_peaks, mirror_symmetry, spiral_geometry, spiral_period, z_maxima,
    LobePeaks, SpiralGeometry, HALF_SPACE_MARGIN, HALF_SPACE_OCCUPANCY, MIN_CLOUD_SAMPLES, TALL_PEAK_QUANTILE,
    TWIN_PEAK_OFFSET,
};
pub use lyapunov::{lyapunov_spectrum, LyapunovSettings, LyapunovSpectrum};
pub use period::{detect_period, PeriodEstimate, MIN_PEAKS};

use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;
use crate::integrate::{integrate, IntegrationSettings, Trajectory};
use crate::model::{ModelParams, State};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSettings {
    pub lyapunov: LyapunovSettings,
    /// Exponents with magnitude below this count as zero.
    pub zero_tol: f64,
    pub cluster_tol_rel: f64,
    pub sym_tol: f64,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        Self { lyapunov: LyapunovSettings::default(), zero_tol: 0.02, cluster_tol_rel: 0.02, sym_tol: 0.05 }
    }
}

impl AnalysisSettings {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        self.lyapunov.validate()?;
        if !(self.zero_tol > 0.0 && self.zero_tol.is_finite()) {
            return Err(AnalysisError::Invalid(format!("zero_tol must be > 0 (got {})", self.zero_tol)));
        }
        if !(self.cluster_tol_rel > 0.0 && self.cluster_tol_rel.is_finite()) {
            return Err(AnalysisError::Invalid(format!("cluster_tol_rel must be > 0 (got {})", self.cluster_tol_rel)));
        }
        if !(self.sym_tol > 0.0 && self.sym_tol < 1.0) {
            return Err(AnalysisError::Invalid(format!("sym_tol must lie in (0, 1) (got {})", self.sym_tol)));
        }
        Ok(())
    }
}

/// Everything measured at one parameter point.
#[derive(Debug, Clone)]
pub struct PointAnalysis {
    pub eigen: EigenReport,
    pub trajectory: Trajectory,
    /// Values of the post-transient maxima of `z`.
    pub z_maxima: Vec<f64>,
    pub spectrum: LyapunovSpectrum,
    /// `None` when there are too few peaks to judge.
    pub period: Option<PeriodEstimate>,
    pub class: AttractorClass,
    /// Kaplan-Yorke dimension of the spectrum with near-zero exponents snapped to zero.
    pub ky_dim: f64,
    /// `None` when the trajectory is too short for the geometric test.
    pub geometry: Option<SpiralGeometry>,
}

/// Period of a trajectory's peaks, or `None` with too few of them.
pub fn trajectory_period(traj: &Trajectory, cluster_tol_rel: f64) -> Result<Option<PeriodEstimate>, AnalysisError> {
    match spiral_period(traj, cluster_tol_rel) {
        Ok(p) => Ok(Some(p)),
        Err(AnalysisError::TooFewSamples { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Lyapunov spectrum, class and dimension for a spectrum plus its trajectory.
pub fn classify_trajectory(
    traj: &Trajectory,
    spectrum: &LyapunovSpectrum,
    settings: &AnalysisSettings,
) -> Result<(Option<PeriodEstimate>, AttractorClass, Option<SpiralGeometry>), AnalysisError> {
    let period = trajectory_period(traj, settings.cluster_tol_rel)?;
    let mut class = classify_attractor(spectrum, settings.zero_tol, period.and_then(|p| p.period()));
    let geometry = if traj.len() >= MIN_CLOUD_SAMPLES { Some(spiral_geometry(traj, settings.sym_tol)?) } else { None };
    if let Some(g) = &geometry {
        class = class.with_double_spiral(g.is_double_spiral(settings.sym_tol));
    }
    Ok((period, class, geometry))
}

/// Integrates, measures and classifies the flow at `p` from `s0`.
pub fn analyze_point(
    p: &ModelParams,
    s0: State,
    integration: &IntegrationSettings,
    settings: &AnalysisSettings,
) -> Result<PointAnalysis, AnalysisError> {
    settings.validate()?;
    let trajectory = integrate(p, s0, integration)?;
    let z_maxima = if trajectory.len() >= 3 {
        geometry::z_maxima(&trajectory)?.into_iter().map(|e| e.value).collect()
    } else {
        Vec::new()
    };
    let spectrum = lyapunov_spectrum(p, s0, &settings.lyapunov)?;
    let (period, class, geometry) = classify_trajectory(&trajectory, &spectrum, settings)?;
    let ky_dim = kaplan_yorke(&spectrum.snapped(settings.zero_tol));
    Ok(PointAnalysis { eigen: origin_eigenvalues(p), trajectory, z_maxima, spectrum, period, class, ky_dim, geometry })
}
