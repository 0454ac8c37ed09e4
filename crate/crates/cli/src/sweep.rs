//! Parameter sweeps over `alpha`.

use anyhow::{bail, Context, Result};
use mcg_core::analyze::{classify_trajectory, kaplan_yorke, lyapunov_spectrum, z_maxima};
use mcg_core::{
    integrate, AnalysisError, AnalysisSettings, AttractorClass, IntegrationError, IntegrationSettings,
    LyapunovSpectrum, ModelParams, PeriodEstimate, State,
};
use rayon::prelude::*;

/// Inclusive grid `min, min + step, ...` up to `max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaRange {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl AlphaRange {
    pub fn validate(&self) -> Result<()> {
        if !(self.min > 0.0 && self.min.is_finite()) {
            bail!("alpha_min must be > 0 (got {})", self.min);
        }
        if !(self.max > self.min && self.max.is_finite()) {
            bail!("alpha_max must exceed alpha_min (got [{}, {}])", self.min, self.max);
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            bail!("alpha_step must be > 0 (got {})", self.step);
        }
        Ok(())
    }

    /// Grid values computed as `min + i * step` so that every row's alpha is
    /// reproducible from its index alone.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.max - self.min) / self.step * (1.0 + 1e-12)).floor() as usize + 1;
        (0..n).map(|i| self.min + i as f64 * self.step).collect()
    }
}

/// Which analyses a sweep runs. Classification needs the spectrum, so it
/// implies `lce`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Analyses {
    pub maxima: bool,
    pub lce: bool,
    pub classify: bool,
}

impl Default for Analyses {
    fn default() -> Self {
        Self { maxima: true, lce: true, classify: true }
    }
}

impl Analyses {
    /// Comma-separated subset of `maxima`, `lce`, `classify`.
    pub fn parse(list: &str) -> Result<Self, String> {
        let mut a = Analyses { maxima: false, lce: false, classify: false };
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "maxima" => a.maxima = true,
                "lce" => a.lce = true,
                "classify" => a.classify = true,
                other => return Err(format!("unknown analysis `{other}` (expected maxima, lce, classify)")),
            }
        }
        if !(a.maxima || a.lce || a.classify) {
            return Err("no analyses selected".into());
        }
        Ok(a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub range: AlphaRange,
    /// Every parameter except `alpha`.
    pub base: ModelParams,
    pub integration: IntegrationSettings,
    pub initial: State,
    pub analysis: AnalysisSettings,
    pub analyses: Analyses,
    pub workers: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.range.validate()?;
        if self.workers == 0 {
            bail!("workers must be >= 1");
        }
        self.integration.validate()?;
        self.analysis.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub z_maxima: Vec<f64>,
    pub spectrum: Option<LyapunovSpectrum>,
    pub class: Option<AttractorClass>,
    pub period: Option<PeriodEstimate>,
    pub ky_dim: Option<f64>,
    pub diverged: bool,
}

impl SweepRow {
    fn diverged(alpha: f64) -> Self {
        Self { alpha, z_maxima: Vec::new(), spectrum: None, class: None, period: None, ky_dim: None, diverged: true }
    }
}

fn is_divergence(e: &AnalysisError) -> bool {
    matches!(
        e,
        AnalysisError::Integration(IntegrationError::Divergence { .. } | IntegrationError::StepUnderflow { .. })
    )
}

/// One sweep point. Divergence becomes a flagged row; anything else is an error.
pub fn sweep_point(spec: &SweepSpec, alpha: f64) -> Result<SweepRow> {
    match try_point(spec, alpha) {
        Ok(row) => Ok(row),
        Err(e) if is_divergence(&e) => Ok(SweepRow::diverged(alpha)),
        Err(e) => Err(e).with_context(|| format!("alpha={alpha}")),
    }
}

fn try_point(spec: &SweepSpec, alpha: f64) -> Result<SweepRow, AnalysisError> {
    let p = spec.base.with_alpha(alpha).map_err(|e| AnalysisError::Invalid(e.to_string()))?;
    let a = spec.analyses;
    let needs_traj = a.maxima || a.classify;
    let traj = if needs_traj { Some(integrate(&p, spec.initial, &spec.integration)?) } else { None };
    let z_maxima = match &traj {
        Some(t) if a.maxima && t.len() >= 3 => z_maxima(t)?.into_iter().map(|e| e.value).collect(),
        _ => Vec::new(),
    };
    let spectrum =
        if a.lce || a.classify { Some(lyapunov_spectrum(&p, spec.initial, &spec.analysis.lyapunov)?) } else { None };
    let (mut class, mut period) = (None, None);
    if a.classify {
        let (t, ls) = (traj.as_ref().unwrap(), spectrum.as_ref().unwrap());
        let (pe, c, _) = classify_trajectory(t, ls, &spec.analysis)?;
        class = Some(c);
        period = pe;
    }
    let ky_dim = spectrum.map(|ls| kaplan_yorke(&ls.snapped(spec.analysis.zero_tol)));
    Ok(SweepRow { alpha, z_maxima, spectrum, class, period, ky_dim, diverged: false })
}

/// Runs every alpha of the spec on a pool of `spec.workers` threads. Each
/// alpha starts from `spec.initial`, so rows do not depend on scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let alphas = spec.range.values();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(spec.workers).build().context("cannot start worker pool")?;
    pool.install(|| alphas.par_iter().map(|&alpha| sweep_point(spec, alpha)).collect())
}
