//! Integration of autonomous flows with trajectory capture.

mod maxima;
mod rk;
mod trajectory;

pub use maxima::{local_maxima, Extremum};
pub use rk::{dopri5_step, rk4_step};
pub use trajectory::Trajectory;

use serde::{Deserialize, Serialize};

use crate::error::IntegrationError;
use crate::model::State;

/// Any component above this magnitude counts as blow-up.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

/// An autonomous vector field on `R^N`.
pub trait Flow<const N: usize> {
    fn rate(&self, s: &[f64; N]) -> [f64; N];
}

impl<const N: usize, F> Flow<N> for F
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    #[inline]
    fn rate(&self, s: &[f64; N]) -> [f64; N] {
        self(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    /// Classical RK4 with step `h`.
    Rk4,
    /// Dormand-Prince 5(4) with step control; `h` is the initial step.
    Dopri45 { abs_tol: f64, rel_tol: f64 },
}

impl Method {
    pub const DEFAULT_ADAPTIVE: Method = Method::Dopri45 { abs_tol: 1e-9, rel_tol: 1e-9 };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationSettings {
    pub h: f64,
    pub t_end: f64,
    /// Samples before this time are discarded.
    pub t_skip: f64,
    /// Keep one sample every `stride` steps.
    pub stride: usize,
    pub method: Method,
}

impl Default for IntegrationSettings {
    fn default() -> Self {
        Self { h: 0.005, t_end: 2000.0, t_skip: 500.0, stride: 4, method: Method::Rk4 }
    }
}

impl IntegrationSettings {
    pub fn validate(&self) -> Result<(), IntegrationError> {
        let bad = |m: String| Err(IntegrationError::InvalidSettings(m));
        if !(self.h > 0.0 && self.h.is_finite()) {
            return bad(format!("step h must be > 0 (got {})", self.h));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be > 0 (got {})", self.t_end));
        }
        if !(self.t_skip >= 0.0 && self.t_skip < self.t_end) {
            return bad(format!("t_skip must lie in [0, t_end) (got {})", self.t_skip));
        }
        if self.stride == 0 {
            return bad("stride must be >= 1".into());
        }
        if let Method::Dopri45 { abs_tol, rel_tol } = self.method {
            if !(abs_tol > 0.0 && rel_tol > 0.0) {
                return bad(format!("tolerances must be > 0 (got abs={abs_tol}, rel={rel_tol})"));
            }
        }
        Ok(())
    }
}

/// Default initial condition; the origin is the fixed point.
pub const DEFAULT_INITIAL: State = State::new(0.1, 0.1, 0.1);

#[inline]
pub(crate) fn check_finite<const N: usize>(
    next: &[f64; N],
    prev: &[f64; N],
    time: f64,
) -> Result<(), IntegrationError> {
    if next.iter().all(|v| v.is_finite() && v.abs() <= DIVERGENCE_LIMIT) {
        Ok(())
    } else {
        Err(IntegrationError::Divergence { time, last: prev.to_vec() })
    }
}

/// RK4 step with the divergence check applied; `t` is the time of `s`.
pub fn try_rk4_step<const N: usize, F: Flow<N> + ?Sized>(
    field: &F,
    s: &[f64; N],
    h: f64,
    t: f64,
) -> Result<[f64; N], IntegrationError> {
    let next = rk4_step(field, s, h);
    check_finite(&next, s, t + h)?;
    Ok(next)
}

/// Step index of the first kept sample for a fixed-step run.
fn first_kept_step(t_skip: f64, h: f64) -> usize {
    // tolerate rounding so that t_skip = k h keeps step k
    (t_skip / h - 1e-9).ceil().max(0.0) as usize
}

/// Integrates `field` from `s0` over `[0, t_end]`, keeping every
/// `stride`-th step at or after `t_skip`.
pub fn integrate<F: Flow<3> + ?Sized>(
    field: &F,
    s0: State,
    cfg: &IntegrationSettings,
) -> Result<Trajectory, IntegrationError> {
    cfg.validate()?;
    if !s0.is_finite() {
        return Err(IntegrationError::Divergence { time: 0.0, last: s0.to_array().to_vec() });
    }
    match cfg.method {
        Method::Rk4 => integrate_fixed(field, s0, cfg),
        Method::Dopri45 { abs_tol, rel_tol } => integrate_adaptive(field, s0, cfg, abs_tol, rel_tol),
    }
}

fn integrate_fixed<F: Flow<3> + ?Sized>(
    field: &F,
    s0: State,
    cfg: &IntegrationSettings,
) -> Result<Trajectory, IntegrationError> {
    let h = cfg.h;
    let steps = (cfg.t_end / h).round() as usize;
    let first = first_kept_step(cfg.t_skip, h);
    let capacity = steps.saturating_sub(first) / cfg.stride + 1;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    let mut s = s0.to_array();
    if first == 0 {
        times.push(0.0);
        states.push(s0);
    }
    for k in 1..=steps {
        s = try_rk4_step(field, &s, h, (k - 1) as f64 * h)?;
        if k >= first && k.is_multiple_of(cfg.stride) {
            times.push(k as f64 * h);
            states.push(State::from_array(s));
        }
    }
    Ok(Trajectory::new(times, states, *cfg))
}

fn integrate_adaptive<F: Flow<3> + ?Sized>(
    field: &F,
    s0: State,
    cfg: &IntegrationSettings,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Trajectory, IntegrationError> {
    let mut times = Vec::new();
    let mut states = Vec::new();
    if cfg.t_skip == 0.0 {
        times.push(0.0);
        states.push(s0);
    }
    let mut s = s0.to_array();
    let mut t = 0.0;
    let mut h = cfg.h.min(cfg.t_end);
    let mut accepted = 0usize;
    let h_min = 1e-14 * cfg.t_end.max(1.0);
    while t < cfg.t_end {
        let last = t + h >= cfg.t_end;
        let step = if last { cfg.t_end - t } else { h };
        let (next, err) = dopri5_step(field, &s, step);
        let norm = rk::error_norm(&err, &s, &next, abs_tol, rel_tol);
        if !norm.is_finite() {
            check_finite(&next, &s, t + step)?;
        }
        if norm <= 1.0 {
            check_finite(&next, &s, t + step)?;
            t = if last { cfg.t_end } else { t + step };
            s = next;
            accepted += 1;
            if t >= cfg.t_skip && accepted.is_multiple_of(cfg.stride) {
                times.push(t);
                states.push(State::from_array(s));
            }
        }
        let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
        h = if norm.is_finite() { step * factor } else { step * 0.2 };
        if h < h_min {
            return Err(IntegrationError::StepUnderflow { time: t, step: h });
        }
    }
    Ok(Trajectory::new(times, states, *cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;

    fn settings(t_end: f64, t_skip: f64, stride: usize) -> IntegrationSettings {
        IntegrationSettings { h: 0.01, t_end, t_skip, stride, method: Method::Rk4 }
    }

    #[test]
    fn settings_validation() {
        assert!(IntegrationSettings::default().validate().is_ok());
        assert!(settings(1.0, 1.0, 1).validate().is_err());
        assert!(settings(1.0, -0.1, 1).validate().is_err());
        assert!(settings(1.0, 0.0, 0).validate().is_err());
        let mut s = settings(1.0, 0.0, 1);
        s.h = 0.0;
        assert!(s.validate().is_err());
        s.h = 0.01;
        s.method = Method::Dopri45 { abs_tol: 0.0, rel_tol: 1e-6 };
        assert!(s.validate().is_err());
    }

    #[test]
    fn fixed_step_sampling_grid() {
        let f = |_: &[f64; 3]| [1.0, 0.0, 0.0];
        let tr = integrate(&f, State::ORIGIN, &settings(1.0, 0.0, 10)).unwrap();
        assert_eq!(tr.len(), 11);
        assert_eq!(tr.times()[0], 0.0);
        assert!((tr.times()[10] - 1.0).abs() < 1e-12);
        assert!((tr.states()[10].x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tail_window() {
        let f = |_: &[f64; 3]| [1.0, 0.0, 0.0];
        let cfg = settings(1.0, 1.0 - 0.01, 1);
        let tr = integrate(&f, State::ORIGIN, &cfg).unwrap();
        assert_eq!(tr.len(), 2);
        let cfg = settings(1.0, 1.0 - 0.01, 4);
        let tr = integrate(&f, State::ORIGIN, &cfg).unwrap();
        assert!(tr.len() <= 1);
    }

    #[test]
    fn blow_up_reports_divergence() {
        let f = |s: &[f64; 3]| [s[0] * s[0], 0.0, 0.0];
        let err = integrate(&f, State::new(1.0, 0.0, 0.0), &settings(5.0, 0.0, 1)).unwrap_err();
        match err {
            IntegrationError::Divergence { time, last } => {
                assert!(time > 0.9 && time < 1.1, "time {time}");
                assert!(last.iter().all(|v| v.is_finite()));
            }
            other => panic!("unexpected {other:?}"),
        }
        let cfg = IntegrationSettings { method: Method::DEFAULT_ADAPTIVE, ..settings(5.0, 0.0, 1) };
        assert!(integrate(&f, State::new(1.0, 0.0, 0.0), &cfg).is_err());
    }

    #[test]
    fn adaptive_matches_exact_decay() {
        let f = |s: &[f64; 3]| [-0.6 * s[0], s[2], -s[1]];
        let cfg = IntegrationSettings { method: Method::DEFAULT_ADAPTIVE, ..settings(10.0, 0.0, 1) };
        let tr = integrate(&f, State::new(1.0, 0.0, 1.0), &cfg).unwrap();
        let last = tr.states().last().unwrap();
        assert_eq!(*tr.times().last().unwrap(), 10.0);
        assert!((last.x - (-6.0f64).exp()).abs() < 1e-8);
        assert!((last.y - 10f64.sin()).abs() < 1e-7);
        assert!(tr.times().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn fixed_step_is_deterministic() {
        let p = ModelParams::study(0.5).unwrap();
        let cfg = IntegrationSettings { t_end: 50.0, t_skip: 0.0, ..Default::default() };
        let a = integrate(&p, DEFAULT_INITIAL, &cfg).unwrap();
        let b = integrate(&p, DEFAULT_INITIAL, &cfg).unwrap();
        assert_eq!(a, b);
    }
}
