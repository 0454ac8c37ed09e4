use thiserror::Error;

use crate::model::State;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("parameter `{name}` is not finite")]
    NotFinite { name: &'static str },
    #[error("parameter `{name}` must be > 0 (got {value})")]
    NotPositive { name: &'static str, value: f64 },
    #[error(
        "memristance not positive-definite: gamma^2 < 4*mu*theta violated \
         (gamma={gamma}, mu={mu}, theta={theta})"
    )]
    MemristanceNotPositive { gamma: f64, mu: f64, theta: f64 },
    #[error(
        "Taylor surrogate not positive-definite: gamma^2 < 4*mu*theta violated \
         (gamma={gamma}, mu={mu}, theta={theta})"
    )]
    TaylorNotPositive { gamma: f64, mu: f64, theta: f64 },
    #[error("temperature must be > 0 K (got {0})")]
    NonPositiveTemperature(f64),
    #[error("state is not finite: {0:?}")]
    NonFiniteState(State),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrationError {
    #[error("invalid integration settings: {0}")]
    InvalidSettings(String),
    #[error("trajectory diverged at t={time} (last finite state {last:?})")]
    Divergence { time: f64, last: Vec<f64> },
    #[error("adaptive step size underflow at t={time} (h={step})")]
    StepUnderflow { time: f64, step: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("length mismatch: {0} values vs {1} times")]
    LengthMismatch(usize, usize),
    #[error("observed data has zero variance; R^2 undefined")]
    ZeroVariance,
    #[error("invalid analysis input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
}
