use serde::{Deserialize, Serialize};

use super::IntegrationSettings;
use crate::model::State;

/// Sampled solution of a flow. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<State>,
    settings: IntegrationSettings,
}

impl Trajectory {
    pub(crate) fn new(times: Vec<f64>, states: Vec<State>, settings: IntegrationSettings) -> Self {
        debug_assert_eq!(times.len(), states.len());
        Self { times, states, settings }
    }

    /// Builds a trajectory from externally produced samples, e.g. a parsed
    /// CSV file. Times must be strictly increasing.
    pub fn from_samples(times: Vec<f64>, states: Vec<State>, settings: IntegrationSettings) -> Option<Self> {
        let ordered = times.windows(2).all(|w| w[1] > w[0]);
        (times.len() == states.len() && ordered && states.iter().all(State::is_finite))
            .then(|| Self::new(times, states, settings))
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn settings(&self) -> &IntegrationSettings {
        &self.settings
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn xs(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.x).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.y).collect()
    }

    pub fn zs(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.z).collect()
    }

    /// Largest absolute value of any component over all samples.
    pub fn max_abs(&self) -> f64 {
        self.states.iter().map(State::max_abs).fold(0.0, f64::max)
    }

    /// The sample-by-sample mirror image under `(x, y, z) -> (-x, -y, z)`.
    pub fn mirrored(&self) -> Trajectory {
        Self::new(self.times.clone(), self.states.iter().map(State::mirror).collect(), self.settings)
    }
}
