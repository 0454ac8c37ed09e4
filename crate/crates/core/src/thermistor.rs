//! NTC thermistor characteristics and the mapping from circuit quantities to
//! the abstract model coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{AnalysisError, ParamError};
use crate::model::{ModelCoefficients, ModelParams};

/// Circuit and thermistor quantities in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Capacitance in farads.
    #[serde(rename = "C")]
    pub capacitance: f64,
    /// Inductance in henries.
    #[serde(rename = "L")]
    pub inductance: f64,
    /// Cold resistance `R0` at room temperature, ohms.
    #[serde(rename = "R0")]
    pub r0: f64,
    /// Material constant, kelvin.
    pub beta: f64,
    /// Room temperature, kelvin.
    #[serde(rename = "T0")]
    pub t0: f64,
    /// Heat capacitance, J/K.
    #[serde(rename = "c")]
    pub heat_capacitance: f64,
    /// Dissipation constant, W/K.
    #[serde(rename = "delta")]
    pub dissipation: f64,
    /// Linear coefficient of the cubic resistor, ohms.
    pub a: f64,
    /// Cubic coefficient of the cubic resistor, ohms per ampere squared.
    pub b: f64,
}

impl PhysicalParams {
    pub const KEYS: [&'static str; 9] = ["C", "L", "R0", "beta", "T0", "c", "delta", "a", "b"];

    /// Default room temperature when none is configured.
    pub const DEFAULT_T0: f64 = 298.15;

    pub fn validate(&self) -> Result<(), ParamError> {
        for (name, v) in [("a", self.a), ("b", self.b)] {
            if !v.is_finite() {
                return Err(ParamError::NotFinite { name });
            }
        }
        for (name, v) in [
            ("C", self.capacitance),
            ("L", self.inductance),
            ("R0", self.r0),
            ("beta", self.beta),
            ("T0", self.t0),
            ("c", self.heat_capacitance),
            ("delta", self.dissipation),
        ] {
            if !v.is_finite() {
                return Err(ParamError::NotFinite { name });
            }
            if v <= 0.0 {
                return Err(ParamError::NotPositive { name, value: v });
            }
        }
        Ok(())
    }
}

/// Abstract coefficients from circuit quantities:
///
/// ```text
/// alpha = C, eta = L, theta = R0/c, gamma = -(R0/c) beta/T0^2,
/// mu = (R0/c) beta (beta + 2 T0) / (2 T0^4), epsilon = delta/c
/// ```
pub fn physical_to_model(ph: &PhysicalParams) -> Result<ModelParams, ParamError> {
    ph.validate()?;
    let k = ph.r0 / ph.heat_capacitance;
    let t0 = ph.t0;
    let c = ModelCoefficients {
        alpha: ph.capacitance,
        eta: ph.inductance,
        a: ph.a,
        b: ph.b,
        mu: k * ph.beta * (ph.beta + 2.0 * t0) / (2.0 * t0.powi(4)),
        gamma: -k * ph.beta / (t0 * t0),
        theta: k,
        epsilon: ph.dissipation / ph.heat_capacitance,
    };
    ModelParams::new(c).map_err(|e| match e {
        ParamError::MemristanceNotPositive { gamma, mu, theta } => ParamError::TaylorNotPositive { gamma, mu, theta },
        other => other,
    })
}

/// Beta-model resistance `R0 exp[beta (1/T - 1/T0)]`.
pub fn thermistor_resistance(t: f64, ph: &PhysicalParams) -> Result<f64, ParamError> {
    if t.is_nan() || t <= 0.0 {
        return Err(ParamError::NonPositiveTemperature(t));
    }
    Ok(ph.r0 * (ph.beta * (1.0 / t - 1.0 / ph.t0)).exp())
}

/// Second-order Taylor expansion of [`thermistor_resistance`] about `T0`.
pub fn taylor_resistance(t: f64, ph: &PhysicalParams) -> f64 {
    let (beta, t0) = (ph.beta, ph.t0);
    let d = t - t0;
    ph.r0 * (1.0 - beta / (t0 * t0) * d + beta * (beta + 2.0 * t0) / (2.0 * t0.powi(4)) * d * d)
}

/// `1 - SS_res / SS_tot`, with `SS_tot` taken about the mean of `observed`.
pub fn coefficient_of_determination(observed: &[f64], predicted: &[f64]) -> Result<f64, AnalysisError> {
    if observed.len() != predicted.len() {
        return Err(AnalysisError::LengthMismatch(observed.len(), predicted.len()));
    }
    if observed.is_empty() {
        return Err(AnalysisError::TooFewSamples { needed: 1, got: 0 });
    }
    let mean = observed.iter().sum::<f64>() / observed.len() as f64;
    let ss_tot: f64 = observed.iter().map(|o| (o - mean) * (o - mean)).sum();
    if ss_tot == 0.0 {
        return Err(AnalysisError::ZeroVariance);
    }
    let ss_res: f64 = observed.iter().zip(predicted).map(|(o, p)| (o - p) * (o - p)).sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Result of comparing the beta model with its Taylor surrogate on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermistorFit {
    pub temperatures: Vec<f64>,
    pub exponential: Vec<f64>,
    pub taylor: Vec<f64>,
    pub r_squared: f64,
}

/// Evaluates both characteristics on `points` evenly spaced temperatures in
/// `[t_min, t_max]` and scores the surrogate with R^2.
pub fn fit_thermistor(
    ph: &PhysicalParams,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> Result<ThermistorFit, AnalysisError> {
    if points < 2 || !(t_max > t_min && t_min.is_finite() && t_max.is_finite()) {
        return Err(AnalysisError::Invalid(format!(
            "temperature grid needs t_max > t_min and >= 2 points (got [{t_min}, {t_max}], {points})"
        )));
    }
    let step = (t_max - t_min) / (points - 1) as f64;
    let temperatures: Vec<f64> = (0..points).map(|i| t_min + i as f64 * step).collect();
    let exponential = temperatures
        .iter()
        .map(|&t| thermistor_resistance(t, ph))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| AnalysisError::Invalid(e.to_string()))?;
    let taylor: Vec<f64> = temperatures.iter().map(|&t| taylor_resistance(t, ph)).collect();
    let r_squared = coefficient_of_determination(&exponential, &taylor)?;
    Ok(ThermistorFit { temperatures, exponential, taylor, r_squared })
}
