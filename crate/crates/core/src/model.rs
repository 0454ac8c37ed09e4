//! The MCG vector field: a capacitor, an inductor, a cubic resistor and an
//! NTC thermistor in series, with the thermistor resistance replaced by its
//! quadratic surrogate `R(z) = mu z^2 + gamma z + theta`.
//!
//! ```text
//! dx/dt = y / alpha
//! dy/dt = -(x + f(y) + R(z) y) / eta,     f(y) = a y + b y^3
//! dz/dt = R(z) y^2 - epsilon z
//! ```

use serde::{Deserialize, Serialize};

use crate::error::ParamError;
use crate::integrate::Flow;

/// 3x3 row-major matrix.
pub type Matrix3 = [[f64; 3]; 3];

/// A point of the phase space: capacitor voltage `x`, loop current `y` and
/// thermistor temperature offset `z = T - T0`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct State {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl State {
    pub const ORIGIN: State = State { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Image under the flow symmetry `(x, y, z) -> (-x, -y, z)`.
    pub fn mirror(&self) -> Self {
        Self::new(-self.x, -self.y, self.z)
    }

    pub fn max_abs(&self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<[f64; 3]> for State {
    fn from(a: [f64; 3]) -> Self {
        Self::from_array(a)
    }
}

/// Raw model coefficients, as read from a configuration file. Validation
/// happens when converting into [`ModelParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelCoefficients {
    pub alpha: f64,
    pub eta: f64,
    pub a: f64,
    pub b: f64,
    pub mu: f64,
    pub gamma: f64,
    pub theta: f64,
    pub epsilon: f64,
}

/// Validated coefficients of the MCG system.
///
/// Construction enforces `alpha, eta, mu, theta, epsilon > 0` and
/// `gamma^2 < 4 mu theta`, so the memristance is positive for every `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelCoefficients", into = "ModelCoefficients")]
pub struct ModelParams {
    c: ModelCoefficients,
}

impl ModelParams {
    /// Parameter names in configuration-file order.
    pub const KEYS: [&'static str; 8] = ["alpha", "eta", "a", "b", "mu", "gamma", "theta", "epsilon"];

    pub fn new(c: ModelCoefficients) -> Result<Self, ParamError> {
        let named = [
            ("alpha", c.alpha),
            ("eta", c.eta),
            ("a", c.a),
            ("b", c.b),
            ("mu", c.mu),
            ("gamma", c.gamma),
            ("theta", c.theta),
            ("epsilon", c.epsilon),
        ];
        for (name, v) in named {
            if !v.is_finite() {
                return Err(ParamError::NotFinite { name });
            }
        }
        for (name, v) in [("alpha", c.alpha), ("eta", c.eta), ("mu", c.mu), ("theta", c.theta), ("epsilon", c.epsilon)]
        {
            if v <= 0.0 {
                return Err(ParamError::NotPositive { name, value: v });
            }
        }
        if c.gamma * c.gamma >= 4.0 * c.mu * c.theta {
            return Err(ParamError::MemristanceNotPositive { gamma: c.gamma, mu: c.mu, theta: c.theta });
        }
        Ok(Self { c })
    }

    /// The parameter set used throughout the stability study:
    /// `a = -6, b = 3, eta = 12.2, mu = 3, gamma = -2, theta = 3, epsilon = 0.6`.
    pub fn study(alpha: f64) -> Result<Self, ParamError> {
        Self::new(ModelCoefficients {
            alpha,
            eta: 12.2,
            a: -6.0,
            b: 3.0,
            mu: 3.0,
            gamma: -2.0,
            theta: 3.0,
            epsilon: 0.6,
        })
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self, ParamError> {
        Self::new(ModelCoefficients { alpha, ..self.c })
    }

    pub fn coefficients(&self) -> ModelCoefficients {
        self.c
    }

    pub fn alpha(&self) -> f64 {
        self.c.alpha
    }
    pub fn eta(&self) -> f64 {
        self.c.eta
    }
    pub fn a(&self) -> f64 {
        self.c.a
    }
    pub fn b(&self) -> f64 {
        self.c.b
    }
    pub fn mu(&self) -> f64 {
        self.c.mu
    }
    pub fn gamma(&self) -> f64 {
        self.c.gamma
    }
    pub fn theta(&self) -> f64 {
        self.c.theta
    }
    pub fn epsilon(&self) -> f64 {
        self.c.epsilon
    }

    /// Smallest value of the memristance, attained at `z = -gamma / (2 mu)`.
    pub fn memristance_min(&self) -> f64 {
        self.c.theta - self.c.gamma * self.c.gamma / (4.0 * self.c.mu)
    }

    #[inline]
    pub(crate) fn rates(&self, s: &[f64; 3]) -> [f64; 3] {
        let [x, y, z] = *s;
        let r = memristance(z, self);
        [y / self.c.alpha, -(x + nonlinear_resistor(y, self) + r * y) / self.c.eta, r * y * y - self.c.epsilon * z]
    }

    #[inline]
    pub(crate) fn jacobian_raw(&self, s: &[f64; 3]) -> Matrix3 {
        let [_, y, z] = *s;
        let c = &self.c;
        let r = memristance(z, self);
        let dr = 2.0 * c.mu * z + c.gamma;
        [
            [0.0, 1.0 / c.alpha, 0.0],
            [-1.0 / c.eta, -(c.a + 3.0 * c.b * y * y + r) / c.eta, -dr * y / c.eta],
            [0.0, 2.0 * r * y, dr * y * y - c.epsilon],
        ]
    }
}

impl TryFrom<ModelCoefficients> for ModelParams {
    type Error = ParamError;
    fn try_from(c: ModelCoefficients) -> Result<Self, Self::Error> {
        Self::new(c)
    }
}

impl From<ModelParams> for ModelCoefficients {
    fn from(p: ModelParams) -> Self {
        p.c
    }
}

impl Flow<3> for ModelParams {
    #[inline]
    fn rate(&self, s: &[f64; 3]) -> [f64; 3] {
        self.rates(s)
    }
}

/// Memristance `R(z) = mu z^2 + gamma z + theta`; strictly positive for
/// validated parameters.
#[inline]
pub fn memristance(z: f64, p: &ModelParams) -> f64 {
    (p.c.mu * z + p.c.gamma) * z + p.c.theta
}

/// Cubic resistor characteristic `f(y) = a y + b y^3`.
#[inline]
pub fn nonlinear_resistor(y: f64, p: &ModelParams) -> f64 {
    p.c.a * y + p.c.b * y * y * y
}

/// Right-hand side of the MCG system at `s`.
pub fn vector_field(s: &State, p: &ModelParams) -> Result<State, ParamError> {
    if !s.is_finite() {
        return Err(ParamError::NonFiniteState(*s));
    }
    Ok(State::from_array(p.rates(&s.to_array())))
}

/// Analytic Jacobian of [`vector_field`]. Row `i` holds the partial
/// derivatives of the `i`-th rate with respect to `(x, y, z)`.
pub fn jacobian(s: &State, p: &ModelParams) -> Matrix3 {
    p.jacobian_raw(&s.to_array())
}

pub fn trace(m: &Matrix3) -> f64 {
    m[0][0] + m[1][1] + m[2][2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn study() -> ModelParams {
        ModelParams::study(0.5).unwrap()
    }

    #[test]
    fn memristance_values() {
        let p = study();
        assert_eq!(memristance(0.0, &p), 3.0);
        assert_eq!(memristance(1.0, &p), 4.0);
        assert_relative_eq!(p.memristance_min(), 8.0 / 3.0, epsilon = 1e-15);
        // grid scan agrees with the vertex formula
        let scan = (0..=200_000).map(|i| memristance(-10.0 + i as f64 * 1e-4, &p)).fold(f64::INFINITY, f64::min);
        assert!(scan >= p.memristance_min() - 1e-12);
        assert!(scan - p.memristance_min() < 1e-7);
    }

    #[test]
    fn resistor_values() {
        let p = study();
        assert_eq!(nonlinear_resistor(0.0, &p), 0.0);
        assert_eq!(nonlinear_resistor(1.0, &p), -3.0);
        for i in -50..=50 {
            let y = i as f64 * 0.137;
            assert_eq!(nonlinear_resistor(-y, &p), -nonlinear_resistor(y, &p));
        }
    }

    #[test]
    fn field_at_origin_and_unit_current() {
        let p = study();
        assert_eq!(vector_field(&State::ORIGIN, &p).unwrap(), State::ORIGIN);
        let d = vector_field(&State::new(0.0, 1.0, 0.0), &p).unwrap();
        assert_eq!(d.x, 2.0);
        assert_eq!(d.y, 0.0);
        assert_eq!(d.z, 3.0);
    }

    #[test]
    fn field_rejects_non_finite() {
        let p = study();
        assert!(matches!(vector_field(&State::new(f64::NAN, 0.0, 0.0), &p), Err(ParamError::NonFiniteState(_))));
        assert!(vector_field(&State::new(0.0, f64::INFINITY, 0.0), &p).is_err());
    }

    #[test]
    fn jacobian_at_origin() {
        let p = ModelParams::study(1.0).unwrap();
        let j = jacobian(&State::ORIGIN, &p);
        assert_eq!(j[2], [0.0, 0.0, -0.6]);
        assert_eq!(j[0], [0.0, 1.0, 0.0]);
        assert_eq!(j[1], [-1.0 / 12.2, 3.0 / 12.2, 0.0]);
    }

    #[test]
    fn jacobian_entry_32() {
        let p = study();
        let j = jacobian(&State::new(0.0, 1.0, 1.0), &p);
        assert_eq!(j[2][1], 8.0);
    }

    #[test]
    fn validation_rejects_bad_params() {
        let base = study().coefficients();
        let bad = |f: fn(&mut ModelCoefficients)| {
            let mut c = base;
            f(&mut c);
            ModelParams::new(c)
        };
        assert!(matches!(bad(|c| c.mu = 0.0), Err(ParamError::NotPositive { name: "mu", .. })));
        assert!(matches!(bad(|c| c.theta = -1.0), Err(ParamError::NotPositive { name: "theta", .. })));
        assert!(matches!(bad(|c| c.alpha = 0.0), Err(ParamError::NotPositive { name: "alpha", .. })));
        assert!(matches!(bad(|c| c.gamma = -6.0), Err(ParamError::MemristanceNotPositive { .. })));
        assert!(matches!(bad(|c| c.a = f64::NAN), Err(ParamError::NotFinite { name: "a" })));
        // linear resistor is allowed
        assert!(bad(|c| c.b = 0.0).is_ok());
    }

    fn central_jacobian(s: [f64; 3], p: &ModelParams, h: f64) -> Matrix3 {
        let mut out = [[0.0; 3]; 3];
        for j in 0..3 {
            let (mut up, mut dn) = (s, s);
            up[j] += h;
            dn[j] -= h;
            let (fu, fd) = (p.rates(&up), p.rates(&dn));
            for i in 0..3 {
                out[i][j] = (fu[i] - fd[i]) / (2.0 * h);
            }
        }
        out
    }

    proptest! {
        #[test]
        fn field_is_mirror_equivariant(
            x in -5.0..5.0f64, y in -2.0..2.0f64, z in -3.0..5.0f64, alpha in 0.01..12.0f64
        ) {
            let p = ModelParams::study(alpha).unwrap();
            let s = State::new(x, y, z);
            let f = vector_field(&s, &p).unwrap();
            let g = vector_field(&s.mirror(), &p).unwrap();
            prop_assert_eq!(g, State::new(-f.x, -f.y, f.z));
        }

        #[test]
        fn memristance_positive(
            mu in 0.01..10.0f64, theta in 0.01..10.0f64, frac in -0.999..0.999f64, z in -100.0..100.0f64
        ) {
            let gamma = frac * 2.0 * (mu * theta).sqrt();
            let p = ModelParams::new(ModelCoefficients { mu, theta, gamma, ..study().coefficients() }).unwrap();
            prop_assert!(memristance(z, &p) > 0.0);
            prop_assert!(p.memristance_min() > 0.0);
        }

        #[test]
        fn jacobian_matches_central_differences(
            x in -3.0..3.0f64, y in -1.0..1.0f64, z in -1.0..4.0f64, alpha in 0.05..12.0f64
        ) {
            let p = ModelParams::study(alpha).unwrap();
            let s = [x, y, z];
            let j = p.jacobian_raw(&s);
            let fd = central_jacobian(s, &p, 1e-6);
            for i in 0..3 {
                for k in 0..3 {
                    let scale = j[i][k].abs().max(1.0);
                    prop_assert!((j[i][k] - fd[i][k]).abs() / scale < 1e-6,
                        "entry ({},{}) {} vs {}", i, k, j[i][k], fd[i][k]);
                }
            }
        }
    }
}
