//! Linear stability of the origin.
//!
//! At the origin the characteristic polynomial factors as
//! `(lambda + epsilon) (alpha eta lambda^2 + alpha (a + theta) lambda + 1)`,
//! so one eigenvalue is `-epsilon` and the other two solve the quadratic.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedPointKind {
    SaddleFocus,
    SaddleNode,
}

impl fmt::Display for FixedPointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixedPointKind::SaddleFocus => "SaddleFocus",
            FixedPointKind::SaddleNode => "SaddleNode",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenReport {
    pub alpha: f64,
    /// Always exactly `-epsilon`.
    pub lambda1: f64,
    /// Roots of the quadratic factor, larger real part first.
    pub lambda23: [Complex64; 2],
    /// `(a + theta)^2 - 4 eta / alpha`.
    pub discriminant: f64,
    /// `4 eta / (a + theta)^2`; `None` when `a + theta = 0`.
    pub alpha_star: Option<f64>,
    pub kind: FixedPointKind,
}

/// Closed-form eigenvalues of the Jacobian at the origin.
pub fn origin_eigenvalues(p: &ModelParams) -> EigenReport {
    let (alpha, eta) = (p.alpha(), p.eta());
    let s = p.a() + p.theta();
    let discriminant = s * s - 4.0 * eta / alpha;
    let lambda23 = if discriminant < 0.0 {
        let re = -s / (2.0 * eta);
        let im = (-discriminant).sqrt() / (2.0 * eta);
        [Complex64::new(re, im), Complex64::new(re, -im)]
    } else {
        // eta l^2 + s l + 1/alpha = 0, solved without cancellation
        let q = -0.5 * (s + s.signum() * discriminant.sqrt());
        let (r1, r2) = (q / eta, 1.0 / (alpha * q));
        let (hi, lo) = if r1 >= r2 { (r1, r2) } else { (r2, r1) };
        [Complex64::new(hi, 0.0), Complex64::new(lo, 0.0)]
    };
    let alpha_star = (s != 0.0).then(|| 4.0 * eta / (s * s));
    let mut rep = EigenReport {
        alpha,
        lambda1: -p.epsilon(),
        lambda23,
        discriminant,
        alpha_star,
        kind: FixedPointKind::SaddleNode,
    };
    rep.kind = classify_fixed_point(&rep);
    rep
}

/// Saddle-focus iff `0 < alpha < alpha_star`; without a threshold the sign
/// of the discriminant decides.
pub fn classify_fixed_point(rep: &EigenReport) -> FixedPointKind {
    let focus = match rep.alpha_star {
        Some(star) => rep.alpha > 0.0 && rep.alpha < star,
        None => rep.discriminant < 0.0,
    };
    if focus {
        FixedPointKind::SaddleFocus
    } else {
        FixedPointKind::SaddleNode
    }
}
