//! Attractor taxonomy from the sign pattern of the Lyapunov spectrum.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::lyapunov::LyapunovSpectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Zero,
    Negative,
}

impl Sign {
    pub fn of(value: f64, zero_tol: f64) -> Self {
        if value.abs() < zero_tol {
            Sign::Zero
        } else if value > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Zero => '0',
            Sign::Negative => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignPattern(pub [Sign; 3]);

impl SignPattern {
    pub fn of(ls: &LyapunovSpectrum, zero_tol: f64) -> Self {
        SignPattern(ls.exponents.map(|l| Sign::of(l, zero_tol)))
    }
}

impl SignPattern {
    /// Signs without separators, e.g. `+0-`; safe inside CSV fields.
    pub fn compact(&self) -> String {
        self.0.iter().map(|s| s.symbol()).collect()
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0.map(Sign::symbol);
        write!(f, "({a},{b},{c})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttractorKind {
    /// `(0, 0, -)`
    Torus2,
    /// `(0, -, -)` with a single peak level per spiral lobe.
    LimitCycle1,
    /// `(0, -, -)` with `n >= 2` peak levels per spiral lobe.
    PeriodicN(usize),
    /// `(0, -, -)` whose period could not be resolved from the peaks.
    PeriodicUnresolved,
    /// `(+, 0, -)`
    Chaos,
    /// Sign pattern outside the torus / periodic / chaos taxonomy.
    Unclassified(SignPattern),
}

impl AttractorKind {
    pub fn label(&self) -> String {
        match self {
            AttractorKind::Torus2 => "Torus2".into(),
            AttractorKind::LimitCycle1 => "LimitCycle1".into(),
            AttractorKind::PeriodicN(_) => "PeriodicN".into(),
            AttractorKind::PeriodicUnresolved => "Periodic".into(),
            AttractorKind::Chaos => "Chaos".into(),
            AttractorKind::Unclassified(p) => format!("Unclassified({})", p.compact()),
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, AttractorKind::LimitCycle1 | AttractorKind::PeriodicN(_) | AttractorKind::PeriodicUnresolved)
    }

    pub fn period(&self) -> Option<usize> {
        match self {
            AttractorKind::LimitCycle1 => Some(1),
            AttractorKind::PeriodicN(n) => Some(*n),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttractorClass {
    pub kind: AttractorKind,
    /// Only meaningful for [`AttractorKind::Chaos`].
    pub double_spiral: bool,
}

impl AttractorClass {
    pub fn with_double_spiral(self, double_spiral: bool) -> Self {
        Self { double_spiral: double_spiral && self.kind == AttractorKind::Chaos, ..self }
    }
}

/// Maps the spectrum's sign pattern onto the attractor taxonomy. For the
/// periodic pattern, `period` (peak levels per lobe) picks between a limit
/// cycle and an n-periodic orbit.
pub fn classify_attractor(ls: &LyapunovSpectrum, zero_tol: f64, period: Option<usize>) -> AttractorClass {
    use Sign::*;
    let pattern = SignPattern::of(ls, zero_tol);
    let kind = match pattern.0 {
        [Positive, Zero, Negative] => AttractorKind::Chaos,
        [Zero, Zero, Negative] => AttractorKind::Torus2,
        [Zero, Negative, Negative] => match period {
            Some(1) => AttractorKind::LimitCycle1,
            Some(n) if n >= 2 => AttractorKind::PeriodicN(n),
            _ => AttractorKind::PeriodicUnresolved,
        },
        _ => AttractorKind::Unclassified(pattern),
    };
    AttractorClass { kind, double_spiral: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(exponents: [f64; 3]) -> LyapunovSpectrum {
        LyapunovSpectrum { exponents, averaging_time: 1.0, renorm_interval: 1.0, tail_variation: [0.0; 3] }
    }

    #[test]
    fn taxonomy() {
        let c = |e, p| classify_attractor(&spectrum(e), 0.02, p).kind;
        assert_eq!(c([0.08, 0.0, -0.4], None), AttractorKind::Chaos);
        assert_eq!(c([0.001, -0.0005, -0.13], None), AttractorKind::Torus2);
        assert!(c([0.0, -0.08, -0.08], None).is_periodic());
        assert_eq!(c([0.0, -0.08, -0.08], Some(1)), AttractorKind::LimitCycle1);
        assert_eq!(c([0.0, -0.08, -0.08], Some(3)), AttractorKind::PeriodicN(3));
        assert_eq!(c([0.0, -0.08, -0.08], None), AttractorKind::PeriodicUnresolved);
    }

    #[test]
    fn outside_taxonomy_is_reported() {
        let k = classify_attractor(&spectrum([0.3, 0.1, -1.0]), 0.02, None).kind;
        assert_eq!(k.label(), "Unclassified(++-)");
        assert_eq!(SignPattern([Sign::Positive, Sign::Zero, Sign::Negative]).to_string(), "(+,0,-)");
        let k = classify_attractor(&spectrum([-0.1, -0.2, -0.3]), 0.02, None).kind;
        assert!(matches!(k, AttractorKind::Unclassified(_)));
    }

    #[test]
    fn geometry_flag_only_for_chaos() {
        let chaos = classify_attractor(&spectrum([0.08, 0.0, -0.4]), 0.02, None);
        assert!(chaos.with_double_spiral(true).double_spiral);
        let torus = classify_attractor(&spectrum([0.0, 0.0, -0.4]), 0.02, None);
        assert!(!torus.with_double_spiral(true).double_spiral);
    }
}
