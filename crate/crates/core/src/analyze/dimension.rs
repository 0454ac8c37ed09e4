/// Kaplan-Yorke (Lyapunov) dimension of a spectrum sorted descending:
/// `j + (l_1 + ... + l_j) / |l_{j+1}|`, with `j` the largest index whose
/// partial sum is non-negative. Zero when the leading exponent is negative.
pub fn kaplan_yorke(exponents: &[f64]) -> f64 {
    debug_assert!(exponents.windows(2).all(|w| w[0] >= w[1]), "exponents must be sorted descending");
    if exponents.first().is_none_or(|&l| l < 0.0) {
        return 0.0;
    }
    let mut partial = 0.0;
    let mut j = 0;
    let mut sum_j = 0.0;
    for (i, &l) in exponents.iter().enumerate() {
        partial += l;
        if partial >= 0.0 {
            j = i + 1;
            sum_j = partial;
        }
    }
    if j == exponents.len() {
        return j as f64;
    }
    j as f64 + sum_j / exponents[j].abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_values() {
        assert!((kaplan_yorke(&[0.08, 0.0, -0.4]) - 2.2).abs() < 1e-15);
        assert!((kaplan_yorke(&[0.073, 0.0, -0.38]) - (2.0 + 0.073 / 0.38)).abs() < 1e-15);
        assert_eq!(kaplan_yorke(&[0.0, -0.08, -0.08]), 1.0);
        assert_eq!(kaplan_yorke(&[0.0, 0.0, -0.13]), 2.0);
        assert_eq!(kaplan_yorke(&[-0.1, -0.2, -0.3]), 0.0);
        assert_eq!(kaplan_yorke(&[0.1, 0.05, 0.0]), 3.0);
        // sum of the first two already negative
        assert!((kaplan_yorke(&[0.1, -0.3, -0.5]) - (1.0 + 0.1 / 0.3)).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn periodic_and_torus_patterns_are_integral(a in 0.001..5.0f64, b in 0.0..5.0f64) {
            prop_assert_eq!(kaplan_yorke(&[0.0, -a, -a - b]), 1.0);
            prop_assert_eq!(kaplan_yorke(&[0.0, 0.0, -a]), 2.0);
        }

        #[test]
        fn bounded_by_dimension(mut l in proptest::array::uniform3(-2.0..2.0f64)) {
            l.sort_by(|a, b| b.total_cmp(a));
            let d = kaplan_yorke(&l);
            prop_assert!((0.0..=3.0).contains(&d));
        }
    }
}
