//! Explicit Runge-Kutta steppers for autonomous flows on `[f64; N]`.

use super::Flow;

#[inline]
fn axpy<const N: usize>(s: &[f64; N], h: f64, k: &[f64; N]) -> [f64; N] {
    let mut out = *s;
    for i in 0..N {
        out[i] += h * k[i];
    }
    out
}

/// One classical four-stage Runge-Kutta step.
///
/// The result is not checked for finiteness; see [`super::integrate`] for the
/// divergence-aware driver.
#[inline]
pub fn rk4_step<const N: usize, F: Flow<N> + ?Sized>(field: &F, s: &[f64; N], h: f64) -> [f64; N] {
    let k1 = field.rate(s);
    let k2 = field.rate(&axpy(s, 0.5 * h, &k1));
    let k3 = field.rate(&axpy(s, 0.5 * h, &k2));
    let k4 = field.rate(&axpy(s, h, &k3));
    let mut out = *s;
    let h6 = h / 6.0;
    for i in 0..N {
        out[i] += h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b_hat
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One Dormand-Prince step: fifth-order solution and the embedded
/// fourth-order error estimate.
pub fn dopri5_step<const N: usize, F: Flow<N> + ?Sized>(field: &F, s: &[f64; N], h: f64) -> ([f64; N], [f64; N]) {
    let k1 = field.rate(s);
    let mut t = *s;
    for i in 0..N {
        t[i] = s[i] + h * A21 * k1[i];
    }
    let k2 = field.rate(&t);
    for i in 0..N {
        t[i] = s[i] + h * (A31 * k1[i] + A32 * k2[i]);
    }
    let k3 = field.rate(&t);
    for i in 0..N {
        t[i] = s[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    }
    let k4 = field.rate(&t);
    for i in 0..N {
        t[i] = s[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    }
    let k5 = field.rate(&t);
    for i in 0..N {
        t[i] = s[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
    }
    let k6 = field.rate(&t);
    let mut next = *s;
    for i in 0..N {
        next[i] = s[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    }
    let k7 = field.rate(&next);
    let mut err = [0.0; N];
    for i in 0..N {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    (next, err)
}

/// Scaled RMS norm of a local error estimate.
pub(crate) fn error_norm<const N: usize>(
    err: &[f64; N],
    prev: &[f64; N],
    next: &[f64; N],
    abs_tol: f64,
    rel_tol: f64,
) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let sc = abs_tol + rel_tol * prev[i].abs().max(next[i].abs());
        let r = err[i] / sc;
        acc += r * r;
    }
    (acc / N as f64).sqrt()
}
