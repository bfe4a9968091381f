//! Integer powers and finite geometric sums.
//!
//! Every ratio of the form `(1 - z^(n+1)) / (1 - z)` or
//! `(a^(n+1) - b^(n+1)) / (a - b)` is evaluated as the explicit sum, which
//! stays finite at `z = 1` and `a = b`. Powers use repeated multiplication
//! so results do not depend on the platform `pow`.

/// `z^n`.
#[inline]
pub fn ipow(z: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= z;
    }
    acc
}

/// `sum_{k=0}^{m} z^k`.
#[inline]
pub fn geom_sum(z: f64, m: u32) -> f64 {
    let mut s = 1.0;
    for _ in 0..m {
        s = s * z + 1.0;
    }
    s
}

/// `sum_{k=1}^{m} k z^(k-1)`, the derivative of [`geom_sum`].
#[inline]
pub fn geom_sum_deriv(z: f64, m: u32) -> f64 {
    let mut s = 0.0;
    for k in (1..=m).rev() {
        s = s * z + k as f64;
    }
    s
}

/// `sum_{k=0}^{m} a^(m-k) b^k`, i.e. `(a^(m+1) - b^(m+1)) / (a - b)`.
#[inline]
pub fn power_diff_quotient(a: f64, b: f64, m: u32) -> f64 {
    let mut s = 1.0;
    let mut bp = 1.0;
    for _ in 0..m {
        bp *= b;
        s = s * a + bp;
    }
    s
}

/// Derivative in `b` of [`power_diff_quotient`]: `sum_{k=1}^{m} k a^(m-k) b^(k-1)`.
#[inline]
pub fn power_diff_quotient_deriv(a: f64, b: f64, m: u32) -> f64 {
    let mut s = 0.0;
    let mut ap = 1.0;
    for k in (1..=m).rev() {
        s += k as f64 * ap * ipow(b, k - 1);
        ap *= a;
    }
    s
}
