//! Log-space arithmetic helpers.
//!
//! Probabilities in the excursion chain reach (n!)^-6 and disk cover times
//! in the plane reach e^1000; both live here as natural logarithms.

/// ln(e^a + e^b) with max-shift; tolerates -inf on either side.
#[inline]
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// ln(sum of e^x) over a slice, stable under large spreads.
pub fn ln_sum_exp(xs: &[f64]) -> f64 {
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = xs.iter().map(|&x| (x - hi).exp()).sum();
    hi + sum.ln()
}

/// Pairwise (cascade) summation; keeps rounding error O(log n) so
/// aggregation is stable no matter how many replicates are summed.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Round half away from zero to the nearest integer (counts in this crate
/// are non-negative, so this is round-half-up).
#[inline]
pub fn round_half_up(x: f64) -> i64 {
    (x + 0.5).floor() as i64
}
