//! Sample statistics with a fixed summation order.
//!
//! All reductions use an indexed pairwise tree so that serial and
//! parallel callers (which may split the slice, reduce the halves, and
//! combine) obtain bit-identical results regardless of chunking, as long
//! as splits happen at the same recursion boundaries this module uses.

/// Below this length the sum is a plain left-to-right fold.
const PAIRWISE_LEAF: usize = 32;

/// Pairwise (cascade) summation. Deterministic for a given slice.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_LEAF {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Sample mean via pairwise summation. Empty input yields 0.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    pairwise_sum(xs) / xs.len() as f64
}

/// Two-pass sample mean and unbiased variance (divisor `n - 1`).
///
/// For fewer than two samples the variance is 0.
pub fn mean_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let m = mean(xs);
    if n < 2 {
        return (m, 0.0);
    }
    let ss = pairwise_sum_of(xs, |x| {
        let d = x - m;
        d * d
    });
    (m, ss / (n - 1) as f64)
}

/// Pairwise sum of `f(x)` over the slice, same tree shape as [`pairwise_sum`].
pub fn pairwise_sum_of(xs: &[f64], f: impl Fn(f64) -> f64 + Copy) -> f64 {
    if xs.len() <= PAIRWISE_LEAF {
        let mut acc = 0.0;
        for &x in xs {
            acc += f(x);
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum_of(&xs[..mid], f) + pairwise_sum_of(&xs[mid..], f)
    }
}

/// Sample Pearson correlation coefficient. Returns 0 when either sequence
/// is degenerate (fewer than two points or zero variance).
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len(), "pearson: length mismatch");
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return 0.0;
    }
    sxy / crate::math::sqrt(sxx * syy)
}
