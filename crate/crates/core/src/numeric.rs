//! Small numerical kernels shared by the samplers and the oracle.

/// Exponents are clamped to this magnitude before `exp`.
const EXP_CLAMP: f64 = 700.0;

/// `1 / (1 + e^a)`, stable for any finite or infinite `a`.
#[inline]
pub fn logistic_complement(a: f64) -> f64 {
    1.0 / (1.0 + a.clamp(-EXP_CLAMP, EXP_CLAMP).exp())
}

/// `log(1 + e^a)` without overflow.
#[inline]
pub fn log1p_exp(a: f64) -> f64 {
    if a > 0.0 {
        a + (-a).exp().ln_1p()
    } else {
        a.exp().ln_1p()
    }
}

/// `log(2 cosh a)` without overflow.
#[inline]
pub fn log_2cosh(a: f64) -> f64 {
    let a = a.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// `log Σ e^{x_i}` with a pairwise reduction so the rounding is independent of
/// how the caller chunks the work.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + pairwise_sum_by(values, |x| (x - max).exp()).ln()
}

/// Pairwise (tree) summation of `f(x)` over `values`.
pub fn pairwise_sum_by(values: &[f64], f: impl Fn(f64) -> f64 + Copy) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().map(|&x| f(x)).sum();
    }
    let mid = values.len() / 2;
    pairwise_sum_by(&values[..mid], f) + pairwise_sum_by(&values[mid..], f)
}
