//! Small numerical helpers shared across the model modules: log densities
//! (with the truncated-normal normalizing constant, which matters when
//! hyperparameters move), moments, and the quantile rule used everywhere.

use statrs::function::erf::erf;
use statrs::function::gamma::ln_gamma;

pub const LN_2PI: f64 = 1.837_877_066_409_345_3;

/// Standard normal CDF.
pub fn std_normal_cdf(x: f64) -> f64 {
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

/// Log density of N(mean, sd^2) at x. Non-positive sd yields -inf.
pub fn ln_normal_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    if !(sd > 0.0) || !x.is_finite() {
        return f64::NEG_INFINITY;
    }
    let z = (x - mean) / sd;
    -0.5 * (LN_2PI + z * z) - sd.ln()
}

/// Log density of a normal with mean parameter `mean` and sd parameter `sd`
/// truncated to [lo, hi]. Includes the normalizing constant, so the value is
/// a proper density in x and a valid likelihood term in (mean, sd).
pub fn ln_truncnormal_pdf(x: f64, mean: f64, sd: f64, lo: f64, hi: f64) -> f64 {
    if !(sd > 0.0) || x < lo || x > hi {
        return f64::NEG_INFINITY;
    }
    let mass = std_normal_cdf((hi - mean) / sd) - std_normal_cdf((lo - mean) / sd);
    if mass <= 0.0 {
        return f64::NEG_INFINITY;
    }
    ln_normal_pdf(x, mean, sd) - mass.ln()
}

/// Log density of a scaled Student t: x = scale * T where T ~ t(nu).
/// `scale` is the scale parameter (not a standard deviation; for nu <= 2 the
/// variance does not exist).
pub fn ln_student_t_pdf(x: f64, scale: f64, nu: f64) -> f64 {
    if !(scale > 0.0) || !(nu > 0.0) || !x.is_finite() {
        return f64::NEG_INFINITY;
    }
    let z = x / scale;
    ln_gamma((nu + 1.0) / 2.0)
        - ln_gamma(nu / 2.0)
        - 0.5 * (nu * std::f64::consts::PI).ln()
        - scale.ln()
        - 0.5 * (nu + 1.0) * (1.0 + z * z / nu).ln()
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance (n-1 denominator); 0 for fewer than 2 points.
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

pub fn sample_sd(xs: &[f64]) -> f64 {
    sample_variance(xs).sqrt()
}

/// Empirical quantile with linear interpolation between order statistics
/// (h = (n-1)p). `sorted` must be ascending and non-empty; p in [0, 1].
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    debug_assert!((0.0..=1.0).contains(&p));
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let i = h.floor() as usize;
    let frac = h - i as f64;
    if i + 1 < n {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[n - 1]
    }
}

/// Convenience: quantile of an unsorted slice (copies and sorts).
pub fn quantile(xs: &[f64], p: f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("NaN in quantile input"));
    quantile_sorted(&v, p)
}
