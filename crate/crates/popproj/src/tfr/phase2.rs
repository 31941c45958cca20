//! Phase II: the fertility transition, modeled as a stochastic decline
//! whose expected five-year decrement is a double-logistic function of the
//! current level. Country parameter vectors share a truncated-normal world
//! distribution whose hyperparameters carry bounded-uniform priors.

use serde::{Deserialize, Serialize};

use crate::stats::{ln_normal_pdf, ln_truncnormal_pdf};
use crate::tfr::series::{Phase, TfrSeries};

/// Lower floor on the two transition-width parameters. Widths below this
/// collapse the logistic toward a step function and put cliffs in the
/// likelihood surface, so the prior truncates there and the evaluator
/// clamps defensively.
pub const WIDTH_FLOOR: f64 = 0.05;

/// Country-level decline parameters: four TFR-range widths (children) that
/// partition the transition, and the maximum decline pace `d` (children per
/// five-year period).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Phase2Params {
    pub deltas: [f64; 4],
    pub d: f64,
}

impl Phase2Params {
    /// Input-boundary validation: non-negative and finite components with
    /// the width sum inside the plausible TFR span. (The sampler enforces
    /// the same constraints through the prior support instead.)
    pub fn validate(&self, span_max: f64) -> crate::Result<()> {
        for (i, &w) in self.deltas.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(crate::Error::InvalidInput(format!(
                    "decline width {} is {w}; must be finite and >= 0",
                    i + 1
                )));
            }
        }
        if !self.d.is_finite() || self.d < 0.0 {
            return Err(crate::Error::InvalidInput(format!(
                "decline pace d is {}; must be finite and >= 0",
                self.d
            )));
        }
        let span: f64 = self.deltas.iter().sum();
        if span > span_max {
            return Err(crate::Error::InvalidInput(format!(
                "decline widths sum to {span}, beyond the plausible TFR span {span_max}"
            )));
        }
        Ok(())
    }
}

/// Error standard deviation of the Phase II increment as a function of the
/// fertility level and the period: a piecewise-linear tent in TFR peaking at
/// `f_peak`, flat at `floor` outside [f_lo, f_hi], inflated by `early_factor`
/// for periods starting before `early_cutoff_year` (early data are noisier).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Phase2ErrorSd {
    pub sigma_max: f64,
    pub f_peak: f64,
    pub f_lo: f64,
    pub f_hi: f64,
    pub floor: f64,
    pub early_factor: f64,
    pub early_cutoff_year: i32,
}

impl Default for Phase2ErrorSd {
    fn default() -> Self {
        Phase2ErrorSd {
            sigma_max: 0.3,
            f_peak: 4.0,
            f_lo: 1.0,
            f_hi: 8.5,
            floor: 0.05,
            early_factor: 1.5,
            early_cutoff_year: 1975,
        }
    }
}

impl Phase2ErrorSd {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.floor > 0.0 && self.sigma_max >= self.floor) {
            return Err(crate::Error::InvalidInput(format!(
                "error sd needs 0 < floor <= sigma_max, got floor={} sigma_max={}",
                self.floor, self.sigma_max
            )));
        }
        if !(self.f_lo < self.f_peak && self.f_peak < self.f_hi) {
            return Err(crate::Error::InvalidInput(format!(
                "error sd breakpoints must satisfy f_lo < f_peak < f_hi, got {} {} {}",
                self.f_lo, self.f_peak, self.f_hi
            )));
        }
        if !(self.early_factor > 0.0) {
            return Err(crate::Error::InvalidInput(
                "early_factor must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn sd(&self, period_start_year: i32, f: f64) -> f64 {
        let base = if f <= self.f_lo || f >= self.f_hi {
            self.floor
        } else if f <= self.f_peak {
            self.floor + (self.sigma_max - self.floor) * (f - self.f_lo) / (self.f_peak - self.f_lo)
        } else {
            self.floor + (self.sigma_max - self.floor) * (self.f_hi - f) / (self.f_hi - self.f_peak)
        };
        if period_start_year < self.early_cutoff_year {
            base * self.early_factor
        } else {
            base
        }
    }
}

/// Truncation bounds and hyperprior ranges for the world distribution.
/// Width components 1 and 3 are floored at `WIDTH_FLOOR` (see above);
/// hyperparameter locations are uniform over each component's support and
/// spreads are uniform on [sd_min, *_sd_max].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Phase2Prior {
    pub delta_bounds: [(f64, f64); 4],
    pub d_bounds: (f64, f64),
    pub delta_sd_max: f64,
    pub d_sd_max: f64,
    pub sd_min: f64,
    /// Upper bound on the sum of the four widths.
    pub span_max: f64,
}

impl Default for Phase2Prior {
    fn default() -> Self {
        Phase2Prior {
            delta_bounds: [
                (WIDTH_FLOOR, 10.0),
                (0.0, 10.0),
                (WIDTH_FLOOR, 10.0),
                (0.0, 10.0),
            ],
            d_bounds: (0.125, 5.0),
            delta_sd_max: 5.0,
            d_sd_max: 2.5,
            sd_min: 0.01,
            span_max: 10.0,
        }
    }
}

/// World-level state for Phase II: location and spread of each country
/// parameter's truncated-normal distribution, plus the (fixed) error-sd
/// surface and prior bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase2World {
    pub delta_mean: [f64; 4],
    pub delta_sd: [f64; 4],
    pub d_mean: f64,
    pub d_sd: f64,
    pub error_sd: Phase2ErrorSd,
    pub prior: Phase2Prior,
}

impl Phase2World {
    /// A starting point comfortably inside the prior support.
    pub fn initial(error_sd: Phase2ErrorSd, prior: Phase2Prior) -> Self {
        Phase2World {
            delta_mean: [1.0, 2.5, 1.0, 2.0],
            delta_sd: [1.0; 4],
            d_mean: 0.5,
            d_sd: 0.5,
            error_sd,
            prior,
        }
    }
}

/// Expected five-year TFR decrement at level `f`: the difference of two
/// logistic terms of amplitude `d`, rising after the start-of-decline
/// midpoint and falling toward the end-of-decline midpoint, so the
/// decrement is about `d` mid-transition and vanishes at both extremes.
/// The raw difference can dip slightly negative for extreme width ratios,
/// so the result is clamped at zero.
pub fn phase2_decrement(f: f64, p: &Phase2Params) -> f64 {
    let [d1, d2, d3, d4] = p.deltas;
    let w1 = d1.max(WIDTH_FLOOR);
    let w3 = d3.max(WIDTH_FLOOR);
    let slope = 2.0 * 9.0f64.ln();
    let high = -p.d / (1.0 + (-slope * (f - (d2 + d3 + d4) + 0.5 * w1) / w1).exp());
    let low = p.d / (1.0 + (-slope * (f - d4 - 0.5 * w3) / w3).exp());
    (high + low).max(0.0)
}

/// Error standard deviation for a Phase II transition starting at `f` in
/// the period beginning `period_start_year`.
pub fn phase2_error_sd(f: f64, period_start_year: i32, params: &Phase2ErrorSd) -> f64 {
    params.sd(period_start_year, f)
}

fn in_interval(x: f64, (lo, hi): (f64, f64)) -> bool {
    x.is_finite() && x >= lo && x <= hi
}

/// Joint log density of the Phase II model: Gaussian increment likelihood
/// over all transitions with both endpoints in Phase II, truncated-normal
/// country-parameter terms given the world distribution, and the bounded
/// uniform hyperpriors (whose constant on-support contribution is omitted).
/// Returns -inf outside the prior support; never NaN.
pub fn phase2_loglik(data: &[TfrSeries], params: &[Phase2Params], world: &Phase2World) -> f64 {
    assert_eq!(
        data.len(),
        params.len(),
        "one Phase II parameter vector per series"
    );
    let pr = &world.prior;

    for i in 0..4 {
        if !in_interval(world.delta_mean[i], pr.delta_bounds[i])
            || !in_interval(world.delta_sd[i], (pr.sd_min, pr.delta_sd_max))
        {
            return f64::NEG_INFINITY;
        }
    }
    if !in_interval(world.d_mean, pr.d_bounds)
        || !in_interval(world.d_sd, (pr.sd_min, pr.d_sd_max))
    {
        return f64::NEG_INFINITY;
    }

    let mut ll = 0.0;
    for (series, p) in data.iter().zip(params) {
        for i in 0..4 {
            if !in_interval(p.deltas[i], pr.delta_bounds[i]) {
                return f64::NEG_INFINITY;
            }
        }
        if !in_interval(p.d, pr.d_bounds) || p.deltas.iter().sum::<f64>() > pr.span_max {
            return f64::NEG_INFINITY;
        }

        for i in 0..4 {
            let (lo, hi) = pr.delta_bounds[i];
            ll += ln_truncnormal_pdf(p.deltas[i], world.delta_mean[i], world.delta_sd[i], lo, hi);
        }
        ll += ln_truncnormal_pdf(p.d, world.d_mean, world.d_sd, pr.d_bounds.0, pr.d_bounds.1);

        for (t, f0, f1) in series.transitions(Phase::II) {
            let sd = world.error_sd.sd(series.year(t), f0);
            ll += ln_normal_pdf(f1 - f0 + phase2_decrement(f0, p), 0.0, sd);
        }
    }
    if ll.is_nan() {
        f64::NEG_INFINITY
    } else {
        ll
    }
}
