//! Phase III: post-transition fertility recovery, modeled as a stationary
//! AR(1) around an asymptote. Two variants: a fixed world asymptote of 2.1
//! with parameters shared by all countries (fitted by maximum likelihood),
//! and a hierarchical variant where each country's asymptote and
//! autoregression coefficient come from truncated-normal world
//! distributions with bounded-uniform hyperpriors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{ln_normal_pdf, ln_truncnormal_pdf};
use crate::tfr::series::{Phase, TfrSeries};

/// Approximate replacement-level TFR, the fixed asymptote of the
/// non-hierarchical Phase III model.
pub const REPLACEMENT_TFR: f64 = 2.1;

/// Shared-parameter AR(1): f' - mu = rho (f - mu) + N(0, sigma_b^2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Phase3Fixed {
    pub rho: f64,
    pub sigma_b: f64,
    pub mu: f64,
}

impl Phase3Fixed {
    pub fn new(rho: f64, sigma_b: f64) -> Self {
        Phase3Fixed {
            rho,
            sigma_b,
            mu: REPLACEMENT_TFR,
        }
    }

    /// Standard deviation of the stationary distribution.
    pub fn stationary_sd(&self) -> f64 {
        self.sigma_b / (1.0 - self.rho * self.rho).sqrt()
    }
}

/// Conditional Gaussian AR(1) log likelihood over all transitions with both
/// endpoints in Phase III. -inf outside rho in [0, 1), sigma_b > 0.
pub fn phase3_fixed_loglik(data: &[TfrSeries], p: &Phase3Fixed) -> f64 {
    if !(0.0..1.0).contains(&p.rho) || !(p.sigma_b > 0.0) || !p.mu.is_finite() {
        return f64::NEG_INFINITY;
    }
    let mut ll = 0.0;
    for series in data {
        for (_, f0, f1) in series.transitions(Phase::III) {
            ll += ln_normal_pdf(f1 - p.mu - p.rho * (f0 - p.mu), 0.0, p.sigma_b);
        }
    }
    if ll.is_nan() {
        f64::NEG_INFINITY
    } else {
        ll
    }
}

/// Maximum-likelihood fit of the fixed-asymptote AR(1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase3MleFit {
    pub rho: f64,
    pub sigma_b: f64,
    pub mu: f64,
    /// Asymptotic standard errors; absent when the fit is degenerate.
    pub se_rho: Option<f64>,
    pub se_sigma_b: Option<f64>,
    pub n_transitions: usize,
    pub n_series: usize,
    /// rho was clamped to the boundary of [0, 1).
    pub rho_at_boundary: bool,
    /// the residual scale collapsed toward zero (constant data).
    pub sigma_near_zero: bool,
}

impl Phase3MleFit {
    pub fn params(&self) -> Phase3Fixed {
        Phase3Fixed {
            rho: self.rho,
            sigma_b: self.sigma_b,
            mu: self.mu,
        }
    }
}

/// Fits rho and sigma_b by maximizing the conditional AR(1) likelihood with
/// the asymptote fixed at 2.1. The profile maximum is closed-form:
/// rho = sum(y_t y_{t+1}) / sum(y_t^2) clamped to [0, 1), then sigma_b^2 is
/// the mean squared residual, so the fit is deterministic. Requires at
/// least two transitions with both endpoints in Phase III.
pub fn phase3_mle(data: &[TfrSeries]) -> Result<Phase3MleFit> {
    let mu = REPLACEMENT_TFR;
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    let mut n_series = 0;
    for series in data {
        let before = pairs.len();
        pairs.extend(
            series
                .transitions(Phase::III)
                .map(|(_, f0, f1)| (f0 - mu, f1 - mu)),
        );
        if pairs.len() > before {
            n_series += 1;
        }
    }
    let n = pairs.len();
    if n < 2 {
        return Err(Error::TooFewObservations {
            context: "post-transition AR(1) fit".into(),
            needed: 2,
            got: n,
        });
    }

    let syy: f64 = pairs.iter().map(|(y0, _)| y0 * y0).sum();
    let sxy: f64 = pairs.iter().map(|(y0, y1)| y0 * y1).sum();

    let mut rho_at_boundary = false;
    let rho = if syy > 0.0 {
        let raw = sxy / syy;
        if !(0.0..1.0).contains(&raw) {
            rho_at_boundary = true;
        }
        raw.clamp(0.0, 1.0 - 1e-9)
    } else {
        // all starting values at the asymptote: rho unidentified
        rho_at_boundary = true;
        0.0
    };

    let ss_resid: f64 = pairs
        .iter()
        .map(|(y0, y1)| {
            let r = y1 - rho * y0;
            r * r
        })
        .sum();
    let sigma_b = (ss_resid / n as f64).sqrt();
    let sigma_near_zero = sigma_b < 1e-8;

    let se_rho = (syy > 0.0 && sigma_b > 0.0).then(|| sigma_b / syy.sqrt());
    let se_sigma_b = (sigma_b > 0.0).then(|| sigma_b / (2.0 * n as f64).sqrt());

    Ok(Phase3MleFit {
        rho,
        sigma_b,
        mu,
        se_rho,
        se_sigma_b,
        n_transitions: n,
        n_series,
        rho_at_boundary,
        sigma_near_zero,
    })
}

/// Hierarchical Phase III state: country asymptotes and autocorrelations
/// plus the world hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase3Hier {
    pub mu_c: Vec<f64>,
    pub rho_c: Vec<f64>,
    pub mu_bar: f64,
    pub sigma_mu: f64,
    pub rho_bar: f64,
    pub sigma_rho: f64,
    pub sigma_eps: f64,
}

/// Hyperprior bounds. The world-mean asymptote is capped at replacement
/// level; the spread caps keep the country distributions proper.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Phase3HierPrior {
    pub mu_bar_max: f64,
    pub sigma_mu_max: f64,
    pub sigma_rho_max: f64,
    pub sigma_eps_max: f64,
}

impl Default for Phase3HierPrior {
    fn default() -> Self {
        Phase3HierPrior {
            mu_bar_max: REPLACEMENT_TFR,
            sigma_mu_max: 0.318,
            sigma_rho_max: 0.289,
            sigma_eps_max: 0.5,
        }
    }
}

/// AR(1) transition terms only (no priors): each country's Phase III
/// transitions under its own asymptote and autocorrelation, with shared
/// innovation sd. Exposed separately so the fixed-parameter model is
/// recoverable as a special case.
pub fn phase3_hier_transition_loglik(
    data: &[TfrSeries],
    mu_c: &[f64],
    rho_c: &[f64],
    sigma_eps: f64,
) -> f64 {
    assert_eq!(data.len(), mu_c.len());
    assert_eq!(data.len(), rho_c.len());
    let mut ll = 0.0;
    for ((series, &mu), &rho) in data.iter().zip(mu_c).zip(rho_c) {
        for (_, f0, f1) in series.transitions(Phase::III) {
            ll += ln_normal_pdf(f1 - mu - rho * (f0 - mu), 0.0, sigma_eps);
        }
    }
    ll
}

/// Joint log density of the hierarchical Phase III model: AR(1) likelihood,
/// truncated-normal country terms (mu_c on [0, inf), rho_c on [0, 1]), and
/// bounded-uniform hyperpriors (constant on support, omitted). -inf outside
/// the support; never NaN.
pub fn phase3_hier_loglik(data: &[TfrSeries], p: &Phase3Hier, prior: &Phase3HierPrior) -> f64 {
    assert_eq!(data.len(), p.mu_c.len());
    assert_eq!(data.len(), p.rho_c.len());

    let support_ok = (0.0..=prior.mu_bar_max).contains(&p.mu_bar)
        && p.sigma_mu > 0.0
        && p.sigma_mu <= prior.sigma_mu_max
        && (0.0..=1.0).contains(&p.rho_bar)
        && p.sigma_rho > 0.0
        && p.sigma_rho <= prior.sigma_rho_max
        && p.sigma_eps > 0.0
        && p.sigma_eps <= prior.sigma_eps_max
        && p.mu_c.iter().all(|&m| m.is_finite() && m >= 0.0)
        && p.rho_c.iter().all(|&r| (0.0..=1.0).contains(&r));
    if !support_ok {
        return f64::NEG_INFINITY;
    }

    let mut ll = phase3_hier_transition_loglik(data, &p.mu_c, &p.rho_c, p.sigma_eps);
    for (&mu, &rho) in p.mu_c.iter().zip(&p.rho_c) {
        ll += ln_truncnormal_pdf(mu, p.mu_bar, p.sigma_mu, 0.0, f64::INFINITY);
        ll += ln_truncnormal_pdf(rho, p.rho_bar, p.sigma_rho, 0.0, 1.0);
    }
    if ll.is_nan() {
        f64::NEG_INFINITY
    } else {
        ll
    }
}
