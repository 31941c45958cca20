//! TFR observation series and fertility-phase classification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fertility phase: pre-decline (I), transition (II), post-transition
/// recovery (III). Ordered so that a valid annotation is non-decreasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    I,
    II,
    III,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::I => write!(f, "I"),
            Phase::II => write!(f, "II"),
            Phase::III => write!(f, "III"),
        }
    }
}

/// Observed TFR per five-year period for one country, with per-period
/// phase annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct TfrSeries {
    country_id: String,
    values: Vec<f64>,
    period_start_years: Vec<i32>,
    phase_at: Vec<Phase>,
}

impl TfrSeries {
    /// Builds an unclassified series (every period Phase I). Values must be
    /// positive and finite, years strictly increasing and aligned with them.
    pub fn new(
        country_id: impl Into<String>,
        values: Vec<f64>,
        period_start_years: Vec<i32>,
    ) -> Result<Self> {
        let n = values.len();
        let phases = vec![Phase::I; n];
        Self::with_phases(country_id, values, period_start_years, phases)
    }

    /// Builds a series with explicit phase annotations, which must be
    /// non-decreasing in the order I, II, III.
    pub fn with_phases(
        country_id: impl Into<String>,
        values: Vec<f64>,
        period_start_years: Vec<i32>,
        phase_at: Vec<Phase>,
    ) -> Result<Self> {
        let country_id = country_id.into();
        if values.is_empty() {
            return Err(Error::InvalidInput(format!(
                "TFR series for {country_id} is empty"
            )));
        }
        if values.len() != period_start_years.len() || values.len() != phase_at.len() {
            return Err(Error::DimensionMismatch(format!(
                "TFR series for {country_id}: {} values, {} periods, {} phases",
                values.len(),
                period_start_years.len(),
                phase_at.len()
            )));
        }
        if let Some((i, &v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v <= 0.0)
        {
            return Err(Error::InvalidInput(format!(
                "TFR series for {country_id}: value {v} at index {i}; TFR must be positive and finite"
            )));
        }
        if period_start_years.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(format!(
                "TFR series for {country_id}: period start years must be strictly increasing"
            )));
        }
        if phase_at.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidInput(format!(
                "TFR series for {country_id}: phases must be non-decreasing (I, II, III)"
            )));
        }
        Ok(TfrSeries {
            country_id,
            values,
            period_start_years,
            phase_at,
        })
    }

    pub fn country_id(&self) -> &str {
        &self.country_id
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn period_start_years(&self) -> &[i32] {
        &self.period_start_years
    }

    pub fn phase_at(&self) -> &[Phase] {
        &self.phase_at
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn year(&self, t: usize) -> i32 {
        self.period_start_years[t]
    }

    /// Keeps only observations with period start strictly before `year`.
    pub fn truncated_before(&self, year: i32) -> Result<TfrSeries> {
        let n = self
            .period_start_years
            .iter()
            .take_while(|&&y| y < year)
            .count();
        if n == 0 {
            return Err(Error::InvalidInput(format!(
                "TFR series for {}: no observations before {year}",
                self.country_id
            )));
        }
        TfrSeries::new(
            self.country_id.clone(),
            self.values[..n].to_vec(),
            self.period_start_years[..n].to_vec(),
        )
    }

    /// Transitions (t -> t+1) with both endpoints annotated `phase`,
    /// yielded as (t, f_t, f_{t+1}).
    pub fn transitions(&self, phase: Phase) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        (0..self.values.len().saturating_sub(1)).filter_map(move |t| {
            if self.phase_at[t] == phase && self.phase_at[t + 1] == phase {
                Some((t, self.values[t], self.values[t + 1]))
            } else {
                None
            }
        })
    }
}

/// Configurable thresholds for phase classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PhaseRules {
    /// Phase III requires two consecutive increases with all three
    /// observations strictly below this TFR.
    pub phase3_tfr_ceiling: f64,
    /// Phase II starts at the pre-decline maximum once a later observation
    /// sits at least this far below it.
    pub phase2_decline_trigger: f64,
}

impl Default for PhaseRules {
    fn default() -> Self {
        PhaseRules {
            phase3_tfr_ceiling: 2.0,
            phase2_decline_trigger: 0.5,
        }
    }
}

/// Annotates a series with phases.
///
/// Phase III starts at the endpoint of the second of two consecutive
/// increases observed entirely below the ceiling; everything from that
/// period on is Phase III. Before that, Phase II starts at the last
/// observation attaining the pre-III maximum, provided a later pre-III
/// observation lies at least `phase2_decline_trigger` below the maximum;
/// otherwise the early periods stay Phase I. The result depends only on
/// the values, so classification is idempotent. Degenerate (very short)
/// series simply stay in Phase I.
pub fn classify_phases(series: &TfrSeries, rules: &PhaseRules) -> TfrSeries {
    let v = series.values();
    let n = v.len();
    let ceiling = rules.phase3_tfr_ceiling;

    let phase3_start = (2..n).find(|&t| {
        v[t - 2] < ceiling
            && v[t - 1] < ceiling
            && v[t] < ceiling
            && v[t - 1] > v[t - 2]
            && v[t] > v[t - 1]
    });
    let pre3 = phase3_start.unwrap_or(n);

    let mut phase2_start = None;
    if pre3 > 0 {
        let mut hi = 0;
        for i in 1..pre3 {
            if v[i] >= v[hi] {
                hi = i;
            }
        }
        let min_after = v[hi..pre3].iter().cloned().fold(f64::INFINITY, f64::min);
        if v[hi] - min_after >= rules.phase2_decline_trigger {
            phase2_start = Some(hi);
        }
    }

    let phases = (0..n)
        .map(|i| {
            if phase3_start.is_some_and(|s| i >= s) {
                Phase::III
            } else if phase2_start.is_some_and(|s| i >= s) {
                Phase::II
            } else {
                Phase::I
            }
        })
        .collect();

    TfrSeries {
        country_id: series.country_id.clone(),
        values: series.values.clone(),
        period_start_years: series.period_start_years.clone(),
        phase_at: phases,
    }
}
