//! Deterministic demographic bookkeeping: age pyramids, Leslie matrix
//! construction, cohort-component projection, and derived indicators.
//!
//! Everything here is pure arithmetic over validated value types. The
//! stochastic fertility/mortality models live elsewhere and feed
//! `VitalSchedule`s into these functions. All types are immutable after
//! construction, so projections can run in parallel freely.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Relative tolerance below which a negative projected count is clamped to
/// zero silently; larger negatives (net outflow exceeding a cohort) are
/// clamped with a data-quality warning.
const CLAMP_WARN_RELATIVE: f64 = 1e-6;

/// Population counts by sex in fixed-width age groups at one point in time.
/// The last group is open-ended (e.g. 100+).
#[derive(Debug, Clone, PartialEq)]
pub struct AgePyramid {
    counts_female: Vec<f64>,
    counts_male: Vec<f64>,
    age_width_years: u32,
    base_period_label: String,
}

impl AgePyramid {
    /// Validates: both sex arrays the same length, at least 3 groups,
    /// every count finite and non-negative.
    pub fn new(
        counts_female: Vec<f64>,
        counts_male: Vec<f64>,
        age_width_years: u32,
        base_period_label: impl Into<String>,
    ) -> Result<Self> {
        if counts_female.len() != counts_male.len() {
            return Err(Error::DimensionMismatch(format!(
                "pyramid has {} female but {} male age groups",
                counts_female.len(),
                counts_male.len()
            )));
        }
        if counts_female.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "pyramid needs at least 3 age groups, got {}",
                counts_female.len()
            )));
        }
        if age_width_years == 0 {
            return Err(Error::InvalidInput("age group width must be positive".into()));
        }
        for (sex, counts) in [("female", &counts_female), ("male", &counts_male)] {
            if let Some((i, &c)) = counts
                .iter()
                .enumerate()
                .find(|(_, c)| !c.is_finite() || **c < 0.0)
            {
                return Err(Error::InvalidInput(format!(
                    "{sex} count in age group {i} is {c}; counts must be finite and >= 0"
                )));
            }
        }
        Ok(AgePyramid {
            counts_female,
            counts_male,
            age_width_years,
            base_period_label: base_period_label.into(),
        })
    }

    pub fn n_groups(&self) -> usize {
        self.counts_female.len()
    }

    pub fn age_width_years(&self) -> u32 {
        self.age_width_years
    }

    pub fn label(&self) -> &str {
        &self.base_period_label
    }

    pub fn counts_female(&self) -> &[f64] {
        &self.counts_female
    }

    pub fn counts_male(&self) -> &[f64] {
        &self.counts_male
    }

    /// Start age of group `idx`.
    pub fn group_start_age(&self, idx: usize) -> u32 {
        idx as u32 * self.age_width_years
    }
}

/// Age-specific ingredients of one projection period for one sex:
/// surviving births per person (`B`), survival ratios (`S`), and net
/// migration counts (`m`). Indices align with the pyramid's age groups.
///
/// `births_surviving_ratio[x]` is the number of new persons in the first
/// age group at the end of the period per person in group `x` at the start.
/// For a female schedule this already includes the female birth fraction
/// and infant survivorship; a male schedule must have an all-zero B row
/// (births are driven by the female population).
#[derive(Debug, Clone, PartialEq)]
pub struct VitalSchedule {
    births_surviving_ratio: Vec<f64>,
    survival_ratio: Vec<f64>,
    net_migration: Vec<f64>,
}

impl VitalSchedule {
    /// Validates: equal lengths (>= 3), 0 <= S <= 1, B >= 0, all finite.
    pub fn new(
        births_surviving_ratio: Vec<f64>,
        survival_ratio: Vec<f64>,
        net_migration: Vec<f64>,
    ) -> Result<Self> {
        let n = births_surviving_ratio.len();
        if survival_ratio.len() != n || net_migration.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "schedule arrays disagree: B={}, S={}, m={}",
                n,
                survival_ratio.len(),
                net_migration.len()
            )));
        }
        if n < 3 {
            return Err(Error::InvalidInput(format!(
                "schedule needs at least 3 age groups, got {n}"
            )));
        }
        for (i, &s) in survival_ratio.iter().enumerate() {
            if !s.is_finite() || !(0.0..=1.0).contains(&s) {
                return Err(Error::InvalidInput(format!(
                    "survival ratio in age group {i} is {s}; must lie in [0, 1]"
                )));
            }
        }
        for (i, &b) in births_surviving_ratio.iter().enumerate() {
            if !b.is_finite() || b < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "birth ratio in age group {i} is {b}; must be finite and >= 0"
                )));
            }
        }
        if let Some((i, &m)) = net_migration.iter().enumerate().find(|(_, m)| !m.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "net migration in age group {i} is {m}; must be finite"
            )));
        }
        Ok(VitalSchedule {
            births_surviving_ratio,
            survival_ratio,
            net_migration,
        })
    }

    pub fn n_groups(&self) -> usize {
        self.births_surviving_ratio.len()
    }

    pub fn births_surviving_ratio(&self) -> &[f64] {
        &self.births_surviving_ratio
    }

    pub fn survival_ratio(&self) -> &[f64] {
        &self.survival_ratio
    }

    pub fn net_migration(&self) -> &[f64] {
        &self.net_migration
    }

    /// Checks that B is zero outside the group index range [lo, hi].
    pub fn check_reproductive_range(&self, lo: usize, hi: usize) -> Result<()> {
        for (i, &b) in self.births_surviving_ratio.iter().enumerate() {
            if b != 0.0 && (i < lo || i > hi) {
                return Err(Error::InvalidInput(format!(
                    "nonzero birth ratio {b} in age group {i}, outside reproductive groups [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

/// One pyramid per projected period, base included.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    pub pyramids: Vec<AgePyramid>,
    pub period_labels: Vec<String>,
}

/// Builds the one-sex projection matrix for a schedule: row 1 holds the
/// surviving-birth ratios, the subdiagonal the survival ratios, and the
/// bottom-right corner keeps survivors of the two oldest groups in the
/// open-ended group. Migration is not part of the matrix; it is added
/// after the multiplication.
pub fn build_leslie_matrix(schedule: &VitalSchedule) -> DMatrix<f64> {
    let n = schedule.n_groups();
    let b = schedule.births_surviving_ratio();
    let s = schedule.survival_ratio();
    let mut p = DMatrix::<f64>::zeros(n, n);
    for x in 0..n {
        p[(0, x)] = b[x];
    }
    for x in 0..n - 2 {
        p[(x + 1, x)] = s[x];
    }
    p[(n - 1, n - 2)] = s[n - 2];
    p[(n - 1, n - 1)] = s[n - 1];
    p
}

/// Clamps a projected count at zero. Small negatives (float noise relative
/// to the pre-migration cohort) clamp silently; larger ones indicate net
/// outflow exceeding the cohort and are logged as data-quality warnings.
fn clamp_count(value: f64, survived: f64, what: &str) -> f64 {
    if value >= 0.0 {
        return value;
    }
    let scale = survived.abs().max(1.0);
    if -value > CLAMP_WARN_RELATIVE * scale {
        log::warn!(
            "{what}: projected count {value:.6} is negative (cohort {survived:.6}); \
             clamping to 0 - check migration assumptions"
        );
    }
    0.0
}

/// Advances `label` by one period of `width` years when it parses as a year;
/// otherwise appends the offset.
fn next_label(label: &str, width: u32) -> String {
    match label.trim().parse::<i64>() {
        Ok(year) => (year + i64::from(width)).to_string(),
        Err(_) => format!("{label}+{width}"),
    }
}

/// Projects one period ahead with a female-dominant two-sex model.
///
/// Female counts follow the accounting identities exactly: first group =
/// surviving births + migration, interior groups age with survival, the top
/// group absorbs its own survivors. Male counts follow the same identities
/// except the first group, which is the female surviving births scaled by
/// `sex_ratio_at_birth` (callers fold any male/female infant-survivorship
/// difference into this ratio). The male schedule must carry an all-zero
/// B row. Negative results are clamped at zero (see `clamp_count`).
pub fn project_one_period(
    pyramid: &AgePyramid,
    schedule_female: &VitalSchedule,
    schedule_male: &VitalSchedule,
    sex_ratio_at_birth: f64,
) -> Result<AgePyramid> {
    let n = pyramid.n_groups();
    if schedule_female.n_groups() != n || schedule_male.n_groups() != n {
        return Err(Error::DimensionMismatch(format!(
            "pyramid has {n} groups; schedules have {} (female) and {} (male)",
            schedule_female.n_groups(),
            schedule_male.n_groups()
        )));
    }
    if !sex_ratio_at_birth.is_finite() || sex_ratio_at_birth <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "sex ratio at birth must be positive and finite, got {sex_ratio_at_birth}"
        )));
    }
    if schedule_male.births_surviving_ratio().iter().any(|&b| b != 0.0) {
        return Err(Error::InvalidInput(
            "male schedule must have a zero B row; births derive from the female population"
                .into(),
        ));
    }

    let nf = pyramid.counts_female();
    let nm = pyramid.counts_male();

    let surviving_female_births: f64 = schedule_female
        .births_surviving_ratio()
        .iter()
        .zip(nf)
        .map(|(b, n)| b * n)
        .sum();

    let advance = |counts: &[f64], sched: &VitalSchedule, first: f64, sex: &str| -> Vec<f64> {
        let s = sched.survival_ratio();
        let m = sched.net_migration();
        let mut out = vec![0.0; n];
        out[0] = clamp_count(first + m[0], first, sex);
        for x in 0..n - 2 {
            let survived = s[x] * counts[x];
            out[x + 1] = clamp_count(survived + m[x + 1], survived, sex);
        }
        let survived_top = s[n - 2] * counts[n - 2] + s[n - 1] * counts[n - 1];
        out[n - 1] = clamp_count(survived_top + m[n - 1], survived_top, sex);
        out
    };

    let new_female = advance(nf, schedule_female, surviving_female_births, "female");
    let new_male = advance(
        nm,
        schedule_male,
        surviving_female_births * sex_ratio_at_birth,
        "male",
    );

    AgePyramid::new(
        new_female,
        new_male,
        pyramid.age_width_years(),
        next_label(pyramid.label(), pyramid.age_width_years()),
    )
}

/// Applies `project_one_period` recursively. `schedules[t]` is the
/// (female, male) pair for period t. The result includes the base pyramid,
/// so it holds `horizon + 1` pyramids.
pub fn project_horizon(
    base: &AgePyramid,
    schedules: &[(VitalSchedule, VitalSchedule)],
    horizon: usize,
    sex_ratio_at_birth: f64,
) -> Result<ProjectionResult> {
    if horizon == 0 {
        return Err(Error::InvalidInput("projection horizon must be >= 1".into()));
    }
    if schedules.len() < horizon {
        return Err(Error::DimensionMismatch(format!(
            "horizon {horizon} needs {horizon} schedule pairs, got {}",
            schedules.len()
        )));
    }
    let mut pyramids = Vec::with_capacity(horizon + 1);
    pyramids.push(base.clone());
    for (female, male) in schedules.iter().take(horizon) {
        let next = project_one_period(pyramids.last().unwrap(), female, male, sex_ratio_at_birth)?;
        pyramids.push(next);
    }
    let period_labels = pyramids.iter().map(|p| p.label().to_string()).collect();
    Ok(ProjectionResult {
        pyramids,
        period_labels,
    })
}

/// Persons aged 20-64 per person aged 65 and over, both sexes combined.
/// Requires 5-year groups covering those ranges exactly.
pub fn potential_support_ratio(pyramid: &AgePyramid) -> Result<f64> {
    if pyramid.age_width_years() != 5 {
        return Err(Error::InvalidInput(format!(
            "support ratio needs 5-year age groups, got {}-year groups",
            pyramid.age_width_years()
        )));
    }
    // group 4 starts at age 20; group 13 starts at age 65
    if pyramid.n_groups() < 14 {
        return Err(Error::InvalidInput(format!(
            "support ratio needs groups covering ages 65+, got {} groups (top starts at {})",
            pyramid.n_groups(),
            pyramid.group_start_age(pyramid.n_groups() - 1)
        )));
    }
    let both = |i: usize| pyramid.counts_female()[i] + pyramid.counts_male()[i];
    let workers: f64 = (4..13).map(both).sum();
    let older: f64 = (13..pyramid.n_groups()).map(both).sum();
    if older == 0.0 {
        return Err(Error::Undefined(
            "potential support ratio: no population aged 65 and over".into(),
        ));
    }
    Ok(workers / older)
}

/// Total population across both sexes and all age groups.
pub fn total_population(pyramid: &AgePyramid) -> f64 {
    pyramid.counts_female().iter().sum::<f64>() + pyramid.counts_male().iter().sum::<f64>()
}

/// Median age with linear interpolation inside the containing age group
/// (population assumed uniform within a group, including the open-ended
/// top group over one width). Errors when the pyramid is all zeros.
pub fn median_age(pyramid: &AgePyramid) -> Result<f64> {
    let total = total_population(pyramid);
    if total <= 0.0 {
        return Err(Error::Undefined("median age of an empty pyramid".into()));
    }
    let half = total / 2.0;
    let width = f64::from(pyramid.age_width_years());
    let mut cum = 0.0;
    for i in 0..pyramid.n_groups() {
        let in_group = pyramid.counts_female()[i] + pyramid.counts_male()[i];
        if cum + in_group >= half && in_group > 0.0 {
            let start = f64::from(pyramid.group_start_age(i));
            return Ok(start + width * (half - cum) / in_group);
        }
        cum += in_group;
    }
    // only reachable through accumulated rounding; the top group contains
    // the median in that case
    let start = f64::from(pyramid.group_start_age(pyramid.n_groups() - 1));
    Ok(start + width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn pyramid(f: &[f64], m: &[f64]) -> AgePyramid {
        AgePyramid::new(f.to_vec(), m.to_vec(), 5, "2010").unwrap()
    }

    fn female_only(f: &[f64]) -> AgePyramid {
        AgePyramid::new(f.to_vec(), vec![0.0; f.len()], 5, "2010").unwrap()
    }

    fn schedule(b: &[f64], s: &[f64], m: &[f64]) -> VitalSchedule {
        VitalSchedule::new(b.to_vec(), s.to_vec(), m.to_vec()).unwrap()
    }

    fn zero_male_schedule(n: usize, s: &[f64]) -> VitalSchedule {
        VitalSchedule::new(vec![0.0; n], s.to_vec(), vec![0.0; n]).unwrap()
    }

    /// Scalar accounting identities: the oracle for the matrix construction.
    fn identities(b: &[f64], s: &[f64], m: &[f64], n0: &[f64]) -> Vec<f64> {
        let n = n0.len();
        let mut out = vec![0.0; n];
        out[0] = b.iter().zip(n0).map(|(b, v)| b * v).sum::<f64>() + m[0];
        for x in 0..n - 2 {
            out[x + 1] = s[x] * n0[x] + m[x + 1];
        }
        out[n - 1] = s[n - 2] * n0[n - 2] + s[n - 1] * n0[n - 1] + m[n - 1];
        out
    }

    #[test]
    fn pyramid_validation() {
        assert!(AgePyramid::new(vec![1.0, 2.0], vec![1.0, 2.0], 5, "x").is_err());
        assert!(AgePyramid::new(vec![1.0; 3], vec![1.0; 4], 5, "x").is_err());
        assert!(AgePyramid::new(vec![1.0, -0.1, 1.0], vec![1.0; 3], 5, "x").is_err());
        assert!(AgePyramid::new(vec![1.0, f64::NAN, 1.0], vec![1.0; 3], 5, "x").is_err());
        assert!(AgePyramid::new(vec![1.0; 3], vec![1.0; 3], 0, "x").is_err());
        assert!(AgePyramid::new(vec![0.0; 3], vec![0.0; 3], 5, "x").is_ok());
    }

    #[test]
    fn schedule_validation() {
        assert!(VitalSchedule::new(vec![0.0; 3], vec![1.1, 0.9, 0.9], vec![0.0; 3]).is_err());
        assert!(VitalSchedule::new(vec![0.0; 3], vec![-0.1, 0.9, 0.9], vec![0.0; 3]).is_err());
        assert!(VitalSchedule::new(vec![-1.0, 0.0, 0.0], vec![0.9; 3], vec![0.0; 3]).is_err());
        assert!(VitalSchedule::new(vec![0.0; 3], vec![0.9; 3], vec![f64::NAN, 0.0, 0.0]).is_err());
        assert!(VitalSchedule::new(vec![0.0; 2], vec![0.9; 2], vec![0.0; 2]).is_err());
        let s = schedule(&[0.0, 0.4, 0.0], &[0.9, 0.8, 0.5], &[0.0; 3]);
        assert!(s.check_reproductive_range(1, 1).is_ok());
        assert!(s.check_reproductive_range(2, 2).is_err());
    }

    #[test]
    fn leslie_direct_placement() {
        let s = schedule(&[0.0, 1.0, 0.0], &[0.9, 0.8, 0.5], &[0.0; 3]);
        let p = build_leslie_matrix(&s);
        let expect = [
            [0.0, 1.0, 0.0], //
            [0.9, 0.0, 0.0],
            [0.0, 0.8, 0.5],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(p[(i, j)], expect[i][j], "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn leslie_identity_survival_is_pure_age_shift() {
        let s = schedule(&[0.0; 4], &[1.0; 4], &[0.0; 4]);
        let p = build_leslie_matrix(&s);
        let n = nalgebra::DVector::from_vec(vec![10.0, 20.0, 30.0, 40.0]);
        let out = &p * &n;
        assert_eq!(out.as_slice(), &[0.0, 10.0, 20.0, 70.0]);
    }

    #[test]
    fn leslie_matches_accounting_identities_on_random_schedules() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for _ in 0..200 {
            let n = rng.random_range(3..=8);
            let b: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0).collect();
            let s: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let m = vec![0.0; n];
            let n0: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 1000.0).collect();
            let sched = schedule(&b, &s, &m);
            let p = build_leslie_matrix(&sched);
            let matrix_route = &p * nalgebra::DVector::from_vec(n0.clone());
            let oracle = identities(&b, &s, &m, &n0);
            for i in 0..n {
                let denom = oracle[i].abs().max(1.0);
                assert!(
                    (matrix_route[i] - oracle[i]).abs() / denom < 1e-12,
                    "row {i}: {} vs {}",
                    matrix_route[i],
                    oracle[i]
                );
            }
        }
    }

    #[test]
    fn one_period_shift_with_identity_survival() {
        let pyr = pyramid(&[10.0, 20.0, 30.0, 40.0], &[11.0, 21.0, 31.0, 41.0]);
        let sf = schedule(&[0.0; 4], &[1.0; 4], &[0.0; 4]);
        let sm = zero_male_schedule(4, &[1.0; 4]);
        let out = project_one_period(&pyr, &sf, &sm, 1.05).unwrap();
        assert_eq!(out.counts_female(), &[0.0, 10.0, 20.0, 70.0]);
        assert_eq!(out.counts_male(), &[0.0, 11.0, 21.0, 72.0]);
        assert_eq!(out.label(), "2015");
    }

    #[test]
    fn one_period_hand_computed_example() {
        // births 0.5*100 + migration 10 = 60; aging 0.9*100 = 90;
        // top group 0.8*100 + 0.5*100 = 130
        let pyr = female_only(&[100.0, 100.0, 100.0]);
        let sf = schedule(&[0.0, 0.5, 0.0], &[0.9, 0.8, 0.5], &[10.0, 0.0, 0.0]);
        let sm = zero_male_schedule(3, &[0.9, 0.8, 0.5]);
        let out = project_one_period(&pyr, &sf, &sm, 1.05).unwrap();
        assert_eq!(out.counts_female(), &[60.0, 90.0, 130.0]);
        // male first group = 50 surviving female births * 1.05
        assert_abs_diff_eq!(out.counts_male()[0], 52.5, epsilon = 1e-12);
    }

    #[test]
    fn matrix_route_agrees_with_projection_route() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.random_range(3..=9);
            let b: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let s: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let m: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 20.0).collect();
            let n0: Vec<f64> = (0..n).map(|_| 100.0 + rng.random::<f64>() * 900.0).collect();
            let sf = schedule(&b, &s, &m);
            let sm = zero_male_schedule(n, &s);
            let pyr = AgePyramid::new(n0.clone(), vec![0.0; n], 5, "2010").unwrap();
            let projected = project_one_period(&pyr, &sf, &sm, 1.05).unwrap();
            let p = build_leslie_matrix(&sf);
            let via_matrix = &p * nalgebra::DVector::from_vec(n0.clone());
            for i in 0..n {
                let expect = via_matrix[i] + m[i];
                let denom = expect.abs().max(1.0);
                assert!(
                    (projected.counts_female()[i] - expect).abs() / denom < 1e-12,
                    "group {i}"
                );
            }
        }
    }

    #[test]
    fn negative_counts_clamp_to_zero() {
        let pyr = female_only(&[100.0, 100.0, 100.0]);
        let sf = schedule(&[0.0; 3], &[0.9, 0.8, 0.5], &[0.0, -200.0, 0.0]);
        let sm = zero_male_schedule(3, &[0.9, 0.8, 0.5]);
        let out = project_one_period(&pyr, &sf, &sm, 1.05).unwrap();
        assert_eq!(out.counts_female()[1], 0.0);
    }

    #[test]
    fn male_schedule_with_births_is_rejected() {
        let pyr = pyramid(&[1.0; 3], &[1.0; 3]);
        let sf = schedule(&[0.0; 3], &[0.9; 3], &[0.0; 3]);
        let bad_male = schedule(&[0.0, 0.1, 0.0], &[0.9; 3], &[0.0; 3]);
        assert!(project_one_period(&pyr, &sf, &bad_male, 1.05).is_err());
    }

    #[test]
    fn horizon_one_equals_single_period() {
        let pyr = female_only(&[100.0, 100.0, 100.0]);
        let sf = schedule(&[0.0, 0.5, 0.0], &[0.9, 0.8, 0.5], &[10.0, 0.0, 0.0]);
        let sm = zero_male_schedule(3, &[0.9, 0.8, 0.5]);
        let res = project_horizon(&pyr, &[(sf.clone(), sm.clone())], 1, 1.05).unwrap();
        assert_eq!(res.pyramids.len(), 2);
        assert_eq!(
            res.pyramids[1],
            project_one_period(&pyr, &sf, &sm, 1.05).unwrap()
        );
        assert_eq!(res.period_labels, vec!["2010", "2015"]);
    }

    #[test]
    fn two_period_chain_equals_manual_composition() {
        let pyr = female_only(&[80.0, 120.0, 60.0]);
        let s1f = schedule(&[0.0, 0.6, 0.1], &[0.95, 0.85, 0.4], &[5.0, -2.0, 1.0]);
        let s2f = schedule(&[0.1, 0.4, 0.0], &[0.9, 0.8, 0.5], &[0.0, 3.0, 0.0]);
        let sm = zero_male_schedule(3, &[0.9, 0.8, 0.5]);
        let chained = project_horizon(
            &pyr,
            &[(s1f.clone(), sm.clone()), (s2f.clone(), sm.clone())],
            2,
            1.05,
        )
        .unwrap();
        let step1 = project_one_period(&pyr, &s1f, &sm, 1.05).unwrap();
        let step2 = project_one_period(&step1, &s2f, &sm, 1.05).unwrap();
        assert_eq!(chained.pyramids[2], step2);
    }

    #[test]
    fn horizon_errors() {
        let pyr = female_only(&[1.0; 3]);
        let sf = schedule(&[0.0; 3], &[0.9; 3], &[0.0; 3]);
        let sm = zero_male_schedule(3, &[0.9; 3]);
        assert!(project_horizon(&pyr, &[(sf.clone(), sm.clone())], 0, 1.05).is_err());
        assert!(project_horizon(&pyr, &[(sf, sm)], 2, 1.05).is_err());
    }

    #[test]
    fn support_ratio_uniform_pyramid() {
        // ages 0-99 in 20 groups: nine groups in 20-64, seven in 65+
        let pyr = pyramid(&[1.0; 20], &[1.0; 20]);
        assert_abs_diff_eq!(
            potential_support_ratio(&pyr).unwrap(),
            9.0 / 7.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn support_ratio_undefined_when_no_older_population() {
        let mut f = vec![0.0; 20];
        f[0] = 100.0;
        let pyr = female_only(&f);
        assert!(matches!(
            potential_support_ratio(&pyr),
            Err(Error::Undefined(_))
        ));
    }

    #[test]
    fn support_ratio_matches_direct_summation() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let f: Vec<f64> = (0..21).map(|_| rng.random::<f64>() * 100.0).collect();
        let m: Vec<f64> = (0..21).map(|_| rng.random::<f64>() * 100.0).collect();
        let pyr = pyramid(&f, &m);
        let mut workers = 0.0;
        let mut older = 0.0;
        for i in 0..21 {
            let age = 5 * i;
            let c = f[i] + m[i];
            if (20..65).contains(&age) {
                workers += c;
            } else if age >= 65 {
                older += c;
            }
        }
        assert_abs_diff_eq!(
            potential_support_ratio(&pyr).unwrap(),
            workers / older,
            epsilon = 1e-12
        );
    }

    #[test]
    fn total_is_plain_sum() {
        let pyr = pyramid(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]);
        assert_eq!(total_population(&pyr), 21.0);
    }

    #[test]
    fn median_of_single_group_is_its_midpoint() {
        let pyr = pyramid(&[0.0, 0.0, 10.0, 0.0], &[0.0; 4]);
        assert_abs_diff_eq!(median_age(&pyr).unwrap(), 12.5, epsilon = 1e-12);
    }

    #[test]
    fn median_errors_on_empty_pyramid() {
        let pyr = pyramid(&[0.0; 3], &[0.0; 3]);
        assert!(matches!(median_age(&pyr), Err(Error::Undefined(_))));
    }

    #[test]
    fn median_matches_single_year_expansion_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.random_range(3..=21);
            let f: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 50.0).collect();
            let m: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 50.0).collect();
            let pyr = pyramid(&f, &m);
            let med = median_age(&pyr).unwrap();
            assert!(med >= 0.0 && med <= 5.0 * n as f64);

            // oracle: spread each group uniformly over its five single years
            let total = total_population(&pyr);
            let half = total / 2.0;
            let mut cum = 0.0;
            let mut oracle = None;
            'outer: for i in 0..n {
                let per_year = (f[i] + m[i]) / 5.0;
                for y in 0..5 {
                    if cum + per_year >= half && per_year > 0.0 {
                        oracle = Some((5 * i + y) as f64 + (half - cum) / per_year);
                        break 'outer;
                    }
                    cum += per_year;
                }
            }
            assert_abs_diff_eq!(med, oracle.unwrap(), epsilon = 1e-9);
        }
    }
}
