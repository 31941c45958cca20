//! Total fertility rate models.
//!
//! A country's TFR history is split into three phases: high pre-decline
//! fertility (I), the fertility transition (II), and the post-transition
//! recovery toward replacement level (III). Phase II decrements follow a
//! double-logistic curve with a hierarchical prior across countries;
//! Phase III follows an AR(1) process, either with a fixed asymptote of 2.1
//! or with country-specific asymptotes under a hierarchical prior.
//! A deterministic rule-based baseline (with High/Low variants) is provided
//! for comparison runs.

mod phase2;
mod phase3;
mod series;
mod simulate;
mod un;

pub use phase2::{
    phase2_decrement, phase2_error_sd, phase2_loglik, Phase2ErrorSd, Phase2Params, Phase2Prior,
    Phase2World, WIDTH_FLOOR,
};
pub use phase3::{
    phase3_fixed_loglik, phase3_hier_loglik, phase3_hier_transition_loglik, phase3_mle,
    Phase3Fixed, Phase3Hier, Phase3HierPrior, Phase3MleFit, REPLACEMENT_TFR,
};
pub use series::{classify_phases, Phase, PhaseRules, TfrSeries};
pub use simulate::{simulate_tfr_trajectory, TfrSimConfig};
pub use un::{un_deterministic_tfr, UnDeclinePattern, UnTfrVariants};
