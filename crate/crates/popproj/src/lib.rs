//! Probabilistic population projection by country.
//!
//! The pipeline has three layers:
//!
//! * statistical models for the total fertility rate ([`tfr`]) and life
//!   expectancy at birth ([`e0`]), estimated by MCMC ([`mcmc`]) or maximum
//!   likelihood;
//! * posterior-predictive simulation of future TFR / e0 paths and their
//!   conversion to age-specific vital rates ([`traj`]);
//! * a deterministic cohort-component projection engine ([`demog`]) that
//!   turns vital rates into age pyramids and summary indicators.
//!
//! The [`io`] module ties the layers together behind a config file and the
//! `popproj` command-line tool (subcommands `estimate`, `project`,
//! `validate`, `diagnose`).

pub mod demog;
pub mod e0;
pub mod error;
pub mod io;
pub mod mcmc;
pub mod stats;
pub mod tfr;
pub mod traj;

pub use error::{Error, Result};
