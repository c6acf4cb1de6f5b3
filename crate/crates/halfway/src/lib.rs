//! Law of one-dimensional Brownian motion observed on its way to zero.
//!
//! A Brownian motion started at `x > 0` hits zero at the random time
//! `tau = inf{t >= 0 : B_t = 0}`. Observing the path at the intermediate
//! time `u * tau` for a fixed fraction `u` in (0, 1) yields a heavy-tailed
//! distribution on the positive half line with an explicit rational
//! density. This crate provides:
//!
//! * [`analytic`] — closed-form densities, CDFs, tail constants and
//!   quantiles for the hitting time, the killed transition, the halfway
//!   distribution and the excursion marginal;
//! * [`quadrature`] — adaptive Gauss–Kronrod integration on finite and
//!   semi-infinite intervals, plus two independent integral
//!   representations of the halfway density used as cross-checking
//!   oracles;
//! * [`samplers`] — reproducible stream-seeded sampling: exact draws of
//!   the hitting time, the excursion marginal and the halfway value, and
//!   an Euler path simulator with Brownian-bridge crossing correction;
//! * [`stats`] — empirical CDFs, Kolmogorov–Smirnov statistics and
//!   quantiles for validating samplers against analytic laws.
//!
//! All numeric routines are pure functions of their arguments and safe to
//! call from any number of threads. Samplers are deterministic functions
//! of an explicit [`samplers::RngStream`], never of global state.

pub mod analytic;
pub mod error;
pub mod quadrature;
pub mod samplers;
pub mod special;
pub mod stats;

pub use analytic::{DensityValue, HalfwayParams};
pub use error::{Error, Result};
pub use quadrature::QuadResult;
pub use samplers::{PathConfig, PathOutcome, RngStream, SampleBatch, SampleMethod};
pub use stats::KsReport;
