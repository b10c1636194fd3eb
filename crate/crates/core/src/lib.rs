//! Estimation lab for monotone functions on [0, 1].
//!
//! The crate bundles everything needed to study Grenander-type slope
//! estimators and the distribution of their Hellinger loss:
//!
//! - [`isotonic`]: least concave majorant / greatest convex minorant of step
//!   data, the monotone slope estimator, and the inverse (argmax) process;
//! - [`models`]: analytic truth bundles and samplers for the density,
//!   Poisson, regression and censored-hazard models;
//! - [`metrics`]: piecewise Gauss-Legendre quadrature of the Hellinger, L_p,
//!   weighted-L2 and cubic loss functionals;
//! - [`chernoff`]: Monte Carlo estimation of the universal Brownian-argmax
//!   constants;
//! - [`limits`]: the limiting mean/variance constants for a given model;
//! - [`experiment`]: reproducible replicated experiments (CLT check, decay
//!   trends, variance constancy) with CSV/JSON emission.

pub mod chernoff;
pub mod error;
pub mod experiment;
pub mod isotonic;
pub mod limits;
pub mod metrics;
pub mod models;
pub mod quad;
pub mod rng;
pub mod stats;

pub use chernoff::{
    argmax_parabola, estimate_constants, scaling_check, BrownianPath, ChernoffConfig,
    ChernoffEstimates, ChernoffSamples,
};
pub use error::{Error, Result};
pub use experiment::{
    run_clt, run_lemma_decay, run_variance_constancy, ExperimentConfig, ExperimentKind,
    ExperimentRun, ReplicateRecord, SummaryStats, VarianceComparison,
};
pub use isotonic::{
    gcm, grenander_fit, inverse_estimator, lcm, ConcavePiecewiseLinear, Direction, Knot,
    MonotoneStepEstimate, StepFunction,
};
pub use limits::{hellinger_limits, mu_squared, sigma_squared, LimitConstants};
pub use metrics::{cubic_l3, hellinger, lp_distance, weighted_l2_sq, Curve, LossReport};
pub use models::{
    empirical_cdf, nelson_aalen, sample, sample_censored, sample_density, sample_poisson,
    sample_regression, truth_selfcheck, ModelKind, SampleConfig, SelfCheckReport, TruthModel,
};
pub use stats::{ks_normal, ks_two_sample, normal_cdf};
