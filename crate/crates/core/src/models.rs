//! Built-in statistical models: analytic truth bundles (the monotone target,
//! its primitive, inverse, and time transform) plus the samplers that produce
//! the cumulative step estimate for each model family.

use crate::error::{Error, Result};
use crate::isotonic::{Knot, StepFunction};
use crate::quad::{GaussLegendre, DEFAULT_DEGREE};
use crate::rng::{derived_rng, Domain};
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

/// Which estimation problem a truth model belongs to; decides the sampler and
/// the shape of the time transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    Density,
    Poisson,
    Regression,
    Hazard,
}

/// Analytic bundle for one statistical model: the non-increasing target
/// `lambda` on [0, 1], its derivative and primitive, the inverse `g`, and the
/// time transform `l` with derivative `l_prime`. All built-ins have strictly
/// positive, strictly decreasing lambda with Lipschitz derivative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TruthModel {
    /// lambda(t) = 1.5 - t, a density on [0, 1].
    DensityLinear,
    /// lambda(t) = e^{-t} / (1 - e^{-1}), a density on [0, 1].
    DensityExp,
    /// lambda(t) = 2 - t, Poisson intensity with mass 1.5 on [0, 1].
    PoissonLinear,
    /// lambda(t) = 1.5 - t observed under additive Gaussian noise.
    RegressionLinear { noise_sd: f64 },
    /// Failure rate lambda(t) = 1.5 - t with uniform censoring on [0, 2].
    HazardLinear,
    /// Test support: density-kind linear target lambda(t) = intercept - t,
    /// generally unnormalized; lets tests exercise self-check failures and
    /// randomized truths. Not registered in the model registry.
    DensityLinearWithIntercept { intercept: f64 },
}

const EXP_NORM: f64 = 1.0 - 0.36787944117144233; // 1 - e^{-1}

impl TruthModel {
    pub fn by_id(id: &str) -> Option<TruthModel> {
        match id {
            "density-linear" => Some(TruthModel::DensityLinear),
            "density-exp" => Some(TruthModel::DensityExp),
            "poisson-linear" => Some(TruthModel::PoissonLinear),
            "regression-linear" => Some(TruthModel::RegressionLinear { noise_sd: 1.0 }),
            "hazard-linear" => Some(TruthModel::HazardLinear),
            _ => None,
        }
    }

    pub fn registry_ids() -> &'static [&'static str] {
        &[
            "density-linear",
            "density-exp",
            "poisson-linear",
            "regression-linear",
            "hazard-linear",
        ]
    }

    pub fn id(&self) -> &'static str {
        match self {
            TruthModel::DensityLinear => "density-linear",
            TruthModel::DensityExp => "density-exp",
            TruthModel::PoissonLinear => "poisson-linear",
            TruthModel::RegressionLinear { .. } => "regression-linear",
            TruthModel::HazardLinear => "hazard-linear",
            TruthModel::DensityLinearWithIntercept { .. } => "density-linear-custom",
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            TruthModel::DensityLinear
            | TruthModel::DensityExp
            | TruthModel::DensityLinearWithIntercept { .. } => ModelKind::Density,
            TruthModel::PoissonLinear => ModelKind::Poisson,
            TruthModel::RegressionLinear { .. } => ModelKind::Regression,
            TruthModel::HazardLinear => ModelKind::Hazard,
        }
    }

    /// The monotone target.
    pub fn lambda(&self, t: f64) -> f64 {
        match self {
            TruthModel::DensityLinear
            | TruthModel::RegressionLinear { .. }
            | TruthModel::HazardLinear => 1.5 - t,
            TruthModel::DensityExp => (-t).exp() / EXP_NORM,
            TruthModel::PoissonLinear => 2.0 - t,
            TruthModel::DensityLinearWithIntercept { intercept } => intercept - t,
        }
    }

    pub fn lambda_prime(&self, t: f64) -> f64 {
        match self {
            TruthModel::DensityExp => -(-t).exp() / EXP_NORM,
            _ => -1.0,
        }
    }

    /// Primitive of lambda with value 0 at 0 (cumulative hazard for the
    /// hazard kind).
    pub fn big_lambda(&self, t: f64) -> f64 {
        match self {
            TruthModel::DensityLinear
            | TruthModel::RegressionLinear { .. }
            | TruthModel::HazardLinear => 1.5 * t - 0.5 * t * t,
            TruthModel::DensityExp => (1.0 - (-t).exp()) / EXP_NORM,
            TruthModel::PoissonLinear => 2.0 * t - 0.5 * t * t,
            TruthModel::DensityLinearWithIntercept { intercept } => intercept * t - 0.5 * t * t,
        }
    }

    /// Inverse of lambda on [lambda(1), lambda(0)].
    pub fn g(&self, y: f64) -> f64 {
        match self {
            TruthModel::DensityLinear
            | TruthModel::RegressionLinear { .. }
            | TruthModel::HazardLinear => 1.5 - y,
            TruthModel::DensityExp => -(y * EXP_NORM).ln(),
            TruthModel::PoissonLinear => 2.0 - y,
            TruthModel::DensityLinearWithIntercept { intercept } => intercept - y,
        }
    }

    /// Time transform: the primitive for density/Poisson kinds, t * sd^2 for
    /// regression, and the censoring-weighted cumulative hazard integral for
    /// the hazard kind (computed by quadrature of the closed-form derivative).
    pub fn l(&self, t: f64) -> f64 {
        match self {
            TruthModel::RegressionLinear { noise_sd } => t * noise_sd * noise_sd,
            TruthModel::HazardLinear => {
                if t == 0.0 {
                    return 0.0;
                }
                let rule = GaussLegendre::new(DEFAULT_DEGREE);
                rule.integrate_composite(0.0, t, 32, |u| self.l_prime(u))
            }
            _ => self.big_lambda(t),
        }
    }

    pub fn l_prime(&self, t: f64) -> f64 {
        match self {
            TruthModel::RegressionLinear { noise_sd } => noise_sd * noise_sd,
            TruthModel::HazardLinear => {
                // lambda / ((1-F)(1-G)) with 1-F = exp(-cumulative hazard)
                self.lambda(t) * self.big_lambda(t).exp() / (1.0 - self.censor_cdf(t))
            }
            _ => self.lambda(t),
        }
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda(1.0)
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda(0.0)
    }

    /// Hoelder exponent of lambda'; all built-ins have Lipschitz derivative.
    pub fn holder_exponent(&self) -> f64 {
        1.0
    }

    pub fn noise_sd(&self) -> Option<f64> {
        match self {
            TruthModel::RegressionLinear { noise_sd } => Some(*noise_sd),
            _ => None,
        }
    }

    /// Failure-time CDF of the hazard model: 1 - exp(-H(t)) where H extends
    /// the cumulative hazard past 1 with the constant rate lambda(1).
    pub fn failure_cdf(&self, t: f64) -> f64 {
        debug_assert!(matches!(self, TruthModel::HazardLinear));
        if t <= 0.0 {
            return 0.0;
        }
        let h = if t <= 1.0 {
            self.big_lambda(t)
        } else {
            self.big_lambda(1.0) + self.lambda(1.0) * (t - 1.0)
        };
        1.0 - (-h).exp()
    }

    /// Censoring-time CDF of the hazard model: uniform on [0, 2].
    pub fn censor_cdf(&self, t: f64) -> f64 {
        debug_assert!(matches!(self, TruthModel::HazardLinear));
        (t / 2.0).clamp(0.0, 1.0)
    }
}

/// One sampling request; equal configs yield bit-identical step functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub model: TruthModel,
    pub n: usize,
    pub seed: u64,
}

impl SampleConfig {
    pub fn new(model: TruthModel, n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("sample size must be at least 1".into()));
        }
        Ok(SampleConfig { model, n, seed })
    }
}

/// Dispatch to the sampler matching the model kind.
pub fn sample(cfg: &SampleConfig) -> Result<StepFunction> {
    match cfg.model.kind() {
        ModelKind::Density => sample_density(cfg),
        ModelKind::Poisson => sample_poisson(cfg),
        ModelKind::Regression => sample_regression(cfg),
        ModelKind::Hazard => sample_censored(cfg),
    }
}

/// Solve big_lambda(x) = target on [0, 1] by bisection to 1e-12.
fn invert_primitive(model: &TruthModel, target: f64) -> f64 {
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if model.big_lambda(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Empirical distribution function of points in [0, 1] as a step function
/// with jumps 1/n, duplicates merged into a single knot.
pub fn empirical_cdf(xs: &[f64]) -> Result<StepFunction> {
    let n = xs.len();
    if n == 0 {
        return StepFunction::new(0.0, Vec::new());
    }
    let mut sorted = xs.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let mut knots: Vec<Knot> = Vec::with_capacity(n);
    let mut count = 0usize;
    let mut i = 0usize;
    while i < n {
        let x = sorted[i];
        while i < n && sorted[i] == x {
            count += 1;
            i += 1;
        }
        knots.push(Knot::new(x, count as f64 / n as f64));
    }
    StepFunction::new(0.0, knots)
}

/// Empirical CDF of an i.i.d. sample drawn by inverting the primitive at
/// uniform draws (numeric bisection).
pub fn sample_density(cfg: &SampleConfig) -> Result<StepFunction> {
    if cfg.model.kind() != ModelKind::Density {
        return Err(Error::ModelMisconfigured(format!(
            "sample_density needs a density model, got {:?}",
            cfg.model.kind()
        )));
    }
    let total = cfg.model.big_lambda(1.0);
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::ModelMisconfigured(format!(
            "density primitive must reach 1 at t = 1, got {total}"
        )));
    }
    let mut rng = derived_rng(cfg.seed, Domain::Sampler, 0);
    let xs: Vec<f64> = (0..cfg.n)
        .map(|_| invert_primitive(&cfg.model, rng.random::<f64>()))
        .collect();
    empirical_cdf(&xs)
}

/// Superposition of n unit-seeded inhomogeneous Poisson processes with mean
/// function big_lambda, scaled by 1/n. Event times come from unit-rate
/// exponential gaps mapped through the inverse primitive (time change).
pub fn sample_poisson(cfg: &SampleConfig) -> Result<StepFunction> {
    if cfg.model.kind() != ModelKind::Poisson {
        return Err(Error::ModelMisconfigured(format!(
            "sample_poisson needs a poisson model, got {:?}",
            cfg.model.kind()
        )));
    }
    let mut rng = derived_rng(cfg.seed, Domain::Sampler, 0);
    let horizon = cfg.model.big_lambda(1.0);
    let mut events: Vec<f64> = Vec::new();
    for _ in 0..cfg.n {
        let mut s = 0.0f64;
        loop {
            let gap: f64 = Exp1.sample(&mut rng);
            s += gap;
            if s > horizon {
                break;
            }
            events.push(invert_primitive(&cfg.model, s));
        }
    }
    events.sort_unstable_by(f64::total_cmp);
    let n = cfg.n as f64;
    let mut knots: Vec<Knot> = Vec::with_capacity(events.len());
    let mut count = 0usize;
    let mut i = 0usize;
    while i < events.len() {
        let x = events[i];
        while i < events.len() && events[i] == x {
            count += 1;
            i += 1;
        }
        knots.push(Knot::new(x, count as f64 / n));
    }
    StepFunction::new(0.0, knots)
}

/// Cumulative-sum primitive of the fixed-design regression sample
/// y_i = lambda(i/n) + noise; knots at i/n. The values may locally decrease,
/// which StepFunction permits.
pub fn sample_regression(cfg: &SampleConfig) -> Result<StepFunction> {
    let sd = match &cfg.model {
        TruthModel::RegressionLinear { noise_sd } => *noise_sd,
        _ => {
            return Err(Error::ModelMisconfigured(format!(
                "sample_regression needs a regression model, got {:?}",
                cfg.model.kind()
            )))
        }
    };
    let mut rng = derived_rng(cfg.seed, Domain::Sampler, 0);
    let n = cfg.n;
    let mut acc = 0.0f64;
    let mut knots = Vec::with_capacity(n);
    for i in 1..=n {
        let t = i as f64 / n as f64;
        let eps: f64 = StandardNormal.sample(&mut rng);
        acc += cfg.model.lambda(t) + sd * eps;
        knots.push(Knot::new(t, acc / n as f64));
    }
    StepFunction::new(0.0, knots)
}

/// Nelson-Aalen cumulative-hazard estimator of right-censored data,
/// restricted to [0, 1]. Jumps 1/(n-i+1) at the i-th order statistic when it
/// is an observed failure; ties put failures before censorings.
pub fn nelson_aalen(data: &[(f64, bool)]) -> Result<StepFunction> {
    let n = data.len();
    let mut sorted = data.to_vec();
    sorted.sort_unstable_by(|a, b| {
        a.0.total_cmp(&b.0).then_with(|| b.1.cmp(&a.1)) // failures first at ties
    });
    let mut knots: Vec<Knot> = Vec::new();
    let mut cum = 0.0f64;
    for (idx, &(x, observed)) in sorted.iter().enumerate() {
        if x > 1.0 {
            break;
        }
        if observed {
            cum += 1.0 / (n - idx) as f64;
            match knots.last_mut() {
                Some(k) if k.t == x => k.y = cum,
                _ => knots.push(Knot::new(x.max(0.0), cum)),
            }
        }
    }
    StepFunction::new(0.0, knots)
}

/// Draw right-censored survival data from the hazard model and return its
/// Nelson-Aalen estimator.
pub fn sample_censored(cfg: &SampleConfig) -> Result<StepFunction> {
    if cfg.model.kind() != ModelKind::Hazard {
        return Err(Error::ModelMisconfigured(format!(
            "sample_censored needs a hazard model, got {:?}",
            cfg.model.kind()
        )));
    }
    let f1 = cfg.model.failure_cdf(1.0);
    let g1 = cfg.model.censor_cdf(1.0);
    if f1 >= 1.0 - 1e-9 || g1 >= 1.0 - 1e-9 {
        return Err(Error::ModelMisconfigured(
            "failure and censoring CDFs must stay below 1 on [0, 1]".into(),
        ));
    }
    let mut rng = derived_rng(cfg.seed, Domain::Sampler, 0);
    let h1 = cfg.model.big_lambda(1.0);
    let lam1 = cfg.model.lambda(1.0);
    let mut data = Vec::with_capacity(cfg.n);
    for _ in 0..cfg.n {
        let e: f64 = Exp1.sample(&mut rng);
        // invert the cumulative hazard: bisection on [0,1], closed form beyond
        let t_fail = if e <= h1 {
            invert_primitive(&cfg.model, e)
        } else {
            1.0 + (e - h1) / lam1
        };
        let y: f64 = 2.0 * rng.random::<f64>();
        data.push((t_fail.min(y), t_fail <= y));
    }
    nelson_aalen(&data)
}

/// Numeric report of the analytic self-check.
#[derive(Debug, Clone, Serialize)]
pub struct SelfCheckReport {
    pub model: String,
    pub inf_abs_dlambda: f64,
    pub sup_abs_dlambda: f64,
    pub lambda_min: f64,
    pub max_inverse_err: f64,
    pub max_lprime_rel_err: f64,
    pub max_holder_ratio: f64,
}

const SELFCHECK_GRID: usize = 10_000;

/// Verify the analytic bundle on a dense grid: strict monotonicity, derivative
/// bounds, inverse identity, time-transform consistency by finite differences,
/// a bounded Hoelder ratio for lambda', and strict positivity at t = 1.
/// Any violated check yields a model-invalid error listing all failures.
pub fn truth_selfcheck(model: &TruthModel) -> Result<SelfCheckReport> {
    let m = SELFCHECK_GRID;
    let ts: Vec<f64> = (0..m).map(|j| j as f64 / (m - 1) as f64).collect();
    let lam: Vec<f64> = ts.iter().map(|&t| model.lambda(t)).collect();
    let dlam: Vec<f64> = ts.iter().map(|&t| model.lambda_prime(t)).collect();

    let mut failures: Vec<String> = Vec::new();

    if !lam.windows(2).all(|w| w[1] < w[0]) {
        failures.push("lambda is not strictly decreasing on the grid".into());
    }

    let inf_d = dlam.iter().fold(f64::INFINITY, |a, &d| a.min(d.abs()));
    let sup_d = dlam.iter().fold(0.0f64, |a, &d| a.max(d.abs()));
    if !(inf_d > 1e-12) {
        failures.push(format!("inf |lambda'| = {inf_d} is not strictly positive"));
    }
    if !sup_d.is_finite() {
        failures.push("sup |lambda'| is not finite".into());
    }

    let lambda_min = model.lambda(1.0);
    if !(lambda_min > 1e-12) {
        failures.push(format!("lambda(1) = {lambda_min} is not strictly positive"));
    }

    let mut max_inv = 0.0f64;
    for (&t, &l) in ts.iter().zip(&lam) {
        max_inv = max_inv.max((model.g(l) - t).abs());
    }
    if !(max_inv <= 1e-10) {
        failures.push(format!("g(lambda(t)) deviates from t by {max_inv}"));
    }

    let h = 1e-5;
    let mut max_lp = 0.0f64;
    for &t in &ts {
        if t < h || t > 1.0 - h {
            continue;
        }
        let fd = (model.l(t + h) - model.l(t - h)) / (2.0 * h);
        let lp = model.l_prime(t);
        let rel = (fd - lp).abs() / lp.abs().max(1e-12);
        max_lp = max_lp.max(rel);
        if lp <= 0.0 {
            failures.push(format!("L'({t}) = {lp} is not strictly positive"));
            break;
        }
    }
    if !(max_lp < 1e-6) {
        failures.push(format!(
            "L' disagrees with the finite difference of L (rel err {max_lp})"
        ));
    }

    let s = model.holder_exponent();
    let mut max_ratio = 0.0f64;
    for j in 0..m - 1 {
        let k = (j + 173).min(m - 1);
        for i in [j + 1, k] {
            if i == j {
                continue;
            }
            let num = (dlam[i] - dlam[j]).abs();
            let den = (ts[i] - ts[j]).abs().powf(s);
            max_ratio = max_ratio.max(num / den);
        }
    }
    if !(max_ratio < 1e6) {
        failures.push(format!("Hoelder ratio of lambda' unbounded ({max_ratio})"));
    }

    if model.kind() == ModelKind::Density {
        let total = model.big_lambda(1.0);
        if (total - 1.0).abs() > 1e-9 {
            failures.push(format!("density primitive reaches {total} at 1, not 1"));
        }
    }

    if failures.is_empty() {
        Ok(SelfCheckReport {
            model: model.id().to_string(),
            inf_abs_dlambda: inf_d,
            sup_abs_dlambda: sup_d,
            lambda_min,
            max_inverse_err: max_inv,
            max_lprime_rel_err: max_lp,
            max_holder_ratio: max_ratio,
        })
    } else {
        Err(Error::ModelInvalid { failures })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_round_trip() {
        for id in TruthModel::registry_ids() {
            let m = TruthModel::by_id(id).unwrap();
            assert_eq!(&m.id(), id);
        }
        assert!(TruthModel::by_id("no-such-model").is_none());
    }

    #[test]
    fn selfcheck_passes_for_builtins() {
        for id in TruthModel::registry_ids() {
            let m = TruthModel::by_id(id).unwrap();
            let report = truth_selfcheck(&m).unwrap_or_else(|e| panic!("{id}: {e}"));
            assert!(report.lambda_min > 0.0);
        }
    }

    #[test]
    fn selfcheck_reports_linear_derivative_bounds() {
        let r = truth_selfcheck(&TruthModel::DensityLinear).unwrap();
        assert!((r.inf_abs_dlambda - 1.0).abs() < 1e-12);
        assert!((r.sup_abs_dlambda - 1.0).abs() < 1e-12);
    }

    #[test]
    fn selfcheck_exp_derivative_infimum() {
        let r = truth_selfcheck(&TruthModel::DensityExp).unwrap();
        let expected = (-1.0f64).exp() / EXP_NORM;
        assert!((r.inf_abs_dlambda - expected).abs() < 1e-9);
    }

    #[test]
    fn selfcheck_rejects_vanishing_lambda() {
        let bad = TruthModel::DensityLinearWithIntercept { intercept: 1.0 };
        match truth_selfcheck(&bad) {
            Err(Error::ModelInvalid { failures }) => {
                assert!(failures.iter().any(|f| f.contains("lambda(1)")));
            }
            other => panic!("expected model-invalid, got {other:?}"),
        }
    }

    #[test]
    fn empirical_cdf_merges_duplicates() {
        let sf = empirical_cdf(&[0.2, 0.2, 0.6]).unwrap();
        let k = sf.knots();
        assert_eq!(k.len(), 2);
        assert_eq!(k[0].t, 0.2);
        assert!((k[0].y - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(k[1].t, 0.6);
        assert_eq!(k[1].y, 1.0);
    }

    #[test]
    fn density_sample_reaches_one_exactly() {
        let cfg = SampleConfig::new(TruthModel::DensityLinear, 257, 11).unwrap();
        let sf = sample_density(&cfg).unwrap();
        assert_eq!(sf.value(1.0), 1.0);
        assert!(sf.is_nondecreasing());
    }

    #[test]
    fn density_sampler_rejects_unnormalized_model() {
        let cfg = SampleConfig::new(
            TruthModel::DensityLinearWithIntercept { intercept: 2.0 },
            10,
            0,
        )
        .unwrap();
        assert!(matches!(
            sample_density(&cfg),
            Err(Error::ModelMisconfigured(_))
        ));
    }

    #[test]
    fn density_sampler_rejects_wrong_kind() {
        let cfg = SampleConfig::new(TruthModel::PoissonLinear, 10, 0).unwrap();
        assert!(sample_density(&cfg).is_err());
    }

    #[test]
    fn poisson_jumps_are_multiples_of_one_over_n() {
        let cfg = SampleConfig::new(TruthModel::PoissonLinear, 50, 3).unwrap();
        let sf = sample_poisson(&cfg).unwrap();
        assert!(sf.is_nondecreasing());
        let mut prev = 0.0;
        for k in sf.knots() {
            let jump = k.y - prev;
            assert!((jump * 50.0 - (jump * 50.0).round()).abs() < 1e-9);
            assert!(jump >= 1.0 / 50.0 - 1e-12);
            prev = k.y;
        }
    }

    #[test]
    fn regression_cumsum_hand_values_without_noise() {
        let cfg = SampleConfig::new(TruthModel::RegressionLinear { noise_sd: 0.0 }, 4, 9).unwrap();
        let sf = sample_regression(&cfg).unwrap();
        let expect = [(0.25, 0.3125), (0.5, 0.5625), (0.75, 0.75), (1.0, 0.875)];
        for (k, (t, y)) in sf.knots().iter().zip(expect) {
            assert_eq!(k.t, t);
            assert!((k.y - y).abs() < 1e-15);
        }
    }

    #[test]
    fn nelson_aalen_hand_example() {
        let sf = nelson_aalen(&[(0.3, true), (0.7, false)]).unwrap();
        assert_eq!(sf.knots().len(), 1);
        assert_eq!(sf.knots()[0].t, 0.3);
        assert_eq!(sf.knots()[0].y, 0.5);
    }

    #[test]
    fn nelson_aalen_without_censoring_uses_rank_weights() {
        // all observed: jumps 1/n, 1/(n-1), ... at the order statistics
        let sf = nelson_aalen(&[(0.5, true), (0.2, true), (0.8, true)]).unwrap();
        let k = sf.knots();
        assert_eq!(k.len(), 3);
        assert!((k[0].y - 1.0 / 3.0).abs() < 1e-15);
        assert!((k[1].y - (1.0 / 3.0 + 1.0 / 2.0)).abs() < 1e-15);
        assert!((k[2].y - (1.0 / 3.0 + 1.0 / 2.0 + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn nelson_aalen_ignores_events_past_one() {
        let sf = nelson_aalen(&[(0.4, true), (1.7, true)]).unwrap();
        assert_eq!(sf.knots().len(), 1);
        assert_eq!(sf.knots()[0].y, 0.5);
    }

    #[test]
    fn samplers_are_bit_reproducible() {
        for id in TruthModel::registry_ids() {
            let model = TruthModel::by_id(id).unwrap();
            let cfg = SampleConfig::new(model, 200, 77).unwrap();
            let a = sample(&cfg).unwrap();
            let b = sample(&cfg).unwrap();
            assert_eq!(a, b, "{id} not reproducible");
        }
    }

    #[test]
    fn hazard_time_transform_is_positive_and_increasing() {
        let m = TruthModel::HazardLinear;
        let mut prev = 0.0;
        for j in 1..=20 {
            let t = j as f64 / 20.0;
            let l = m.l(t);
            assert!(l > prev);
            prev = l;
        }
        // closed-form derivative at 0: lambda(0) * e^0 / (1 - 0) = 1.5
        assert!((m.l_prime(0.0) - 1.5).abs() < 1e-12);
    }
}
