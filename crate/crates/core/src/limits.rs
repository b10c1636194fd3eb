//! Limiting mean and variance constants of the squared-Hellinger functional,
//! assembled from a truth model's analytic bundle and the simulated argmax
//! constants.

use crate::chernoff::{ChernoffConfig, ChernoffEstimates, SCHEMA};
use crate::error::{Error, Result};
use crate::models::TruthModel;
use crate::quad::{GaussLegendre, DEFAULT_DEGREE};
use serde::{Deserialize, Serialize};
use std::cell::Cell;

const PANELS: usize = 128;

/// Where a set of limit constants came from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub model: String,
    pub chernoff_config: ChernoffConfig,
}

/// The four constants of the Hellinger limit law for one model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitConstants {
    pub schema: String,
    /// Centering of the scaled squared-Hellinger functional.
    pub mu_sq: f64,
    /// Variance of the scaled squared-Hellinger functional.
    pub sigma_sq: f64,
    /// Centering of the scaled Hellinger distance: sqrt(mu_sq / 2).
    pub mu_tilde: f64,
    /// Variance of the scaled Hellinger distance: sigma_sq / (8 mu_sq).
    pub sigma_tilde_sq: f64,
    pub provenance: Provenance,
}

fn integrate_checked(truth: &TruthModel, panels: usize, f: impl Fn(f64) -> f64) -> Result<f64> {
    if !(truth.lambda_min() > 0.0) {
        return Err(Error::ModelInvalid {
            failures: vec![format!(
                "lambda(1) = {} makes the limit-constant integrand blow up",
                truth.lambda_min()
            )],
        });
    }
    let rule = GaussLegendre::new(DEFAULT_DEGREE);
    let bad = Cell::new(false);
    let value = rule.integrate_composite(0.0, 1.0, panels, |t| {
        let v = f(t);
        if !v.is_finite() {
            bad.set(true);
        }
        v
    });
    if bad.get() || !value.is_finite() {
        return Err(Error::ModelInvalid {
            failures: vec![format!(
                "non-finite limit-constant integrand for model {}",
                truth.id()
            )],
        });
    }
    Ok(value)
}

/// mu^2 = m2 * int |lambda' L'|^{2/3} / (2^{2/3} lambda) dt.
pub fn mu_squared(truth: &TruthModel, m2: f64) -> Result<f64> {
    mu_squared_with_panels(truth, m2, PANELS)
}

pub fn mu_squared_with_panels(truth: &TruthModel, m2: f64, panels: usize) -> Result<f64> {
    if !(m2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "m2 = {m2} must be positive"
        )));
    }
    let c = 2.0f64.powf(-2.0 / 3.0);
    let integral = integrate_checked(truth, panels, |t| {
        let num = (truth.lambda_prime(t) * truth.l_prime(t))
            .abs()
            .powf(2.0 / 3.0);
        c * num / truth.lambda(t)
    })?;
    Ok(m2 * integral)
}

/// sigma^2 = 2^{1/3} k2 * int |lambda' L'|^{2/3} L' / lambda^2 dt.
pub fn sigma_squared(truth: &TruthModel, k2: f64) -> Result<f64> {
    sigma_squared_with_panels(truth, k2, PANELS)
}

pub fn sigma_squared_with_panels(truth: &TruthModel, k2: f64, panels: usize) -> Result<f64> {
    if !(k2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "k2 = {k2} must be positive"
        )));
    }
    let integral = integrate_checked(truth, panels, |t| {
        let lp = truth.l_prime(t);
        let num = (truth.lambda_prime(t) * lp).abs().powf(2.0 / 3.0) * lp;
        let lam = truth.lambda(t);
        num / (lam * lam)
    })?;
    Ok(2.0f64.powf(1.0 / 3.0) * k2 * integral)
}

/// Assemble all four constants for a model from simulated argmax constants.
pub fn hellinger_limits(truth: &TruthModel, est: &ChernoffEstimates) -> Result<LimitConstants> {
    let mu_sq = mu_squared(truth, est.m2)?;
    let sigma_sq = sigma_squared(truth, est.k2)?;
    Ok(LimitConstants {
        schema: SCHEMA.to_string(),
        mu_sq,
        sigma_sq,
        mu_tilde: (mu_sq / 2.0).sqrt(),
        sigma_tilde_sq: sigma_sq / (8.0 * mu_sq),
        provenance: Provenance {
            model: truth.id().to_string(),
            chernoff_config: est.config.clone(),
        },
    })
}

impl LimitConstants {
    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        std::fs::write(path, bytes)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fake_constants(m2: f64, k2: f64) -> ChernoffEstimates {
        ChernoffEstimates {
            schema: SCHEMA.to_string(),
            m2,
            m2_se: 0.0,
            k2,
            k2_se: 0.0,
            cov_curve: vec![(0.0, 1.0), (8.0, 0.0)],
            cov_amax_se: 1.0,
            boundary_hit_fraction: 0.0,
            config: ChernoffConfig::default(),
        }
    }

    /// (3/2)(1.5^{2/3} - 0.5^{2/3}), the antiderivative of lambda^{-1/3} for
    /// the linear density.
    fn linear_density_integral() -> f64 {
        1.5 * (1.5f64.powf(2.0 / 3.0) - 0.5f64.powf(2.0 / 3.0))
    }

    #[test]
    fn mu_squared_matches_linear_density_closed_form() {
        for m2 in [1.0, 0.27, 2.5] {
            let got = mu_squared(&TruthModel::DensityLinear, m2).unwrap();
            let expect = m2 * 2.0f64.powf(-2.0 / 3.0) * linear_density_integral();
            assert!((got - expect).abs() < 1e-10, "m2 = {m2}: {got} vs {expect}");
        }
    }

    #[test]
    fn mu_squared_matches_linear_regression_closed_form() {
        let truth = TruthModel::RegressionLinear { noise_sd: 1.0 };
        let m2 = 0.83;
        let got = mu_squared(&truth, m2).unwrap();
        let expect = m2 * 2.0f64.powf(-2.0 / 3.0) * 3.0f64.ln();
        assert!((got - expect).abs() < 1e-10);
    }

    #[test]
    fn sigma_squared_matches_closed_forms() {
        let k2 = 0.41;
        let got = sigma_squared(&TruthModel::DensityLinear, k2).unwrap();
        let expect = 2.0f64.powf(1.0 / 3.0) * k2 * linear_density_integral();
        assert!((got - expect).abs() < 1e-10);

        let truth = TruthModel::RegressionLinear { noise_sd: 1.0 };
        let got = sigma_squared(&truth, k2).unwrap();
        let expect = 2.0f64.powf(1.0 / 3.0) * k2 * (2.0 - 2.0 / 3.0);
        assert!((got - expect).abs() < 1e-10);
    }

    #[test]
    fn constants_scale_linearly_in_their_inputs() {
        let m = TruthModel::DensityExp;
        let a = mu_squared(&m, 1.0).unwrap();
        let b = mu_squared(&m, 2.0).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-12);
        let a = sigma_squared(&m, 0.5).unwrap();
        let b = sigma_squared(&m, 1.5).unwrap();
        assert!((b - 3.0 * a).abs() < 1e-12);
    }

    #[test]
    fn derived_constants_satisfy_their_identities() {
        let lc = hellinger_limits(&TruthModel::DensityExp, &fake_constants(0.3, 0.12)).unwrap();
        assert!((lc.mu_tilde * lc.mu_tilde - lc.mu_sq / 2.0).abs() < 1e-12);
        assert!((lc.sigma_tilde_sq * 8.0 * lc.mu_sq - lc.sigma_sq).abs() < 1e-12);
        assert!(lc.mu_sq > 0.0 && lc.sigma_sq > 0.0 && lc.mu_tilde > 0.0);
    }

    #[test]
    fn density_models_share_a_lambda_free_variance() {
        let cs = fake_constants(0.29, 0.11);
        let expect = cs.k2 / (4.0 * cs.m2);
        for m in [TruthModel::DensityLinear, TruthModel::DensityExp] {
            let lc = hellinger_limits(&m, &cs).unwrap();
            assert!(
                (lc.sigma_tilde_sq - expect).abs() < 1e-9,
                "{}: {} vs {expect}",
                m.id(),
                lc.sigma_tilde_sq
            );
        }
    }

    #[test]
    fn panel_refinement_is_stable() {
        let m = TruthModel::HazardLinear;
        let a = mu_squared_with_panels(&m, 1.0, 128).unwrap();
        let b = mu_squared_with_panels(&m, 1.0, 256).unwrap();
        assert!(((a - b) / a).abs() < 1e-10);
        let a = sigma_squared_with_panels(&m, 1.0, 128).unwrap();
        let b = sigma_squared_with_panels(&m, 1.0, 256).unwrap();
        assert!(((a - b) / a).abs() < 1e-10);
    }

    #[test]
    fn vanishing_lambda_is_model_invalid() {
        let bad = TruthModel::DensityLinearWithIntercept { intercept: 1.0 };
        assert!(matches!(
            mu_squared(&bad, 1.0),
            Err(Error::ModelInvalid { .. })
        ));
    }

    #[test]
    fn nonpositive_inputs_are_rejected() {
        assert!(mu_squared(&TruthModel::DensityLinear, 0.0).is_err());
        assert!(sigma_squared(&TruthModel::DensityLinear, -1.0).is_err());
    }
}
