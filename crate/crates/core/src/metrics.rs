//! Loss functionals between a piecewise-constant monotone estimate and a
//! smooth (or staircase) reference curve.
//!
//! Each integral is evaluated piece by piece with a fixed Gauss-Legendre rule;
//! within a constancy piece the integrands are analytic, except for odd
//! absolute powers, whose kink at the sign change of (estimate - reference)
//! is located by bisection and used as an extra split point.

use crate::error::{Error, Result};
use crate::isotonic::MonotoneStepEstimate;
use crate::models::TruthModel;
use crate::quad::{GaussLegendre, DEFAULT_DEGREE};

/// Reference curve an estimate is scored against. Implemented by the analytic
/// truth models, by staircase estimates (for estimate-vs-estimate checks),
/// and by plain closures in tests.
pub trait Curve {
    fn eval(&self, t: f64) -> f64;
    /// Interior points of (0, 1) where the curve may be discontinuous.
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl Curve for TruthModel {
    fn eval(&self, t: f64) -> f64 {
        self.lambda(t)
    }
}

impl Curve for MonotoneStepEstimate {
    fn eval(&self, t: f64) -> f64 {
        self.evaluate(t.clamp(0.0, 1.0)).expect("t in [0,1]")
    }
    fn kinks(&self) -> Vec<f64> {
        let c = self.cuts();
        c[1..c.len() - 1].to_vec()
    }
}

impl<F: Fn(f64) -> f64> Curve for F {
    fn eval(&self, t: f64) -> f64 {
        self(t)
    }
}

/// Loss report for one (estimate, truth) pair: Hellinger distance, the
/// squared-Hellinger functional 2H^2, the weighted L2 functional
/// int (est - truth)^2 / (4 truth), the cubic functional int |est - truth|^3,
/// and the gap |2H^2 - weighted L2|.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LossReport {
    pub hellinger: f64,
    pub hellinger_sq_x2: f64,
    pub weighted_l2: f64,
    pub cubic: f64,
    pub gap: f64,
}

impl LossReport {
    pub fn compute<C: Curve>(est: &MonotoneStepEstimate, truth: &C) -> Result<LossReport> {
        let sq2 = hellinger_sq_x2(est, truth)?;
        let weighted = weighted_l2_sq(est, truth)?;
        let cubic = cubic_l3(est, truth)?;
        Ok(LossReport {
            hellinger: (0.5 * sq2).sqrt(),
            hellinger_sq_x2: sq2,
            weighted_l2: weighted,
            cubic,
            gap: (sq2 - weighted).abs(),
        })
    }
}

fn check_levels(est: &MonotoneStepEstimate) -> Result<()> {
    if let Some(l) = est.levels().iter().find(|l| **l < 0.0) {
        return Err(Error::InvalidEstimate(format!(
            "negative level {l} under a square-root loss"
        )));
    }
    Ok(())
}

/// Sorted piece boundaries: the estimate's cuts joined with the curve's kinks.
fn boundaries<C: Curve>(est: &MonotoneStepEstimate, truth: &C) -> Vec<f64> {
    let mut b: Vec<f64> = est.cuts().to_vec();
    b.extend(truth.kinks().into_iter().filter(|t| *t > 0.0 && *t < 1.0));
    b.sort_unstable_by(f64::total_cmp);
    b.dedup();
    b
}

/// Integrate `integrand(level, truth(t))` over [0, 1] piece by piece.
/// With `split_sign_change`, each piece is additionally split at the root of
/// (level - truth) when the difference changes sign inside it.
fn default_rule() -> &'static GaussLegendre {
    static RULE: std::sync::OnceLock<GaussLegendre> = std::sync::OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(DEFAULT_DEGREE))
}

fn integrate_pieces<C: Curve>(
    est: &MonotoneStepEstimate,
    truth: &C,
    split_sign_change: bool,
    integrand: impl Fn(f64, f64) -> f64,
) -> f64 {
    let rule = default_rule();
    let bounds = boundaries(est, truth);
    let mut acc = 0.0;
    for w in bounds.windows(2) {
        let (a, b) = (w[0], w[1]);
        let level = est.eval(b); // constant on (a, b]
        let mut segments = [(a, b), (0.0, 0.0)];
        let mut n_seg = 1;
        if split_sign_change {
            // probe just inside the piece so staircase references are read on
            // the correct side of their jump
            let ta = a + (b - a) * 1e-9;
            let da = level - truth.eval(ta);
            let db = level - truth.eval(b);
            if da * db < 0.0 {
                let root = bisect_root(|t| level - truth.eval(t), ta, b);
                segments = [(a, root), (root, b)];
                n_seg = 2;
            }
        }
        for &(lo, hi) in &segments[..n_seg] {
            if hi > lo {
                acc += rule.integrate(lo, hi, |t| integrand(level, truth.eval(t)));
            }
        }
    }
    acc
}

fn bisect_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (flo < 0.0) == (fm < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// The functional 2 H^2 = int (sqrt(est) - sqrt(truth))^2; smooth within
/// pieces, so no kink splitting is needed.
pub fn hellinger_sq_x2<C: Curve>(est: &MonotoneStepEstimate, truth: &C) -> Result<f64> {
    check_levels(est)?;
    Ok(integrate_pieces(est, truth, false, |l, y| {
        let d = l.sqrt() - y.sqrt();
        d * d
    }))
}

/// Hellinger distance H = sqrt( (1/2) int (sqrt(est) - sqrt(truth))^2 ).
pub fn hellinger<C: Curve>(est: &MonotoneStepEstimate, truth: &C) -> Result<f64> {
    Ok((0.5 * hellinger_sq_x2(est, truth)?).sqrt())
}

/// L_p distance ( int |est - truth|^p )^{1/p}, p >= 1.
pub fn lp_distance<C: Curve>(est: &MonotoneStepEstimate, truth: &C, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("p = {p} must be >= 1")));
    }
    let v = integrate_pieces(est, truth, true, |l, y| (l - y).abs().powf(p));
    Ok(v.powf(1.0 / p))
}

/// Weighted squared L2 distance int (est - truth)^2 / (4 truth).
pub fn weighted_l2_sq<C: Curve>(est: &MonotoneStepEstimate, truth: &C) -> Result<f64> {
    check_levels(est)?;
    Ok(integrate_pieces(est, truth, false, |l, y| {
        let d = l - y;
        d * d / (4.0 * y)
    }))
}

/// Cubic functional int |est - truth|^3, with pieces split at the sign change
/// of the difference.
pub fn cubic_l3<C: Curve>(est: &MonotoneStepEstimate, truth: &C) -> Result<f64> {
    check_levels(est)?;
    Ok(integrate_pieces(est, truth, true, |l, y| {
        (l - y).abs().powi(3)
    }))
}
