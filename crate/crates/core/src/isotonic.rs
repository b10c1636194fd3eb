//! Least concave majorant / greatest convex minorant of step data, the
//! monotone slope estimator derived from them, and the inverse (argmax)
//! process.
//!
//! All functions here are pure and operate on immutable value types; they can
//! be shared freely across threads.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Relative tolerance under which a point is treated as lying on (and hence
/// below) a chord, so that near-collinear triples never produce zero-length
/// hull segments.
const COLLINEAR_RTOL: f64 = 1e-12;

/// One (t, y) evaluation point of a cumulative estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    pub t: f64,
    pub y: f64,
}

impl Knot {
    pub fn new(t: f64, y: f64) -> Self {
        Knot { t, y }
    }
}

/// Cadlag step function on [0, 1]: right-continuous with left limits, jumping
/// at each knot to the knot's ordinate. Values before the first knot equal
/// `initial`. Monotonicity of the values is *not* required (noisy regression
/// primitives may dip); samplers that guarantee it say so.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    initial: f64,
    knots: Vec<Knot>,
}

impl StepFunction {
    pub fn new(initial: f64, knots: Vec<Knot>) -> Result<Self> {
        if !initial.is_finite() {
            return Err(Error::InvalidInput("non-finite initial value".into()));
        }
        for w in knots.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::InvalidInput(format!(
                    "knot abscissae must strictly increase ({} then {})",
                    w[0].t, w[1].t
                )));
            }
        }
        for k in &knots {
            if !(0.0..=1.0).contains(&k.t) || !k.y.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "knot ({}, {}) outside [0,1] x finite reals",
                    k.t, k.y
                )));
            }
        }
        Ok(StepFunction { initial, knots })
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    /// Right-continuous evaluation.
    pub fn value(&self, t: f64) -> f64 {
        match self.knots.partition_point(|k| k.t <= t) {
            0 => self.initial,
            i => self.knots[i - 1].y,
        }
    }

    /// Left limit at t (for t at or below the first knot this is `initial`).
    pub fn left_limit(&self, t: f64) -> f64 {
        match self.knots.partition_point(|k| k.t < t) {
            0 => self.initial,
            i => self.knots[i - 1].y,
        }
    }

    /// Upper envelope: max of the value and the left limit.
    pub fn upper(&self, t: f64) -> f64 {
        self.value(t).max(self.left_limit(t))
    }

    /// Whether the stored values (including `initial`) are nondecreasing.
    pub fn is_nondecreasing(&self) -> bool {
        let mut prev = self.initial;
        self.knots.iter().all(|k| {
            let ok = k.y >= prev;
            prev = k.y;
            ok
        })
    }

    /// Point set whose least concave majorant equals the LCM of the cadlag
    /// function: upper envelope at every knot, plus the endpoints 0 and 1.
    pub fn hull_points(&self) -> Vec<Knot> {
        let mut pts = Vec::with_capacity(self.knots.len() + 2);
        pts.push(Knot::new(0.0, self.upper(0.0)));
        for k in &self.knots {
            if k.t > 0.0 && k.t < 1.0 {
                pts.push(Knot::new(k.t, self.upper(k.t)));
            }
        }
        pts.push(Knot::new(1.0, self.upper(1.0)));
        pts
    }
}

/// Concave piecewise-linear function stored as its vertex list; slopes between
/// consecutive vertices strictly decrease (no collinear triples survive).
#[derive(Debug, Clone, PartialEq)]
pub struct ConcavePiecewiseLinear {
    vertices: Vec<Knot>,
}

impl ConcavePiecewiseLinear {
    pub fn vertices(&self) -> &[Knot] {
        &self.vertices
    }

    /// Slopes of the segments between consecutive vertices.
    pub fn slopes(&self) -> Vec<f64> {
        self.vertices
            .windows(2)
            .map(|w| (w[1].y - w[0].y) / (w[1].t - w[0].t))
            .collect()
    }

    /// Linear interpolation between vertices; clamps slope outside the span.
    pub fn value(&self, t: f64) -> f64 {
        let v = &self.vertices;
        let i = v.partition_point(|k| k.t <= t);
        if i == 0 {
            let s = (v[1].y - v[0].y) / (v[1].t - v[0].t);
            return v[0].y + s * (t - v[0].t);
        }
        if i == v.len() {
            let n = v.len();
            if (t - v[n - 1].t).abs() == 0.0 {
                return v[n - 1].y;
            }
            let s = (v[n - 1].y - v[n - 2].y) / (v[n - 1].t - v[n - 2].t);
            return v[n - 1].y + s * (t - v[n - 1].t);
        }
        let (a, b) = (v[i - 1], v[i]);
        a.y + (b.y - a.y) * (t - a.t) / (b.t - a.t)
    }
}

/// Monotonicity direction of the function being estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    NonIncreasing,
    NonDecreasing,
}

/// Piecewise-constant, left-continuous monotone estimate on [0, 1].
/// `cuts` runs from 0 to 1; `levels[i]` is the value on `(cuts[i], cuts[i+1]]`,
/// and the value at 0 is the first level (limit from the right).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneStepEstimate {
    cuts: Vec<f64>,
    levels: Vec<f64>,
    direction: Direction,
}

impl MonotoneStepEstimate {
    pub fn new(cuts: Vec<f64>, levels: Vec<f64>, direction: Direction) -> Result<Self> {
        if cuts.len() != levels.len() + 1 || levels.is_empty() {
            return Err(Error::InvalidInput(
                "need k+1 cuts for k >= 1 levels".into(),
            ));
        }
        if cuts[0] != 0.0 || *cuts.last().unwrap() != 1.0 {
            return Err(Error::InvalidInput("cuts must span [0, 1]".into()));
        }
        for w in cuts.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidInput("cuts must strictly increase".into()));
            }
        }
        let ok = match direction {
            Direction::NonIncreasing => levels.windows(2).all(|w| w[1] <= w[0]),
            Direction::NonDecreasing => levels.windows(2).all(|w| w[1] >= w[0]),
        };
        if !ok {
            return Err(Error::InvalidInput(format!(
                "levels violate declared {direction:?} direction"
            )));
        }
        Ok(MonotoneStepEstimate {
            cuts,
            levels,
            direction,
        })
    }

    /// Single-piece estimate, handy in tests and closed-form checks.
    pub fn constant(level: f64) -> Self {
        MonotoneStepEstimate {
            cuts: vec![0.0, 1.0],
            levels: vec![level],
            direction: Direction::NonIncreasing,
        }
    }

    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Left-continuous evaluation on (0, 1]; the value at 0 is the first
    /// level. Errors outside [0, 1].
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutOfRange(format!("t = {t} outside [0, 1]")));
        }
        if t == 0.0 {
            return Ok(self.levels[0]);
        }
        // smallest i with cuts[i] >= t; the level on (cuts[i-1], cuts[i]]
        let i = self.cuts.partition_point(|&c| c < t);
        Ok(self.levels[i - 1])
    }

    /// Primitive of the estimate sampled at the cuts: the step function whose
    /// Grenander fit reproduces this estimate.
    pub fn primitive(&self) -> StepFunction {
        let mut acc = 0.0;
        let mut knots = Vec::with_capacity(self.levels.len());
        for i in 0..self.levels.len() {
            acc += self.levels[i] * (self.cuts[i + 1] - self.cuts[i]);
            knots.push(Knot::new(self.cuts[i + 1], acc));
        }
        StepFunction::new(0.0, knots).expect("cuts are strictly increasing")
    }

    /// Total integral over [0, 1].
    pub fn integral(&self) -> f64 {
        self.levels
            .iter()
            .zip(self.cuts.windows(2))
            .map(|(l, w)| l * (w[1] - w[0]))
            .sum()
    }
}

fn check_points(points: &[Knot]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "hull needs at least 2 points, got {}",
            points.len()
        )));
    }
    for w in points.windows(2) {
        if !(w[1].t > w[0].t) {
            return Err(Error::InvalidInput(format!(
                "abscissae must strictly increase ({} then {})",
                w[0].t, w[1].t
            )));
        }
    }
    Ok(())
}

/// Least concave majorant of a point set: the pointwise-minimal concave
/// function dominating every point. Single-pass monotone chain (upper hull);
/// every returned vertex is an input point, and the first and last input
/// points are always vertices.
pub fn lcm(points: &[Knot]) -> Result<ConcavePiecewiseLinear> {
    check_points(points)?;
    let mut hull: Vec<Knot> = Vec::with_capacity(points.len().min(16));
    for &p in points {
        while hull.len() >= 2 {
            let s2 = hull[hull.len() - 2];
            let s1 = hull[hull.len() - 1];
            // s1 above the chord s2 -> p iff cross > 0; near-collinear points
            // count as below and are dropped.
            let lhs = (s1.y - s2.y) * (p.t - s2.t);
            let rhs = (p.y - s2.y) * (s1.t - s2.t);
            let tol = COLLINEAR_RTOL * lhs.abs().max(rhs.abs()).max(1e-300);
            if lhs - rhs > tol {
                break;
            }
            hull.pop();
        }
        hull.push(p);
    }
    Ok(ConcavePiecewiseLinear { vertices: hull })
}

/// Greatest convex minorant, by duality: gcm(P) = -lcm(-P).
pub fn gcm(points: &[Knot]) -> Result<ConcavePiecewiseLinear> {
    let negated: Vec<Knot> = points.iter().map(|k| Knot::new(k.t, -k.y)).collect();
    let mut hull = lcm(&negated)?;
    for v in &mut hull.vertices {
        v.y = -v.y;
    }
    Ok(hull)
}

/// Grenander-type estimator: left-hand slope of the LCM (non-increasing
/// target) or of the GCM (non-decreasing target) of the cumulative estimate,
/// with the value at 0 set to the limit from the right.
pub fn grenander_fit(
    lambda_n: &StepFunction,
    direction: Direction,
) -> Result<MonotoneStepEstimate> {
    let pts = lambda_n.hull_points();
    let hull = match direction {
        Direction::NonIncreasing => lcm(&pts)?,
        Direction::NonDecreasing => gcm(&pts)?,
    };
    let cuts: Vec<f64> = hull.vertices().iter().map(|v| v.t).collect();
    let levels = hull.slopes();
    if levels.is_empty() {
        return Err(Error::InvalidInput("degenerate hull".into()));
    }
    MonotoneStepEstimate::new(cuts, levels, direction)
}

/// Inverse process: the greatest maximizer over [0, 1] of the upper envelope
/// minus the linear drift `a * u`. Maximizers of the piecewise-linear
/// objective occur at knots or at the endpoints, so only those candidates are
/// scanned; ties break to the largest u.
pub fn inverse_estimator(lambda_n: &StepFunction, a: f64) -> f64 {
    let mut best_u = 0.0;
    let mut best = lambda_n.upper(0.0);
    let mut consider = |u: f64, v: f64| {
        let obj = v - a * u;
        if obj >= best {
            best = obj;
            best_u = u;
        }
    };
    for k in lambda_n.knots() {
        if k.t > 0.0 && k.t < 1.0 {
            consider(k.t, lambda_n.upper(k.t));
        }
    }
    consider(1.0, lambda_n.upper(1.0));
    best_u
}
