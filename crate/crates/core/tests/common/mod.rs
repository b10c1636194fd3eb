//! Shared test utilities: independent oracles and random input generators.
//! The oracles deliberately avoid the implementation paths they check
//! (O(n^3) chord enumeration instead of the monotone chain, adaptive Simpson
//! instead of fixed Gauss-Legendre).

#![allow(dead_code)]

use grenlab_core::{Direction, Knot, MonotoneStepEstimate, StepFunction};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Brute-force minimal concave majorant: for every pair of points whose chord
/// line dominates all points, take the pointwise infimum of those lines.
pub struct BruteForceLcm {
    points: Vec<Knot>,
    /// index pairs of dominating chords
    chords: Vec<(usize, usize)>,
}

impl BruteForceLcm {
    pub fn build(points: &[Knot]) -> Self {
        let n = points.len();
        let mut chords = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (points[i], points[j]);
                let slope = (b.y - a.y) / (b.t - a.t);
                let dominates = points.iter().all(|p| {
                    let line = a.y + slope * (p.t - a.t);
                    p.y <= line + 1e-12 * line.abs().max(1.0)
                });
                if dominates {
                    chords.push((i, j));
                }
            }
        }
        BruteForceLcm {
            points: points.to_vec(),
            chords,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        let mut best = f64::INFINITY;
        for &(i, j) in &self.chords {
            let (a, b) = (self.points[i], self.points[j]);
            let slope = (b.y - a.y) / (b.t - a.t);
            best = best.min(a.y + slope * (t - a.t));
        }
        best
    }
}

/// Adaptive Simpson quadrature with interval bisection, refined until the
/// local Richardson estimate meets the tolerance.
pub fn adaptive_quad(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        fm: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (left, flm) = simpson(f, a, fa, m, fm);
        let (right, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, flm, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, right, frm, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, fm, tol, 60)
}

/// Random strictly-increasing abscissae in [0, 1] including the endpoints.
pub fn random_cuts(rng: &mut ChaCha8Rng, interior: usize) -> Vec<f64> {
    let mut cuts = vec![0.0, 1.0];
    while cuts.len() < interior + 2 {
        let t: f64 = rng.random();
        if t > 1e-3 && t < 1.0 - 1e-3 && cuts.iter().all(|c| (c - t).abs() > 1e-6) {
            cuts.push(t);
        }
    }
    cuts.sort_unstable_by(f64::total_cmp);
    cuts
}

/// Random nonnegative non-increasing staircase on [0, 1].
pub fn random_staircase(rng: &mut ChaCha8Rng, max_pieces: usize) -> MonotoneStepEstimate {
    let pieces = rng.random_range(1..=max_pieces);
    let cuts = random_cuts(rng, pieces - 1);
    let mut levels: Vec<f64> = (0..pieces).map(|_| rng.random_range(0.05..3.0)).collect();
    levels.sort_unstable_by(|a, b| b.total_cmp(a));
    MonotoneStepEstimate::new(cuts, levels, Direction::NonIncreasing).unwrap()
}

/// Random nondecreasing cadlag step function with k jumps.
pub fn random_step_function(rng: &mut ChaCha8Rng, max_knots: usize) -> StepFunction {
    let k = rng.random_range(2..=max_knots);
    let cuts = random_cuts(rng, k);
    let mut acc = 0.0;
    let knots: Vec<Knot> = cuts[1..=k]
        .iter()
        .map(|&t| {
            acc += rng.random_range(0.0..0.5);
            Knot::new(t, acc)
        })
        .collect();
    StepFunction::new(0.0, knots).unwrap()
}

/// Random points with strictly increasing t, arbitrary y in [-1, 1].
pub fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Knot> {
    let cuts = random_cuts(rng, n - 2);
    cuts.iter()
        .map(|&t| Knot::new(t, rng.random_range(-1.0..1.0)))
        .collect()
}

/// Standard normal quantile by bisection on the CDF (test-only).
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    let (mut lo, mut hi) = (-12.0f64, 12.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if grenlab_core::normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
