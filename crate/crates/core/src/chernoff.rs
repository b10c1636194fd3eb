//! Monte Carlo estimation of the universal argmax constants: the second
//! moment of the two-sided Brownian argmax at the origin and the covariance
//! integral entering the limit variance.
//!
//! Each replicate simulates one Brownian path on a grid and locates, for every
//! drift offset `a`, the grid argmax of W(u) - (u - a)^2 over a window of
//! half-width `trunc` around `a`. Sharing the path across offsets gives the
//! joint law the covariance integral needs. Replicates run in parallel over
//! derived RNG streams and are reduced in index order, so results do not
//! depend on the thread count.

use crate::error::{Error, Result};
use crate::rng::{derived_rng, Domain};
use crate::stats::{covariance, ks_two_sample, mean, pairwise_sum, variance};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Discretization and replication parameters for the argmax simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChernoffConfig {
    /// Time-grid step of the simulated Brownian path.
    pub grid_step: f64,
    /// Half-width of each argmax search window.
    pub trunc: f64,
    /// Upper limit of the covariance integral over the offset a.
    pub a_max: f64,
    /// Spacing of the offset grid.
    pub a_step: f64,
    pub replicates: usize,
    pub seed: u64,
}

impl Default for ChernoffConfig {
    fn default() -> Self {
        ChernoffConfig {
            grid_step: 1e-3,
            trunc: 2.5,
            a_max: 8.0,
            a_step: 0.1,
            replicates: 100_000,
            seed: 0,
        }
    }
}

impl ChernoffConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.grid_step > 0.0) {
            return Err(Error::Config("grid step must be positive".into()));
        }
        if !(self.trunc >= 2.0) {
            return Err(Error::Config("truncation half-width must be >= 2".into()));
        }
        if !(self.a_max >= 4.0) {
            return Err(Error::Config("a_max must be >= 4".into()));
        }
        if !(self.a_step > 0.0) {
            return Err(Error::Config("a_step must be positive".into()));
        }
        if self.replicates == 0 {
            return Err(Error::Config("need at least one replicate".into()));
        }
        Ok(())
    }

    /// Offset grid 0, a_step, ..., a_max.
    pub fn a_grid(&self) -> Vec<f64> {
        let n = (self.a_max / self.a_step).round() as usize;
        (0..=n).map(|j| j as f64 * self.a_step).collect()
    }
}

/// A sampled two-sided Brownian path on the uniform grid
/// u_k = (first_index + k) * delta, anchored to W(0) = 0.
#[derive(Debug, Clone)]
pub struct BrownianPath {
    delta: f64,
    first_index: i64,
    values: Vec<f64>,
}

impl BrownianPath {
    /// Test hook: wrap explicit grid values.
    pub fn from_values(delta: f64, first_index: i64, values: Vec<f64>) -> Self {
        BrownianPath {
            delta,
            first_index,
            values,
        }
    }

    /// Simulate on a grid covering [lo, hi] (lo < 0 < hi) with independent
    /// N(0, delta) increments: forward partial sums for u > 0 first, then
    /// backward for u < 0, both anchored at W(0) = 0.
    pub fn simulate<R: Rng>(rng: &mut R, lo: f64, hi: f64, delta: f64) -> Self {
        assert!(lo < 0.0 && hi > 0.0 && delta > 0.0);
        let first_index = (lo / delta).floor() as i64;
        let last_index = (hi / delta).ceil() as i64;
        let zero = (-first_index) as usize;
        let n = (last_index - first_index + 1) as usize;
        let sd = delta.sqrt();
        let mut values = vec![0.0f64; n];
        for k in zero + 1..n {
            let z: f64 = StandardNormal.sample(rng);
            values[k] = values[k - 1] + sd * z;
        }
        for k in (0..zero).rev() {
            let z: f64 = StandardNormal.sample(rng);
            values[k] = values[k + 1] + sd * z;
        }
        BrownianPath {
            delta,
            first_index,
            values,
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn grid_point(&self, k: usize) -> f64 {
        (self.first_index + k as i64) as f64 * self.delta
    }

    pub fn lo(&self) -> f64 {
        self.grid_point(0)
    }

    pub fn hi(&self) -> f64 {
        self.grid_point(self.values.len() - 1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at_zero(&self) -> f64 {
        self.values[(-self.first_index) as usize]
    }
}

/// Grid argmax of W(u) - c (u - a)^2 over the window [a - half_width,
/// a + half_width]; ties break to the largest u. Errors if the path does not
/// cover the window.
pub fn argmax_parabola(path: &BrownianPath, a: f64, c: f64, half_width: f64) -> Result<f64> {
    assert!(c > 0.0, "curvature must be positive");
    let d = path.delta;
    let lo = a - half_width;
    let hi = a + half_width;
    // small index slack absorbs round-off in lo/delta
    if lo < path.lo() - 1e-9 * d.max(1.0) || hi > path.hi() + 1e-9 * d.max(1.0) {
        return Err(Error::InvalidWindow(format!(
            "path [{}, {}] does not cover window [{lo}, {hi}]",
            path.lo(),
            path.hi()
        )));
    }
    let k_lo = (((lo / d) - path.first_index as f64) - 1e-9)
        .ceil()
        .max(0.0) as usize;
    let k_hi =
        ((((hi / d) - path.first_index as f64) + 1e-9).floor() as usize).min(path.values.len() - 1);
    let mut best = f64::NEG_INFINITY;
    let mut best_u = a;
    for k in k_lo..=k_hi {
        let u = path.grid_point(k);
        let du = u - a;
        let obj = path.values[k] - c * du * du;
        if obj >= best {
            best = obj;
            best_u = u;
        }
    }
    Ok(best_u)
}

/// Raw per-replicate argmax samples: X(0) and X(a) - a on the offset grid.
#[derive(Debug, Clone)]
pub struct ChernoffSamples {
    pub config: ChernoffConfig,
    pub a_grid: Vec<f64>,
    /// X(0), one entry per replicate.
    pub x0: Vec<f64>,
    /// dev[j][r] = X(a_j) - a_j for replicate r.
    pub dev: Vec<Vec<f64>>,
    /// Replicates whose argmax landed within one grid step of a window edge.
    pub boundary_hits: usize,
}

/// Monte Carlo estimates of the argmax constants, with batching standard
/// errors and the covariance curve they came from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChernoffEstimates {
    pub schema: String,
    /// E |X(0)|^2.
    pub m2: f64,
    pub m2_se: f64,
    /// Integral of cov(|X(0)|^2, |X(a) - a|^2) over [0, a_max].
    pub k2: f64,
    pub k2_se: f64,
    /// (a, cov) pairs the k2 trapezoid integral is built from.
    pub cov_curve: Vec<(f64, f64)>,
    /// Standard error of the covariance at a_max (decay diagnostic).
    pub cov_amax_se: f64,
    /// Fraction of replicates with an argmax within one grid step of a
    /// window boundary.
    pub boundary_hit_fraction: f64,
    pub config: ChernoffConfig,
}

pub const SCHEMA: &str = "grenlab-v1";
const SE_BATCHES: usize = 100;

/// Simulate all replicates and keep the raw argmax samples.
pub fn simulate_samples(cfg: &ChernoffConfig) -> Result<ChernoffSamples> {
    cfg.validate()?;
    let a_grid = cfg.a_grid();
    let t = cfg.trunc;
    let rows: Vec<(f64, Vec<f64>, bool)> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = derived_rng(cfg.seed, Domain::ChernoffMain, r as u64);
            let path = BrownianPath::simulate(&mut rng, -t, cfg.a_max + t, cfg.grid_step);
            let mut hit = false;
            let mut near_edge = |u: f64, a: f64| {
                if (u - (a - t)).abs() <= cfg.grid_step || (u - (a + t)).abs() <= cfg.grid_step {
                    hit = true;
                }
            };
            let x0 = argmax_parabola(&path, 0.0, 1.0, t).expect("path covers window");
            near_edge(x0, 0.0);
            let dev: Vec<f64> = a_grid
                .iter()
                .map(|&a| {
                    let xa = argmax_parabola(&path, a, 1.0, t).expect("path covers window");
                    near_edge(xa, a);
                    xa - a
                })
                .collect();
            (x0, dev, hit)
        })
        .collect();

    let x0: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let mut dev = vec![vec![0.0f64; cfg.replicates]; a_grid.len()];
    for (r, row) in rows.iter().enumerate() {
        for (j, &d) in row.1.iter().enumerate() {
            dev[j][r] = d;
        }
    }
    let boundary_hits = rows.iter().filter(|r| r.2).count();
    Ok(ChernoffSamples {
        config: cfg.clone(),
        a_grid,
        x0,
        dev,
        boundary_hits,
    })
}

fn trapezoid(a_grid: &[f64], ys: &[f64]) -> f64 {
    let terms: Vec<f64> = a_grid
        .windows(2)
        .zip(ys.windows(2))
        .map(|(aw, yw)| 0.5 * (yw[0] + yw[1]) * (aw[1] - aw[0]))
        .collect();
    pairwise_sum(&terms)
}

impl ChernoffSamples {
    /// Point estimates over a replicate range (full pipeline: second moment,
    /// covariance curve, trapezoid integral).
    fn stats_on(&self, lo: usize, hi: usize) -> (f64, Vec<f64>, f64) {
        let x0sq: Vec<f64> = self.x0[lo..hi].iter().map(|x| x * x).collect();
        let m2 = mean(&x0sq);
        let covs: Vec<f64> = self
            .dev
            .iter()
            .map(|col| {
                let devsq: Vec<f64> = col[lo..hi].iter().map(|d| d * d).collect();
                covariance(&x0sq, &devsq)
            })
            .collect();
        let k2 = trapezoid(&self.a_grid, &covs);
        (m2, covs, k2)
    }

    /// Reduce the samples to the published estimates; batching over 100
    /// replicate blocks supplies the standard errors.
    pub fn estimates(&self) -> Result<ChernoffEstimates> {
        let r = self.x0.len();
        if r < SE_BATCHES {
            return Err(Error::InsufficientReplicates {
                needed: SE_BATCHES,
                got: r,
            });
        }
        let (m2, covs, k2) = self.stats_on(0, r);
        let mut m2_b = Vec::with_capacity(SE_BATCHES);
        let mut k2_b = Vec::with_capacity(SE_BATCHES);
        let mut cov_last_b = Vec::with_capacity(SE_BATCHES);
        for b in 0..SE_BATCHES {
            let lo = b * r / SE_BATCHES;
            let hi = (b + 1) * r / SE_BATCHES;
            let (m2x, covsx, k2x) = self.stats_on(lo, hi);
            m2_b.push(m2x);
            k2_b.push(k2x);
            cov_last_b.push(*covsx.last().unwrap());
        }
        let nb = SE_BATCHES as f64;
        let m2_se = (variance(&m2_b) / nb).sqrt();
        let k2_se = (variance(&k2_b) / nb).sqrt();
        let cov_amax_se = (variance(&cov_last_b) / nb).sqrt();
        Ok(ChernoffEstimates {
            schema: SCHEMA.to_string(),
            m2,
            m2_se,
            k2,
            k2_se,
            cov_curve: self.a_grid.iter().copied().zip(covs).collect(),
            cov_amax_se,
            boundary_hit_fraction: self.boundary_hits as f64 / r as f64,
            config: self.config.clone(),
        })
    }
}

/// One-call estimation of the argmax constants.
pub fn estimate_constants(cfg: &ChernoffConfig) -> Result<ChernoffEstimates> {
    simulate_samples(cfg)?.estimates()
}

impl ChernoffEstimates {
    /// Diagnostics the estimates are expected to satisfy; violations are
    /// returned as warnings rather than hard errors.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut w = Vec::new();
        if !(self.m2 > 0.0) {
            w.push(format!("m2 = {} is not positive", self.m2));
        }
        let tail = self.cov_curve.last().map(|p| p.1).unwrap_or(0.0);
        if tail.abs() > 3.0 * self.cov_amax_se {
            w.push(format!(
                "covariance at a_max has not decayed: {} vs se {}",
                tail, self.cov_amax_se
            ));
        }
        if self.boundary_hit_fraction > 1e-4 {
            w.push(format!(
                "window too small: boundary hit fraction {}",
                self.boundary_hit_fraction
            ));
        }
        w
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        std::fs::write(path, bytes)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let bytes = std::fs::read(path)
            .map_err(|e| Error::Config(format!("cannot read constants file {path:?}: {e}")))?;
        let est: ChernoffEstimates = serde_json::from_slice(&bytes)?;
        Ok(est)
    }
}

/// Distributional check of Brownian scaling: the argmax of W(u) - c u^2,
/// multiplied by c^{2/3}, has the law of X(0). Returns the two-sample KS
/// distance between a freshly simulated scaled sample and a reference X(0)
/// sample (independent streams of the same seed).
pub fn scaling_check(c: f64, cfg: &ChernoffConfig) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::InvalidParameter("curvature must be positive".into()));
    }
    cfg.validate()?;
    let t = cfg.trunc;
    let scale = c.powf(-2.0 / 3.0);
    let hw = t * scale;
    let scaled: Vec<f64> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = derived_rng(cfg.seed, Domain::ChernoffScaling, r as u64);
            let path = BrownianPath::simulate(&mut rng, -hw, hw, cfg.grid_step);
            let v = argmax_parabola(&path, 0.0, c, hw).expect("path covers window");
            v * c.powf(2.0 / 3.0)
        })
        .collect();
    let reference: Vec<f64> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = derived_rng(cfg.seed, Domain::ChernoffScalingRef, r as u64);
            let path = BrownianPath::simulate(&mut rng, -t, t, cfg.grid_step);
            argmax_parabola(&path, 0.0, 1.0, t).expect("path covers window")
        })
        .collect();
    Ok(ks_two_sample(&scaled, &reference))
}
