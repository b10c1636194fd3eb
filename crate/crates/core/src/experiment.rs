//! Monte Carlo experiments over the sampling -> fit -> loss pipeline:
//! a central-limit check of the scaled Hellinger statistic against its
//! theoretical constants, decay checks of the cubic and approximation-gap
//! functionals, and a variance-constancy comparison across density models.
//!
//! Replicates draw from RNG streams derived from (seed, grid position,
//! replicate index) and are collected in index order, so output files are
//! byte-identical however many threads run.

use crate::chernoff::{ChernoffEstimates, SCHEMA};
use crate::error::{Error, Result};
use crate::isotonic::{grenander_fit, inverse_estimator, Direction, StepFunction};
use crate::limits::{hellinger_limits, LimitConstants};
use crate::metrics::LossReport;
use crate::models::{sample, ModelKind, SampleConfig, TruthModel};
use crate::rng::{derived_rng, derived_seed, Domain};
use crate::stats::{excess_kurtosis, ks_normal, mean, median, skewness, variance};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Clt,
    LemmaDecay,
    VarianceConstancy,
}

/// Configuration shared by the grid experiments.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n_grid: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(
        kind: ExperimentKind,
        n_grid: Vec<usize>,
        replicates: usize,
        seed: u64,
    ) -> Result<Self> {
        if n_grid.is_empty() {
            return Err(Error::Config("n grid must be nonempty".into()));
        }
        if !n_grid.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::Config("n grid must be strictly ascending".into()));
        }
        if replicates < 100 {
            return Err(Error::Config(format!(
                "need at least 100 replicates, got {replicates}"
            )));
        }
        Ok(ExperimentConfig {
            kind,
            n_grid,
            replicates,
            seed,
        })
    }
}

/// One fitted replicate, reduced to its loss statistics.
#[derive(Debug, Clone, Serialize)]
pub struct ReplicateRecord {
    pub model: String,
    pub n: usize,
    pub replicate: usize,
    /// Hellinger distance of the fit to the truth.
    pub h: f64,
    /// n^{1/6} (n^{1/3} H - mu_tilde); absent when no constants are supplied.
    pub scaled_stat: Option<f64>,
    /// n^{2/3} * 2 H^2.
    pub scaled_sq: f64,
    /// n^{5/6} * cubic functional.
    pub cubic_scaled: f64,
    /// n^{5/6} * |2 H^2 - weighted L2|.
    pub gap_scaled: f64,
}

/// Per-n distributional summary of the replicate records.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryStats {
    pub n: usize,
    pub replicates: usize,
    pub mean_scaled_sq: f64,
    pub var_scaled_sq: f64,
    pub mean_scaled_stat: Option<f64>,
    pub var_scaled_stat: Option<f64>,
    /// KS distance of scaled_stat / sigma_tilde to the standard normal.
    pub ks_standardized: Option<f64>,
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
    pub median_cubic_scaled: f64,
    pub median_gap_scaled: f64,
}

#[derive(Debug)]
pub struct ExperimentRun {
    pub records: Vec<ReplicateRecord>,
    pub summaries: Vec<SummaryStats>,
    /// Theoretical constants used for standardization, when any.
    pub constants: Option<LimitConstants>,
    pub warnings: Vec<String>,
}

/// Number of (t, a) pairs of the per-replicate switch-relation spot check.
const SWITCH_SPOT_CHECKS: usize = 3;

fn replicate_stats(
    model: &TruthModel,
    n: usize,
    seed: u64,
    grid_pos: usize,
    replicate: usize,
    standardize: Option<(f64, f64)>,
) -> Result<ReplicateRecord> {
    let stream = ((grid_pos as u64) << 40) | replicate as u64;
    let sample_seed = derived_seed(seed, Domain::Experiment, stream);
    let cfg = SampleConfig::new(model.clone(), n, sample_seed)?;
    let step = sample(&cfg)?;
    let fit = grenander_fit(&step, Direction::NonIncreasing)?;
    spot_check_switch_relation(&step, &fit, seed, stream);
    let loss = LossReport::compute(&fit, model)?;

    let nf = n as f64;
    let scaled_stat = standardize
        .map(|(mu_tilde, _)| nf.powf(1.0 / 6.0) * (nf.powf(1.0 / 3.0) * loss.hellinger - mu_tilde));
    Ok(ReplicateRecord {
        model: model.id().to_string(),
        n,
        replicate,
        h: loss.hellinger,
        scaled_stat,
        scaled_sq: nf.powf(2.0 / 3.0) * loss.hellinger_sq_x2,
        cubic_scaled: nf.powf(5.0 / 6.0) * loss.cubic,
        gap_scaled: nf.powf(5.0 / 6.0) * loss.gap,
    })
}

/// Cheap invariant guard run on every replicate: the slope estimate and the
/// inverse process must satisfy the switch relation at random (t, a) pairs.
fn spot_check_switch_relation(
    step: &StepFunction,
    fit: &crate::isotonic::MonotoneStepEstimate,
    seed: u64,
    stream: u64,
) {
    let mut rng = derived_rng(seed, Domain::Experiment, stream);
    let lo = fit.levels().last().copied().unwrap_or(0.0) - 0.5;
    let hi = fit.levels().first().copied().unwrap_or(1.0) + 0.5;
    for _ in 0..SWITCH_SPOT_CHECKS {
        let t: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
        let a = lo + (hi - lo) * rng.random::<f64>();
        let level = fit.evaluate(t).expect("t in (0, 1]");
        if level > a {
            let u = inverse_estimator(step, a);
            assert!(
                u >= t,
                "switch relation violated: level {level} > {a} but inverse {u} < {t}"
            );
        }
    }
}

fn run_grid(
    model: &TruthModel,
    cfg: &ExperimentConfig,
    standardize: Option<(f64, f64)>,
) -> Result<(Vec<ReplicateRecord>, Vec<SummaryStats>)> {
    let mut records = Vec::with_capacity(cfg.n_grid.len() * cfg.replicates);
    let mut summaries = Vec::with_capacity(cfg.n_grid.len());
    for (grid_pos, &n) in cfg.n_grid.iter().enumerate() {
        let batch: Result<Vec<ReplicateRecord>> = (0..cfg.replicates)
            .into_par_iter()
            .map(|r| replicate_stats(model, n, cfg.seed, grid_pos, r, standardize))
            .collect();
        let mut batch = batch?;
        batch.sort_by_key(|r| r.replicate);
        summaries.push(summarize(n, &batch, standardize)?);
        records.extend(batch);
    }
    Ok((records, summaries))
}

fn summarize(
    n: usize,
    records: &[ReplicateRecord],
    standardize: Option<(f64, f64)>,
) -> Result<SummaryStats> {
    let scaled_sq: Vec<f64> = records.iter().map(|r| r.scaled_sq).collect();
    let cubic: Vec<f64> = records.iter().map(|r| r.cubic_scaled).collect();
    let gap: Vec<f64> = records.iter().map(|r| r.gap_scaled).collect();
    let (mut mean_stat, mut var_stat, mut ks, mut skew, mut kurt) = (None, None, None, None, None);
    if let Some((_, sigma_tilde)) = standardize {
        let stats: Vec<f64> = records.iter().map(|r| r.scaled_stat.unwrap()).collect();
        let standardized: Vec<f64> = stats.iter().map(|s| s / sigma_tilde).collect();
        mean_stat = Some(mean(&stats));
        var_stat = Some(variance(&stats));
        ks = Some(ks_normal(&standardized)?);
        skew = Some(skewness(&standardized));
        kurt = Some(excess_kurtosis(&standardized));
    }
    Ok(SummaryStats {
        n,
        replicates: records.len(),
        mean_scaled_sq: mean(&scaled_sq),
        var_scaled_sq: variance(&scaled_sq),
        mean_scaled_stat: mean_stat,
        var_scaled_stat: var_stat,
        ks_standardized: ks,
        skewness: skew,
        kurtosis: kurt,
        median_cubic_scaled: median(&cubic),
        median_gap_scaled: median(&gap),
    })
}

/// Central-limit experiment: per n, R replicates of sample -> fit -> losses,
/// standardized with the theoretical constants derived from the supplied
/// argmax estimates.
pub fn run_clt(
    model: &TruthModel,
    constants: &ChernoffEstimates,
    cfg: &ExperimentConfig,
) -> Result<ExperimentRun> {
    let limits = hellinger_limits(model, constants)?;
    let standardize = Some((limits.mu_tilde, limits.sigma_tilde_sq.sqrt()));
    let warnings = constants.diagnostics();
    let (records, summaries) = run_grid(model, cfg, standardize)?;
    Ok(ExperimentRun {
        records,
        summaries,
        constants: Some(limits),
        warnings,
    })
}

/// Decay experiment for the cubic and gap functionals; needs no constants.
pub fn run_lemma_decay(model: &TruthModel, cfg: &ExperimentConfig) -> Result<ExperimentRun> {
    let (records, summaries) = run_grid(model, cfg, None)?;
    Ok(ExperimentRun {
        records,
        summaries,
        constants: None,
        warnings: Vec::new(),
    })
}

/// Variance-constancy comparison between two density models.
#[derive(Debug, Clone, Serialize)]
pub struct VarianceComparison {
    pub schema: String,
    pub model_a: String,
    pub model_b: String,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    /// Empirical variance of n^{1/3} H per model.
    pub var_a: f64,
    pub var_b: f64,
    pub ratio: f64,
    pub bootstrap_resamples: usize,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Theoretical limit variances (equal for density models).
    pub sigma_tilde_sq_a: f64,
    pub sigma_tilde_sq_b: f64,
    pub warnings: Vec<String>,
}

const BOOTSTRAP_RESAMPLES: usize = 1000;

pub fn run_variance_constancy(
    model_a: &TruthModel,
    model_b: &TruthModel,
    n: usize,
    replicates: usize,
    seed: u64,
    constants: &ChernoffEstimates,
) -> Result<VarianceComparison> {
    for m in [model_a, model_b] {
        if m.kind() != ModelKind::Density {
            return Err(Error::Config(format!(
                "variance-constancy experiment needs density models, {} is {:?}",
                m.id(),
                m.kind()
            )));
        }
    }
    if replicates < 100 {
        return Err(Error::Config(format!(
            "need at least 100 replicates, got {replicates}"
        )));
    }
    let scale = (n as f64).powf(1.0 / 3.0);
    let draws = |model: &TruthModel, side: usize| -> Result<Vec<f64>> {
        (0..replicates)
            .into_par_iter()
            .map(|r| {
                let rec = replicate_stats(
                    model, n, seed, side, // grid position doubles as the side tag
                    r, None,
                )?;
                Ok(scale * rec.h)
            })
            .collect()
    };
    let ha = draws(model_a, 0)?;
    let hb = draws(model_b, 1)?;
    let var_a = variance(&ha);
    let var_b = variance(&hb);

    let mut rng = derived_rng(seed, Domain::Bootstrap, 0);
    let mut ratios = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    let resample_var = |xs: &[f64], rng: &mut rand_chacha::ChaCha8Rng| {
        let m = xs.len();
        let picked: Vec<f64> = (0..m).map(|_| xs[rng.random_range(0..m)]).collect();
        variance(&picked)
    };
    for _ in 0..BOOTSTRAP_RESAMPLES {
        let va = resample_var(&ha, &mut rng);
        let vb = resample_var(&hb, &mut rng);
        ratios.push(va / vb);
    }
    ratios.sort_unstable_by(f64::total_cmp);
    let b = BOOTSTRAP_RESAMPLES as f64;
    let ci_lo = ratios[((0.025 * b).ceil() as usize - 1).min(BOOTSTRAP_RESAMPLES - 1)];
    let ci_hi = ratios[((0.975 * b).ceil() as usize - 1).min(BOOTSTRAP_RESAMPLES - 1)];

    let la = hellinger_limits(model_a, constants)?;
    let lb = hellinger_limits(model_b, constants)?;
    Ok(VarianceComparison {
        schema: SCHEMA.to_string(),
        model_a: model_a.id().to_string(),
        model_b: model_b.id().to_string(),
        n,
        replicates,
        seed,
        var_a,
        var_b,
        ratio: var_a / var_b,
        bootstrap_resamples: BOOTSTRAP_RESAMPLES,
        ci_lo,
        ci_hi,
        sigma_tilde_sq_a: la.sigma_tilde_sq,
        sigma_tilde_sq_b: lb.sigma_tilde_sq,
        warnings: constants.diagnostics(),
    })
}

/// JSON sidecar of a grid experiment: config echo, summaries, warnings.
#[derive(Debug, Serialize)]
pub struct SummaryDoc<'a> {
    pub schema: &'static str,
    pub experiment: ExperimentKind,
    pub model: &'a str,
    pub config: &'a ExperimentConfig,
    pub constants: Option<&'a LimitConstants>,
    pub warnings: &'a [String],
    pub summaries: &'a [SummaryStats],
}

fn format_field(v: f64) -> String {
    debug_assert!(v.is_finite());
    format!("{v}")
}

/// Write the replicate records as CSV. The scaled_stat column is empty for
/// runs without constants. Errors on any non-finite field.
pub fn write_records_csv(path: &Path, records: &[ReplicateRecord]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        out,
        "model,n,replicate,h,scaled_stat,scaled_sq,cubic_scaled,gap_scaled"
    )?;
    for r in records {
        let fields = [
            Some(r.h),
            r.scaled_stat,
            Some(r.scaled_sq),
            Some(r.cubic_scaled),
            Some(r.gap_scaled),
        ];
        if fields.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Config(format!(
                "non-finite field in record (model {}, n {}, replicate {})",
                r.model, r.n, r.replicate
            )));
        }
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.model,
            r.n,
            r.replicate,
            format_field(r.h),
            r.scaled_stat.map(format_field).unwrap_or_default(),
            format_field(r.scaled_sq),
            format_field(r.cubic_scaled),
            format_field(r.gap_scaled),
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Sidecar path of a CSV output: `results.csv` -> `results.summary.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("summary.json")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    std::fs::write(path, bytes)?;
    Ok(())
}
