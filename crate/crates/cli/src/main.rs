//! `grenlab`: reproducible monotone-estimation experiments.
//!
//! Subcommands cover the full pipeline: simulate the universal argmax
//! constants once (`chernoff`), derive per-model limit constants (`limits`),
//! inspect a single fit (`fit`), and run the replicated experiments
//! (`clt`, `lemmas`, `varconst`). All outputs are deterministic functions of
//! the flags, byte-identical across reruns and thread counts.

use clap::{Parser, Subcommand};
use grenlab_core::{
    estimate_constants, experiment, hellinger_limits, run_clt, run_lemma_decay,
    run_variance_constancy, truth_selfcheck, ChernoffConfig, ChernoffEstimates, Direction, Error,
    ExperimentConfig, ExperimentKind, SampleConfig, TruthModel,
};
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "grenlab",
    version,
    about = "Monotone-estimation experiment lab"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Estimate the universal Brownian-argmax constants by Monte Carlo.
    Chernoff {
        /// Time-grid step of the simulated paths.
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
        /// Half-width of each argmax search window.
        #[arg(long, default_value_t = 2.5)]
        trunc: f64,
        /// Upper limit of the covariance integral.
        #[arg(long, default_value_t = 8.0)]
        amax: f64,
        /// Spacing of the offset grid.
        #[arg(long, default_value_t = 0.1)]
        astep: f64,
        #[arg(long, default_value_t = 100_000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output JSON path for the constants.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute the limit constants of one model from a constants file.
    Limits {
        #[arg(long)]
        model: String,
        /// Constants JSON produced by `grenlab chernoff`.
        #[arg(long)]
        constants: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw one sample, fit it, and write the breakpoints/levels CSV.
    Fit {
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Central-limit experiment for the scaled Hellinger statistic.
    Clt {
        #[arg(long)]
        model: String,
        /// Comma-separated ascending sample sizes.
        #[arg(
            long = "n-grid",
            value_delimiter = ',',
            default_value = "500,2000,8000"
        )]
        n_grid: Vec<usize>,
        #[arg(long, default_value_t = 2000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        constants: PathBuf,
        /// Records CSV path; a .summary.json sidecar is written next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Decay experiment for the cubic and approximation-gap functionals.
    Lemmas {
        #[arg(long)]
        model: String,
        #[arg(
            long = "n-grid",
            value_delimiter = ',',
            default_value = "500,2000,8000"
        )]
        n_grid: Vec<usize>,
        #[arg(long, default_value_t = 2000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Variance-constancy comparison between two density models.
    Varconst {
        /// Exactly two comma-separated density model ids.
        #[arg(long = "models", value_delimiter = ',')]
        models: Vec<String>,
        #[arg(long, default_value_t = 8000)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        constants: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn lookup_model(id: &str) -> Result<TruthModel, Error> {
    TruthModel::by_id(id).ok_or_else(|| {
        Error::Config(format!(
            "unknown model id {id:?}; registered: {}",
            TruthModel::registry_ids().join(", ")
        ))
    })
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Chernoff {
            delta,
            trunc,
            amax,
            astep,
            reps,
            seed,
            out,
        } => {
            let cfg = ChernoffConfig {
                grid_step: delta,
                trunc,
                a_max: amax,
                a_step: astep,
                replicates: reps,
                seed,
            };
            let est = estimate_constants(&cfg)?;
            for w in est.diagnostics() {
                eprintln!("warning: {w}");
            }
            est.save(&out)?;
            println!(
                "m2 = {} (se {}), k2 = {} (se {}) -> {}",
                est.m2,
                est.m2_se,
                est.k2,
                est.k2_se,
                out.display()
            );
        }
        Cmd::Limits {
            model,
            constants,
            out,
        } => {
            let truth = lookup_model(&model)?;
            truth_selfcheck(&truth)?;
            let est = ChernoffEstimates::load(&constants)?;
            let lc = hellinger_limits(&truth, &est)?;
            lc.save(&out)?;
            println!(
                "mu^2 = {}, sigma^2 = {}, mu~ = {}, sigma~^2 = {} -> {}",
                lc.mu_sq,
                lc.sigma_sq,
                lc.mu_tilde,
                lc.sigma_tilde_sq,
                out.display()
            );
        }
        Cmd::Fit {
            model,
            n,
            seed,
            out,
        } => {
            let truth = lookup_model(&model)?;
            let cfg = SampleConfig::new(truth, n, seed)?;
            let step = grenlab_core::sample(&cfg)?;
            let fit = grenlab_core::grenander_fit(&step, Direction::NonIncreasing)?;
            let mut w = std::io::BufWriter::new(std::fs::File::create(&out)?);
            writeln!(w, "t_left,t_right,level")?;
            for (i, level) in fit.levels().iter().enumerate() {
                writeln!(w, "{},{},{}", fit.cuts()[i], fit.cuts()[i + 1], level)?;
            }
            w.flush()?;
            println!("{} pieces -> {}", fit.levels().len(), out.display());
        }
        Cmd::Clt {
            model,
            n_grid,
            reps,
            seed,
            constants,
            out,
        } => {
            let truth = lookup_model(&model)?;
            let est = ChernoffEstimates::load(&constants)?;
            let cfg = ExperimentConfig::new(ExperimentKind::Clt, n_grid, reps, seed)?;
            let run = run_clt(&truth, &est, &cfg)?;
            write_grid_outputs(&out, &truth, &cfg, &run)?;
        }
        Cmd::Lemmas {
            model,
            n_grid,
            reps,
            seed,
            out,
        } => {
            let truth = lookup_model(&model)?;
            let cfg = ExperimentConfig::new(ExperimentKind::LemmaDecay, n_grid, reps, seed)?;
            let run = run_lemma_decay(&truth, &cfg)?;
            write_grid_outputs(&out, &truth, &cfg, &run)?;
        }
        Cmd::Varconst {
            models,
            n,
            reps,
            seed,
            constants,
            out,
        } => {
            if models.len() != 2 {
                return Err(Error::Config(format!(
                    "--models needs exactly two ids, got {}",
                    models.len()
                )));
            }
            let a = lookup_model(&models[0])?;
            let b = lookup_model(&models[1])?;
            let est = ChernoffEstimates::load(&constants)?;
            let cmp = run_variance_constancy(&a, &b, n, reps, seed, &est)?;
            experiment::write_json(&out, &cmp)?;
            println!(
                "var ratio {} (95% CI [{}, {}]) -> {}",
                cmp.ratio,
                cmp.ci_lo,
                cmp.ci_hi,
                out.display()
            );
        }
    }
    Ok(())
}

fn write_grid_outputs(
    out: &std::path::Path,
    truth: &TruthModel,
    cfg: &ExperimentConfig,
    run: &grenlab_core::ExperimentRun,
) -> Result<(), Error> {
    experiment::write_records_csv(out, &run.records)?;
    let doc = experiment::SummaryDoc {
        schema: grenlab_core::chernoff::SCHEMA,
        experiment: cfg.kind,
        model: truth.id(),
        config: cfg,
        constants: run.constants.as_ref(),
        warnings: &run.warnings,
        summaries: &run.summaries,
    };
    let sidecar = experiment::sidecar_path(out);
    experiment::write_json(&sidecar, &doc)?;
    for w in &run.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "{} records -> {}, summary -> {}",
        run.records.len(),
        out.display(),
        sidecar.display()
    );
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ModelInvalid { .. } => 3,
        _ => 2,
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}
