//! `noisyperc` command-line front end: batch simulation, ER-vs-PR
//! comparison sweeps, closed-form tables and scoring of external
//! trajectories.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use noisyperc::infer::SampleOptions;
use noisyperc::process::default_steps;
use noisyperc::stats::DEFAULT_QUANTILES;
use noisyperc::{Model, NoiseParams, Normalization, ProcessConfig};

use crate::config::FileConfig;

pub const SEED_ENV: &str = "NOISYPERC_SEED";
const DEFAULT_N: usize = 100;
const DEFAULT_RUNS: usize = 1000;
const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "noisyperc",
    version,
    about = "Noisy birth/death percolation: ER vs Achlioptas product rule"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML file of defaults; keys match flag names, flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed. Falls back to the config file, then `NOISYPERC_SEED`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a batch of runs of one model.
    Simulate(SimulateArgs),
    /// Sample both models over a parameter sweep and compare the statistics.
    Compare(CompareArgs),
    /// Print the single-edge transition tables of the ER process.
    Formulas(FormulasArgs),
    /// Score an observed trajectory against simulated null distributions.
    Ingest(IngestArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ProcessArgs {
    /// Vertex count.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of steps T (default 6n).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Death rate: P(Y_{t+1} = 0 | Y_t = 1). Default 1 - p.
    #[arg(long)]
    pub q: Option<f64>,
    /// Initial indicator state.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub initial_y: Option<bool>,
    /// Runs per model.
    #[arg(long)]
    pub runs: Option<usize>,
    /// GCC curve normalization: `vertices` or `pairs`.
    #[arg(long)]
    pub normalization: Option<String>,
    /// Quantile pair of the QD statistic, e.g. `0.05,0.75`.
    #[arg(long, value_delimiter = ',')]
    pub quantiles: Option<Vec<f64>>,
    /// Drop runs whose QD is censored.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub drop_censored: Option<bool>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Model: `er` or `pr`.
    #[arg(long)]
    pub model: Option<String>,
    /// Birth rate: P(Y_{t+1} = 1 | Y_t = 0).
    #[arg(long)]
    pub p: Option<f64>,
    /// Type I error rate.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Type II error rate.
    #[arg(long)]
    pub beta: Option<f64>,
    #[command(flatten)]
    pub process: ProcessArgs,
    /// Output directory.
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Birth rates to sweep (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// Type I error rates to sweep.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    /// Type II error rates to sweep.
    #[arg(long, value_delimiter = ',')]
    pub beta: Option<Vec<f64>>,
    #[command(flatten)]
    pub process: ProcessArgs,
    /// Output directory.
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct FormulasArgs {
    /// Vertex count.
    #[arg(long)]
    pub n: Option<usize>,
    /// Current edge count.
    #[arg(long)]
    pub m: Option<usize>,
    /// Birth rate.
    #[arg(long)]
    pub p: Option<f64>,
    /// Type I error rate.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Type II error rate.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Write to a file instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct IngestArgs {
    /// Trajectory file: summary CSV (`t,s1,s2`) or blank-line separated edge lists.
    pub input: PathBuf,
    /// Null-model birth rate.
    #[arg(long)]
    pub p: Option<f64>,
    /// Null-model Type I error rate.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Null-model Type II error rate.
    #[arg(long)]
    pub beta: Option<f64>,
    #[command(flatten)]
    pub process: ProcessArgs,
    /// Write to a file instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Fully resolved run parameters: flags, then config file, then defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub model: Model,
    pub n: usize,
    pub steps: Option<usize>,
    pub p: Vec<f64>,
    pub q: Option<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub initial_y: bool,
    pub runs: usize,
    pub seed: u64,
    pub opts: SampleOptions,
}

impl RunSpec {
    pub fn resolve(
        process: &ProcessArgs,
        model: Option<&str>,
        sweep: [Option<Vec<f64>>; 3],
        seed: Option<u64>,
        file: &FileConfig,
        fallback_seed: u64,
    ) -> Result<Self> {
        let [p, alpha, beta] = sweep;
        let list = |flag: Option<Vec<f64>>, key: &Option<config::OneOrMany>, default: f64| {
            flag.or_else(|| key.clone().map(config::OneOrMany::into_vec))
                .unwrap_or_else(|| vec![default])
        };
        let model = match model.map(str::to_string).or_else(|| file.model.clone()) {
            Some(m) => m.parse()?,
            None => Model::Er,
        };
        let normalization = match process
            .normalization
            .clone()
            .or_else(|| file.normalization.clone())
        {
            Some(s) => s.parse()?,
            None => Normalization::ByVertices,
        };
        let quantiles = match process.quantiles.as_deref() {
            Some([a, b]) => (*a, *b),
            Some(_) => bail!("--quantiles takes two values"),
            None => file.quantiles.map_or(DEFAULT_QUANTILES, |[a, b]| (a, b)),
        };
        if !(0.0..=1.0).contains(&quantiles.0)
            || !(0.0..=1.0).contains(&quantiles.1)
            || quantiles.0 >= quantiles.1
        {
            bail!("quantile pair must satisfy 0 <= x1 < x2 <= 1, got {quantiles:?}");
        }
        let spec = RunSpec {
            model,
            n: process.n.or(file.n).unwrap_or(DEFAULT_N),
            steps: process.steps.or(file.steps),
            p: list(p, &file.p, 1.0),
            q: process.q.or(file.q),
            alpha: list(alpha, &file.alpha, 0.0),
            beta: list(beta, &file.beta, 0.0),
            initial_y: process.initial_y.or(file.initial_y).unwrap_or(false),
            runs: process.runs.or(file.runs).unwrap_or(DEFAULT_RUNS),
            seed: seed.or(file.seed).unwrap_or(fallback_seed),
            opts: SampleOptions {
                quantiles,
                normalization,
                drop_censored: process
                    .drop_censored
                    .or(file.drop_censored)
                    .unwrap_or(false),
            },
        };
        if spec.p.is_empty() || spec.alpha.is_empty() || spec.beta.is_empty() {
            bail!("empty sweep");
        }
        if spec.runs == 0 {
            bail!("--runs must be at least 1");
        }
        // Surface range errors before any work starts. Each bound involves a
        // single axis, so one pass per axis covers the whole grid.
        let (p0, a0, b0) = (spec.p[0], spec.alpha[0], spec.beta[0]);
        let axes = spec
            .p
            .iter()
            .map(|&p| (p, a0, b0))
            .chain(spec.alpha.iter().map(|&a| (p0, a, b0)))
            .chain(spec.beta.iter().map(|&b| (p0, a0, b)));
        for point in axes {
            spec.config(point)?.validate()?;
        }
        Ok(spec)
    }

    /// Sweep points `(p, alpha, beta)` in row-major order.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::new();
        for &p in &self.p {
            for &a in &self.alpha {
                for &b in &self.beta {
                    out.push((p, a, b));
                }
            }
        }
        out
    }

    pub fn single_point(&self) -> Result<(f64, f64, f64)> {
        match self.points().as_slice() {
            [one] => Ok(*one),
            _ => bail!("this command takes a single value of p, alpha and beta"),
        }
    }

    pub fn config(&self, (p, alpha, beta): (f64, f64, f64)) -> Result<ProcessConfig> {
        let noise = if alpha == 0.0 && beta == 0.0 {
            None
        } else {
            Some(NoiseParams::new(alpha, beta)?)
        };
        let mut cfg = ProcessConfig::new(self.model, self.n, p, self.q.unwrap_or(1.0 - p))
            .with_steps(self.steps.unwrap_or_else(|| default_steps(self.n)))
            .with_noise(noise);
        cfg.initial_y = self.initial_y;
        Ok(cfg)
    }
}

pub fn load_file_config(path: Option<&PathBuf>) -> Result<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            config::parse_config(&text).with_context(|| format!("parsing {}", path.display()))
        }
    }
}

fn env_seed() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{SEED_ENV}={v:?} is not a seed")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let file = load_file_config(cli.config.as_ref())?;
    let fallback_seed = env_seed()?;
    let jobs = cli.jobs.or(file.jobs);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            bail!("--jobs must be at least 1");
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().context("starting worker pool")?;
    pool.install(|| match &cli.command {
        Command::Simulate(a) => {
            let spec = RunSpec::resolve(
                &a.process,
                a.model.as_deref(),
                [
                    a.p.map(|x| vec![x]),
                    a.alpha.map(|x| vec![x]),
                    a.beta.map(|x| vec![x]),
                ],
                cli.seed,
                &file,
                fallback_seed,
            )?;
            commands::simulate(&spec, &a.out)
        }
        Command::Compare(a) => {
            let spec = RunSpec::resolve(
                &a.process,
                None,
                [a.p.clone(), a.alpha.clone(), a.beta.clone()],
                cli.seed,
                &file,
                fallback_seed,
            )?;
            commands::compare(&spec, &a.out)
        }
        Command::Formulas(a) => {
            let n = a.n.or(file.n).unwrap_or(DEFAULT_N);
            let m = a.m.or(file.m).context("formulas needs --m")?;
            let scalar =
                |flag: Option<f64>, key: &Option<config::OneOrMany>, default: f64| -> Result<f64> {
                    match flag {
                        Some(x) => Ok(x),
                        None => match key.clone().map(config::OneOrMany::into_vec).as_deref() {
                            None => Ok(default),
                            Some([x]) => Ok(*x),
                            Some(_) => bail!("formulas takes a single value per rate"),
                        },
                    }
                };
            let p = scalar(a.p, &file.p, 1.0)?;
            let alpha = scalar(a.alpha, &file.alpha, 0.0)?;
            let beta = scalar(a.beta, &file.beta, 0.0)?;
            commands::formulas(n, m, p, alpha, beta, a.out.as_deref())
        }
        Command::Ingest(a) => {
            let spec = RunSpec::resolve(
                &a.process,
                None,
                [
                    a.p.map(|x| vec![x]),
                    a.alpha.map(|x| vec![x]),
                    a.beta.map(|x| vec![x]),
                ],
                cli.seed,
                &file,
                fallback_seed,
            )?;
            // The vertex count comes from the file unless given explicitly.
            let n = a.process.n.or(file.n);
            commands::ingest(&spec, n, &a.input, a.out.as_deref())
        }
    })
}
