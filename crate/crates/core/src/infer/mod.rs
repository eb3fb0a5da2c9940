//! Monte-Carlo inference over simulated statistic distributions.

mod kde;
mod pvalue;
mod roc;

pub use kde::{kde, silverman_bandwidth, Kde, SmoothedDensity, GRID_POINTS, PAD_BANDWIDTHS};
pub use pvalue::{mc_pvalue, Direction};
pub use roc::{
    auc, empirical_auc, roc_from_densities, roc_from_samples, roc_smoothed, Orientation, RocCurve,
};

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::process::{simulate_run, Model, ProcessConfig, TrajectoryRecord};
use crate::stats::{
    gcc_fraction_series, max_second_component, quantile_difference, DetectionStatistic,
    Normalization, StatisticKind, Which, DEFAULT_QUANTILES,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleOptions {
    pub quantiles: (f64, f64),
    pub normalization: Normalization,
    /// Drop runs whose QD is censored instead of keeping the sentinel.
    pub drop_censored: bool,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            quantiles: DEFAULT_QUANTILES,
            normalization: Normalization::ByVertices,
            drop_censored: false,
        }
    }
}

/// Statistic values from one model, one value per kept run.
#[derive(Clone, Debug)]
pub struct StatisticSample {
    pub model: Model,
    pub kind: StatisticKind,
    pub values: Vec<f64>,
    pub censored: Vec<bool>,
    pub run_ids: Vec<u64>,
    pub config: ProcessConfig,
    pub seed: u64,
}

impl StatisticSample {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn censored_count(&self) -> usize {
        self.censored.iter().filter(|&&c| c).count()
    }

    /// `run_id,kind,value,censored` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# model={}", self.model)?;
        writeln!(w, "# seed={}", self.seed)?;
        writeln!(w, "run_id,kind,value,censored")?;
        for ((id, v), c) in self.run_ids.iter().zip(&self.values).zip(&self.censored) {
            writeln!(w, "{id},{},{v},{}", self.kind, u8::from(*c))?;
        }
        Ok(())
    }
}

/// Observed summaries when the run is noisy, latent otherwise.
pub fn statistic_source(config: &ProcessConfig) -> Which {
    if config.noise.is_some() {
        Which::Observed
    } else {
        Which::Latent
    }
}

pub fn reduce_run(
    rec: &TrajectoryRecord,
    kind: StatisticKind,
    opts: &SampleOptions,
) -> Result<DetectionStatistic> {
    let which = statistic_source(&rec.config);
    match kind {
        StatisticKind::Qd => {
            let series = gcc_fraction_series(rec, which, opts.normalization)?;
            quantile_difference(&series, opts.quantiles.0, opts.quantiles.1)
        }
        StatisticKind::Sec => max_second_component(rec, which),
    }
}

/// Simulates `runs` independent runs (run `i` uses stream `i` of `seed`)
/// and maps each through `f`. Results are in run order regardless of
/// scheduling.
pub fn map_runs<T, F>(config: &ProcessConfig, runs: usize, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&TrajectoryRecord) -> Result<T> + Sync,
{
    config.validate()?;
    (0..runs as u64)
        .into_par_iter()
        .map(|run| f(&simulate_run(config, seed, run)?))
        .collect()
}

pub fn simulate_batch(
    config: &ProcessConfig,
    runs: usize,
    seed: u64,
) -> Result<Vec<TrajectoryRecord>> {
    map_runs(config, runs, seed, |rec| Ok(rec.clone()))
}

/// One sample per requested kind, all drawn from the same runs.
pub fn sample_statistics(
    config: &ProcessConfig,
    kinds: &[StatisticKind],
    runs: usize,
    seed: u64,
    opts: &SampleOptions,
) -> Result<Vec<StatisticSample>> {
    if runs == 0 {
        return Err(Error::InvalidConfig("run count must be at least 1".into()));
    }
    let per_run = map_runs(config, runs, seed, |rec| {
        kinds
            .iter()
            .map(|&k| reduce_run(rec, k, opts))
            .collect::<Result<Vec<_>>>()
    })?;
    kinds
        .iter()
        .enumerate()
        .map(|(ki, &kind)| {
            let mut sample = StatisticSample {
                model: config.model,
                kind,
                values: Vec::with_capacity(runs),
                censored: Vec::with_capacity(runs),
                run_ids: Vec::with_capacity(runs),
                config: config.clone(),
                seed,
            };
            for (run, stats) in per_run.iter().enumerate() {
                let st = stats[ki];
                if st.censored && opts.drop_censored {
                    continue;
                }
                sample.values.push(st.value);
                sample.censored.push(st.censored);
                sample.run_ids.push(run as u64);
            }
            if sample.is_empty() {
                return Err(Error::EmptySample);
            }
            Ok(sample)
        })
        .collect()
}

pub fn sample_statistic(
    config: &ProcessConfig,
    kind: StatisticKind,
    runs: usize,
    seed: u64,
) -> Result<StatisticSample> {
    let mut out = sample_statistics(config, &[kind], runs, seed, &SampleOptions::default())?;
    Ok(out.remove(0))
}

/// Independent seed for a labelled sub-batch (e.g. one model of a
/// comparison), via a SplitMix64 finalizer.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut z = seed;
    for b in label.bytes() {
        z = z.rotate_left(8) ^ u64::from(b);
    }
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseParams;

    #[test]
    fn single_run_sample() {
        let cfg = ProcessConfig::new(Model::Er, 20, 1.0, 0.0);
        let s = sample_statistic(&cfg, StatisticKind::Sec, 1, 3).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.values[0] >= 1.0);
    }

    #[test]
    fn equal_seeds_equal_samples() {
        let cfg = ProcessConfig::new(Model::Pr, 30, 0.9, 0.1)
            .with_noise(Some(NoiseParams::new(0.01, 0.01).unwrap()));
        let a =
            sample_statistics(&cfg, &StatisticKind::ALL, 16, 5, &SampleOptions::default()).unwrap();
        let b =
            sample_statistics(&cfg, &StatisticKind::ALL, 16, 5, &SampleOptions::default()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.values, y.values);
        }
        let c = sample_statistic(&cfg, StatisticKind::Qd, 16, 6).unwrap();
        assert_ne!(a[0].values, c.values);
    }

    #[test]
    fn censored_runs_kept_or_dropped() {
        // Ten steps on 50 vertices never reach 75% of the vertices.
        let cfg = ProcessConfig::new(Model::Er, 50, 1.0, 0.0).with_steps(10);
        let kept = sample_statistic(&cfg, StatisticKind::Qd, 4, 1).unwrap();
        assert_eq!(kept.censored_count(), 4);
        // Q(.05) at 3 vertices needs >= 2 edges; QD = T - Q(.05).
        assert!(kept.values.iter().all(|&v| v > 0.0 && v <= 10.0));
        let opts = SampleOptions {
            drop_censored: true,
            ..SampleOptions::default()
        };
        let dropped = sample_statistics(&cfg, &[StatisticKind::Qd], 4, 1, &opts);
        assert!(matches!(dropped, Err(Error::EmptySample)));
    }

    #[test]
    fn zero_runs_rejected() {
        let cfg = ProcessConfig::new(Model::Er, 10, 1.0, 0.0);
        assert!(sample_statistic(&cfg, StatisticKind::Sec, 0, 1).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(7, "er"), derive_seed(7, "pr"));
        assert_eq!(derive_seed(7, "er"), derive_seed(7, "er"));
    }

    #[test]
    fn statistic_csv() {
        let cfg = ProcessConfig::new(Model::Er, 10, 1.0, 0.0);
        let s = sample_statistic(&cfg, StatisticKind::Sec, 2, 1).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("run_id,kind,value,censored\n0,sec,"));
    }
}
