//! Trajectory statistics: the giant-component fraction curve, its quantile
//! function, the quantile difference, and the maximal second-component size.

use std::fmt;
use std::str::FromStr;

use crate::dyngraph::max_edges;
use crate::error::{Error, Result};
use crate::process::{StepSummary, TrajectoryRecord};

/// Quantile pair used when none is given.
pub const DEFAULT_QUANTILES: (f64, f64) = (0.05, 0.75);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `s1 / n`.
    #[default]
    ByVertices,
    /// `s1 / C(n, 2)`.
    ByPairs,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::ByVertices => "vertices",
            Normalization::ByPairs => "pairs",
        }
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertices" | "by-vertices" => Ok(Normalization::ByVertices),
            "pairs" | "by-pairs" => Ok(Normalization::ByPairs),
            _ => Err(Error::UnknownName {
                what: "normalization",
                value: s.to_string(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Latent,
    Observed,
}

/// Latent summaries, or observed ones (error if the run was noise-free).
pub fn summaries(traj: &TrajectoryRecord, which: Which) -> Result<&[StepSummary]> {
    match which {
        Which::Latent => Ok(&traj.latent),
        Which::Observed => traj.observed.as_deref().ok_or(Error::ObservedUnavailable),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GccSeries {
    pub values: Vec<f64>,
    pub normalization: Normalization,
}

impl GccSeries {
    pub fn from_s1(
        s1: impl IntoIterator<Item = usize>,
        n: usize,
        normalization: Normalization,
    ) -> Self {
        let denom = match normalization {
            Normalization::ByVertices => n,
            Normalization::ByPairs => max_edges(n),
        } as f64;
        GccSeries {
            values: s1.into_iter().map(|s| s as f64 / denom).collect(),
            normalization,
        }
    }

    /// Last time index `T`.
    pub fn horizon(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

pub fn gcc_fraction_series(
    traj: &TrajectoryRecord,
    which: Which,
    normalization: Normalization,
) -> Result<GccSeries> {
    let rows = summaries(traj, which)?;
    Ok(GccSeries::from_s1(
        rows.iter().map(|s| s.s1),
        traj.config.n,
        normalization,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quantile {
    pub t: usize,
    /// The level was never reached; `t` is the horizon.
    pub censored: bool,
}

/// `Q(x) = min { t : F(t) >= x }`, or the horizon with `censored` set.
pub fn quantile(series: &GccSeries, x: f64) -> Result<Quantile> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidQuantileLevel(x));
    }
    Ok(match series.values.iter().position(|&f| f >= x) {
        Some(t) => Quantile { t, censored: false },
        None => Quantile {
            t: series.horizon(),
            censored: true,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StatisticKind {
    /// Quantile difference of the giant-component fraction.
    Qd,
    /// Maximal second-largest component size.
    Sec,
}

impl StatisticKind {
    pub const ALL: [StatisticKind; 2] = [StatisticKind::Qd, StatisticKind::Sec];

    pub fn as_str(self) -> &'static str {
        match self {
            StatisticKind::Qd => "qd",
            StatisticKind::Sec => "sec",
        }
    }
}

impl fmt::Display for StatisticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StatisticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qd" => Ok(StatisticKind::Qd),
            "sec" => Ok(StatisticKind::Sec),
            _ => Err(Error::UnknownName {
                what: "statistic",
                value: s.to_string(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectionStatistic {
    pub kind: StatisticKind,
    pub value: f64,
    pub censored: bool,
}

/// `Q(x2) - Q(x1)`; censored if either quantile is.
pub fn quantile_difference(series: &GccSeries, x1: f64, x2: f64) -> Result<DetectionStatistic> {
    if !(x1 < x2) {
        return Err(Error::QuantileOrder(x1, x2));
    }
    let lo = quantile(series, x1)?;
    let hi = quantile(series, x2)?;
    Ok(DetectionStatistic {
        kind: StatisticKind::Qd,
        value: hi.t.saturating_sub(lo.t) as f64,
        censored: lo.censored || hi.censored,
    })
}

pub fn max_second(s2: impl IntoIterator<Item = usize>) -> usize {
    s2.into_iter().max().unwrap_or(0)
}

pub fn max_second_component(traj: &TrajectoryRecord, which: Which) -> Result<DetectionStatistic> {
    let rows = summaries(traj, which)?;
    Ok(DetectionStatistic {
        kind: StatisticKind::Sec,
        value: max_second(rows.iter().map(|s| s.s2)) as f64,
        censored: false,
    })
}

/// Per-step mean curves across a batch of runs.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanCurve {
    pub gcc: Vec<f64>,
    pub s2: Vec<f64>,
}

pub fn mean_curve(
    runs: &[TrajectoryRecord],
    which: Which,
    normalization: Normalization,
) -> Result<MeanCurve> {
    let first = runs.first().ok_or(Error::EmptySample)?;
    let len = first.len();
    let mut gcc = vec![0.0; len];
    let mut s2 = vec![0.0; len];
    for run in runs {
        if run.len() != len {
            return Err(Error::InvalidConfig("runs of different lengths".into()));
        }
        let series = gcc_fraction_series(run, which, normalization)?;
        for (acc, v) in gcc.iter_mut().zip(&series.values) {
            *acc += v;
        }
        for (acc, row) in s2.iter_mut().zip(summaries(run, which)?) {
            *acc += row.s2 as f64;
        }
    }
    let k = runs.len() as f64;
    gcc.iter_mut().for_each(|v| *v /= k);
    s2.iter_mut().for_each(|v| *v /= k);
    Ok(MeanCurve { gcc, s2 })
}
