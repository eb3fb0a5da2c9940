use std::io::{self, Write};
use std::str::FromStr;

use super::kde::{linspace, Kde, GRID_POINTS, PAD_BANDWIDTHS};
use crate::error::{Error, Result};
use crate::stats::StatisticKind;

/// Which direction of the statistic points to the positive (explosive)
/// class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    HigherIsPositive,
    LowerIsPositive,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::HigherIsPositive => Orientation::LowerIsPositive,
            Orientation::LowerIsPositive => Orientation::HigherIsPositive,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::HigherIsPositive => "higher",
            Orientation::LowerIsPositive => "lower",
        }
    }

    fn score(self, v: f64) -> f64 {
        match self {
            Orientation::HigherIsPositive => v,
            Orientation::LowerIsPositive => -v,
        }
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "higher" | "greater" => Ok(Orientation::HigherIsPositive),
            "lower" | "less" => Ok(Orientation::LowerIsPositive),
            _ => Err(Error::UnknownOrientation(s.to_string())),
        }
    }
}

impl StatisticKind {
    /// A larger maximal second component favours the product rule; a
    /// smaller quantile difference (steeper transition) does too.
    pub fn orientation(self) -> Orientation {
        match self {
            StatisticKind::Sec => Orientation::HigherIsPositive,
            StatisticKind::Qd => Orientation::LowerIsPositive,
        }
    }
}

/// `(FPR, TPR)` points from `(0, 0)` to `(1, 1)`, both coordinates
/// nondecreasing.
#[derive(Clone, Debug, PartialEq)]
pub struct RocCurve {
    pub points: Vec<(f64, f64)>,
    pub orientation: Orientation,
}

impl RocCurve {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# orientation={}", self.orientation.as_str())?;
        writeln!(w, "fpr,tpr")?;
        for (f, t) in &self.points {
            writeln!(w, "{f},{t}")?;
        }
        Ok(())
    }
}

fn check_nonempty(neg: &[f64], pos: &[f64]) -> Result<()> {
    if neg.is_empty() || pos.is_empty() {
        Err(Error::EmptySample)
    } else {
        Ok(())
    }
}

/// Empirical ROC: one point per distinct pooled value, thresholds swept from
/// the most to the least positive.
pub fn roc_from_samples(neg: &[f64], pos: &[f64], orientation: Orientation) -> Result<RocCurve> {
    check_nonempty(neg, pos)?;
    let sorted_desc = |xs: &[f64]| {
        let mut v: Vec<f64> = xs.iter().map(|&x| orientation.score(x)).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let (neg_s, pos_s) = (sorted_desc(neg), sorted_desc(pos));
    let mut thresholds: Vec<f64> = neg_s.iter().chain(&pos_s).copied().collect();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    thresholds.dedup();

    let (nn, np) = (neg_s.len() as f64, pos_s.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut points = Vec::with_capacity(thresholds.len() + 1);
    points.push((0.0, 0.0));
    for c in thresholds {
        while i < neg_s.len() && neg_s[i] >= c {
            i += 1;
        }
        while j < pos_s.len() && pos_s[j] >= c {
            j += 1;
        }
        points.push((i as f64 / nn, j as f64 / np));
    }
    Ok(RocCurve {
        points,
        orientation,
    })
}

/// ROC of two smoothed distributions: thresholds on a shared grid of
/// `thresholds` points across the pooled padded support, rates from the
/// analytic kernel CDFs.
pub fn roc_from_densities(
    neg: &Kde,
    pos: &Kde,
    orientation: Orientation,
    thresholds: usize,
) -> RocCurve {
    let (a0, a1) = neg.support();
    let (b0, b1) = pos.support();
    let pad = PAD_BANDWIDTHS * neg.bandwidth().max(pos.bandwidth());
    let (lo, hi) = (a0.min(b0) - pad, a1.max(b1) + pad);
    let mut grid = linspace(lo, hi, thresholds.max(2));
    let rates = |c: f64| match orientation {
        Orientation::HigherIsPositive => (1.0 - neg.cdf(c), 1.0 - pos.cdf(c)),
        Orientation::LowerIsPositive => (neg.cdf(c), pos.cdf(c)),
    };
    if orientation == Orientation::HigherIsPositive {
        grid.reverse();
    }
    let mut points = Vec::with_capacity(grid.len() + 2);
    points.push((0.0, 0.0));
    let (mut fmax, mut tmax) = (0.0f64, 0.0f64);
    for c in grid {
        let (f, t) = rates(c);
        fmax = fmax.max(f.clamp(0.0, 1.0));
        tmax = tmax.max(t.clamp(0.0, 1.0));
        points.push((fmax, tmax));
    }
    points.push((1.0, 1.0));
    RocCurve {
        points,
        orientation,
    }
}

/// Density-path ROC with automatic bandwidths on the default grid.
pub fn roc_smoothed(neg: &[f64], pos: &[f64], orientation: Orientation) -> Result<RocCurve> {
    check_nonempty(neg, pos)?;
    let (kn, kp) = (Kde::new(neg, None)?, Kde::new(pos, None)?);
    Ok(roc_from_densities(&kn, &kp, orientation, GRID_POINTS))
}

/// Trapezoidal area under the curve.
pub fn auc(curve: &RocCurve) -> f64 {
    curve
        .points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * 0.5 * (w[0].1 + w[1].1))
        .sum()
}

/// Fraction of (negative, positive) pairs ordered as the orientation
/// predicts, ties counting one half.
pub fn empirical_auc(neg: &[f64], pos: &[f64], orientation: Orientation) -> Result<f64> {
    check_nonempty(neg, pos)?;
    let mut scores: Vec<f64> = neg.iter().map(|&x| orientation.score(x)).collect();
    scores.sort_by(f64::total_cmp);
    let mut wins = 0.0;
    for &p in pos {
        let s = orientation.score(p);
        let below = scores.partition_point(|&x| x < s);
        let not_above = scores.partition_point(|&x| x <= s);
        wins += below as f64 + 0.5 * (not_above - below) as f64;
    }
    Ok(wins / (neg.len() as f64 * pos.len() as f64))
}
