//! Closed-form single-edge transition probabilities for the birth/death ER
//! process and its noisy observation.
//!
//! Rows are indexed by the current latent status `X_t(e)` and columns by the
//! next status. A row is undefined when its denominator vanishes: row 0 needs
//! an absent pair (`m < C(n, 2)`), row 1 needs a present edge (`m >= 1`).
//!
//! Two observed tables are provided. [`observed_transition_scaled`] scales each
//! latent entry by the confusion weight of its column; its rows do not sum to
//! one in general.
//! [`observed_transition_consistent`] composes the confusion matrix with the
//! latent transition and is row-stochastic.

use crate::dyngraph::max_edges;
use crate::error::{check_probability, Error, Result};

const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionTable {
    /// `rows[from] = Some([P(to = 0), P(to = 1)])`.
    pub rows: [Option<[f64; 2]>; 2],
    pub n: usize,
    pub m: usize,
}

impl TransitionTable {
    pub fn entry(&self, from: usize, to: usize) -> Option<f64> {
        self.rows[from].map(|r| r[to])
    }

    pub fn row_sum(&self, from: usize) -> Option<f64> {
        self.rows[from].map(|r| r[0] + r[1])
    }

    /// Every defined row sums to one (within `1e-12`).
    pub fn row_stochastic(&self) -> bool {
        (0..2).all(|i| {
            self.row_sum(i)
                .is_none_or(|s| (s - 1.0).abs() <= ROW_SUM_TOL)
        })
    }
}

fn check_counts(n: usize, m: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::TooFewVertices(n));
    }
    let max = max_edges(n);
    if m > max {
        return Err(Error::TooManyEdges { m, n, max });
    }
    Ok(max)
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Latent transition given the indicator `y` driving the step.
pub fn latent_transition_given_y(n: usize, m: usize, y: bool) -> Result<TransitionTable> {
    let max = check_counts(n, m)?;
    let absent = (max - m) as f64;
    let mf = m as f64;
    let row0 = (m < max).then(|| {
        let birth = indicator(y) / absent;
        [1.0 - birth, birth]
    });
    let row1 = (m >= 1).then(|| {
        let death = indicator(!y) / mf;
        [death, 1.0 - death]
    });
    Ok(TransitionTable {
        rows: [row0, row1],
        n,
        m,
    })
}

/// Latent transition averaged over `Y ~ Bernoulli(p)` (the `q = 1 - p` case).
pub fn latent_transition_marginal(n: usize, m: usize, p: f64) -> Result<TransitionTable> {
    check_probability("p", p)?;
    let max = check_counts(n, m)?;
    let absent = (max - m) as f64;
    let mf = m as f64;
    let row0 = (m < max).then(|| [(absent - p) / absent, p / absent]);
    let row1 = (m >= 1).then(|| [(1.0 - p) / mf, (mf - 1.0 + p) / mf]);
    Ok(TransitionTable {
        rows: [row0, row1],
        n,
        m,
    })
}

fn check_noise(alpha: f64, beta: f64) -> Result<()> {
    check_probability("alpha", alpha)?;
    check_probability("beta", beta)
}

/// Each latent entry scaled by the confusion-matrix weight of its column.
pub fn observed_transition_scaled(
    n: usize,
    m: usize,
    p: f64,
    alpha: f64,
    beta: f64,
) -> Result<TransitionTable> {
    check_noise(alpha, beta)?;
    let latent = latent_transition_marginal(n, m, p)?;
    let row0 = latent.rows[0].map(|[stay, birth]| [(1.0 - alpha) * stay, alpha * birth]);
    let row1 = latent.rows[1].map(|[death, stay]| [beta * death, (1.0 - beta) * stay]);
    Ok(TransitionTable {
        rows: [row0, row1],
        n,
        m,
    })
}

/// `P[X*_{t+1} | X_t]` obtained by passing the latent next status through the
/// confusion matrix.
pub fn observed_transition_consistent(
    n: usize,
    m: usize,
    p: f64,
    alpha: f64,
    beta: f64,
) -> Result<TransitionTable> {
    check_noise(alpha, beta)?;
    let latent = latent_transition_marginal(n, m, p)?;
    let observe = |[to0, to1]: [f64; 2]| {
        let obs0 = (1.0 - alpha) * to0 + beta * to1;
        let obs1 = alpha * to0 + (1.0 - beta) * to1;
        [obs0, obs1]
    };
    Ok(TransitionTable {
        rows: [latent.rows[0].map(observe), latent.rows[1].map(observe)],
        n,
        m,
    })
}

/// Observed marginals `(P[X* = 0], P[X* = 1])`, each the sum
/// of one column of [`observed_transition_scaled`]. Undefined at `m = 0` and
/// `m = C(n, 2)`.
pub fn observed_marginal_scaled(
    n: usize,
    m: usize,
    p: f64,
    alpha: f64,
    beta: f64,
) -> Result<(f64, f64)> {
    let t = observed_transition_scaled(n, m, p, alpha, beta)?;
    match (t.rows[0], t.rows[1]) {
        (Some(r0), Some(r1)) => Ok((r0[0] + r1[0], r0[1] + r1[1])),
        _ => Err(Error::InvalidConfig(format!(
            "observed marginal undefined at m={m} (needs 0 < m < {})",
            max_edges(n)
        ))),
    }
}

/// Observed marginal of a uniformly chosen pair: the rows of
/// [`observed_transition_consistent`] mixed with latent-state weights
/// `((C - m) / C, m / C)`.
pub fn observed_marginal_consistent(
    n: usize,
    m: usize,
    p: f64,
    alpha: f64,
    beta: f64,
) -> Result<(f64, f64)> {
    let t = observed_transition_consistent(n, m, p, alpha, beta)?;
    let max = max_edges(n) as f64;
    let (w0, w1) = ((max - m as f64) / max, m as f64 / max);
    let mut out = (0.0, 0.0);
    for (w, row) in [(w0, t.rows[0]), (w1, t.rows[1])] {
        if w > 0.0 {
            let r = row.expect("row with positive weight is defined");
            out.0 += w * r[0];
            out.1 += w * r[1];
        }
    }
    Ok(out)
}
