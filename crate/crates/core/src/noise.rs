//! Type I / Type II observation noise on top of a latent graph.
//!
//! Each of the `C(n, 2)` pairs is flipped independently: absent pairs are
//! observed present with probability `alpha`, present edges are observed
//! absent with probability `beta`. Rather than drawing one Bernoulli per
//! pair, the number of flips in each class is drawn from its binomial and
//! that many distinct pairs are chosen uniformly, which has the same joint
//! law.

use rand::seq::index;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::dsu::DisjointSets;
use crate::dyngraph::{DynamicGraph, Edge};
use crate::error::{check_probability, Result};
use crate::process::StepSummary;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseParams {
    /// Type I (false positive) probability.
    pub alpha: f64,
    /// Type II (false negative) probability.
    pub beta: f64,
}

impl NoiseParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let params = NoiseParams { alpha, beta };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("alpha", self.alpha)?;
        check_probability("beta", self.beta)
    }

    pub fn is_noiseless(&self) -> bool {
        self.alpha == 0.0 && self.beta == 0.0
    }
}

/// Flip events for one observation of a latent graph.
#[derive(Clone, Debug, Default)]
pub struct Flips {
    /// Positions in `latent.edges()` observed as absent.
    pub false_negatives: Vec<usize>,
    /// Absent pairs observed as present.
    pub false_positives: Vec<Edge>,
}

fn binomial<R: Rng + ?Sized>(trials: usize, prob: f64, rng: &mut R) -> usize {
    if trials == 0 || prob <= 0.0 {
        return 0;
    }
    if prob >= 1.0 {
        return trials;
    }
    Binomial::new(trials as u64, prob)
        .expect("probability validated")
        .sample(rng) as usize
}

pub fn draw_flips<R: Rng + ?Sized>(
    latent: &DynamicGraph,
    params: &NoiseParams,
    rng: &mut R,
) -> Flips {
    let m = latent.edge_count();
    let n_fn = binomial(m, params.beta, rng);
    let false_negatives = if n_fn == 0 {
        Vec::new()
    } else {
        index::sample(rng, m, n_fn).into_vec()
    };
    let n_fp = binomial(latent.absent_count(), params.alpha, rng);
    let false_positives = if n_fp == 0 {
        Vec::new()
    } else {
        latent
            .sample_absent_pairs(n_fp, rng)
            .expect("absent pairs exist when a false positive was drawn")
    };
    Flips {
        false_negatives,
        false_positives,
    }
}

fn apply_flips(latent: &DynamicGraph, flips: &Flips) -> Vec<Edge> {
    let edges = latent.edges();
    let mut dropped = vec![false; edges.len()];
    for &i in &flips.false_negatives {
        dropped[i] = true;
    }
    let mut out: Vec<Edge> = edges
        .iter()
        .zip(&dropped)
        .filter(|(_, &d)| !d)
        .map(|(e, _)| *e)
        .collect();
    out.extend_from_slice(&flips.false_positives);
    out
}

/// Observed edge set for one time point (unsorted).
pub fn observe_edges<R: Rng + ?Sized>(
    latent: &DynamicGraph,
    params: &NoiseParams,
    rng: &mut R,
) -> Vec<Edge> {
    let flips = draw_flips(latent, params, rng);
    apply_flips(latent, &flips)
}

/// Summary of a static edge set on `n` vertices.
pub fn summarize_edges(n: usize, edges: &[Edge]) -> StepSummary {
    let mut dsu = DisjointSets::new(n);
    for e in edges {
        dsu.union(e.lo(), e.hi());
    }
    let (s1, s2) = dsu.top_two();
    StepSummary {
        m: edges.len(),
        s1,
        s2,
    }
}

/// Observed summary without materializing the observed edge list. Consumes
/// the generator exactly as [`observe_edges`] does.
pub fn observe_summary<R: Rng + ?Sized>(
    latent: &DynamicGraph,
    params: &NoiseParams,
    rng: &mut R,
) -> StepSummary {
    let flips = draw_flips(latent, params, rng);
    let edges = latent.edges();
    let mut dropped = vec![false; edges.len()];
    for &i in &flips.false_negatives {
        dropped[i] = true;
    }
    let mut dsu = DisjointSets::new(latent.n());
    for (e, &d) in edges.iter().zip(&dropped) {
        if !d {
            dsu.union(e.lo(), e.hi());
        }
    }
    for e in &flips.false_positives {
        dsu.union(e.lo(), e.hi());
    }
    let (s1, s2) = dsu.top_two();
    StepSummary {
        m: edges.len() - flips.false_negatives.len() + flips.false_positives.len(),
        s1,
        s2,
    }
}

/// Observed summaries for a stored latent trajectory, with fresh flips at
/// every step.
pub fn observe_trajectory<R: Rng + ?Sized>(
    n: usize,
    latent_edge_sets: &[Vec<Edge>],
    params: &NoiseParams,
    rng: &mut R,
) -> Result<Vec<StepSummary>> {
    params.validate()?;
    latent_edge_sets
        .iter()
        .map(|edges| {
            let g = DynamicGraph::from_edges(n, edges.iter().copied())?;
            Ok(observe_summary(&g, params, rng))
        })
        .collect()
}
