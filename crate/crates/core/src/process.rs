//! Latent birth/death graph processes.
//!
//! A two-state indicator chain decides at every step whether an edge is born
//! (`Y = 1`) or dies (`Y = 0`). Under the ER rule the edge is uniform among
//! the candidates; under the product rule two candidates are drawn and the
//! component-size product picks one. Deaths under the product rule evaluate
//! the product with both candidates removed, so that a birth followed by a
//! death of the same pair undoes in reverse order.
//!
//! Timing: `Y_t` is drawn at the start of step `t` (from the row of the
//! current state `Y_{t-1}`) and applied to turn `G_{t-1}` into `G_t`.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dyngraph::{max_edges, DynamicGraph, Edge, MAX_VERTICES};
use crate::error::{check_probability, Error, Result};
use crate::noise::{self, NoiseParams};

pub const TIMING_CONVENTION: &str = "Y_t drawn at start of step t, applied to G_{t-1} -> G_t";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Model {
    Er,
    Pr,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Er => "er",
            Model::Pr => "pr",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "er" => Ok(Model::Er),
            "pr" => Ok(Model::Pr),
            _ => Err(Error::UnknownName {
                what: "model",
                value: s.to_string(),
            }),
        }
    }
}

/// Two-state Markov chain with birth rate `p` (0 -> 1) and death rate `q`
/// (1 -> 0).
#[derive(Clone, Debug)]
pub struct IndicatorChain {
    p: f64,
    q: f64,
    state: bool,
}

impl IndicatorChain {
    pub fn new(p: f64, q: f64, initial: bool) -> Result<Self> {
        check_probability("p", p)?;
        check_probability("q", q)?;
        Ok(IndicatorChain {
            p,
            q,
            state: initial,
        })
    }

    pub fn state(&self) -> bool {
        self.state
    }

    /// `P[Y_{t+1} = 1 | Y_t = state]`.
    pub fn prob_next_one(&self, state: bool) -> f64 {
        if state {
            1.0 - self.q
        } else {
            self.p
        }
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let p1 = self.prob_next_one(self.state);
        // Deterministic rows consume no randomness.
        self.state = if p1 >= 1.0 {
            true
        } else if p1 <= 0.0 {
            false
        } else {
            rng.random_bool(p1)
        };
        self.state
    }
}

/// Uniform birth (`y = true`) or death. Returns the edge that changed, or
/// `None` at a saturated/empty boundary.
pub fn er_step<R: Rng + ?Sized>(g: &mut DynamicGraph, y: bool, rng: &mut R) -> Option<Edge> {
    let picked = if y {
        g.sample_absent_pairs(1, rng).ok()?[0]
    } else {
        g.sample_present_pairs(1, rng).ok()?[0]
    };
    let res = if y {
        g.add_edge(picked)
    } else {
        g.remove_edge(picked)
    };
    res.expect("sampled edge has the expected status");
    Some(picked)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Choice {
    First,
    Second,
}

/// `First` iff `c11 * c12 < c21 * c22`; ties go to `Second`.
pub fn product_rule_choice(c11: usize, c12: usize, c21: usize, c22: usize) -> Choice {
    if (c11 as u128) * (c12 as u128) < (c21 as u128) * (c22 as u128) {
        Choice::First
    } else {
        Choice::Second
    }
}

fn endpoint_product(g: &DynamicGraph, e: Edge) -> (usize, usize) {
    (g.component_size(e.lo()), g.component_size(e.hi()))
}

/// Adds whichever of two absent candidates the product rule selects.
pub fn pr_birth_with(g: &mut DynamicGraph, e1: Edge, e2: Edge) -> Result<Edge> {
    if e1 == e2 {
        return Err(Error::InvalidConfig(
            "product-rule candidates must differ".into(),
        ));
    }
    for e in [e1, e2] {
        if g.contains(e) {
            return Err(Error::DuplicateEdge(e));
        }
    }
    let (c11, c12) = endpoint_product(g, e1);
    let (c21, c22) = endpoint_product(g, e2);
    let chosen = match product_rule_choice(c11, c12, c21, c22) {
        Choice::First => e1,
        Choice::Second => e2,
    };
    g.add_edge(chosen)?;
    Ok(chosen)
}

/// Removes both present candidates, evaluates the product rule in the
/// resulting graph, and restores the one that is not deleted. Returns the
/// deleted edge.
pub fn pr_death_with(g: &mut DynamicGraph, e1: Edge, e2: Edge) -> Result<Edge> {
    if e1 == e2 {
        return Err(Error::InvalidConfig(
            "product-rule candidates must differ".into(),
        ));
    }
    for e in [e1, e2] {
        if !g.contains(e) {
            return Err(Error::AbsentEdge(e));
        }
    }
    g.remove_edge(e1)?;
    g.remove_edge(e2)?;
    let (c11, c12) = endpoint_product(g, e1);
    let (c21, c22) = endpoint_product(g, e2);
    let (deleted, restored) = match product_rule_choice(c11, c12, c21, c22) {
        Choice::First => (e2, e1),
        Choice::Second => (e1, e2),
    };
    g.add_edge(restored)?;
    Ok(deleted)
}

pub fn pr_birth_step<R: Rng + ?Sized>(g: &mut DynamicGraph, rng: &mut R) -> Option<Edge> {
    let cands = g.sample_absent_pairs(2, rng).ok()?;
    match cands.as_slice() {
        [only] => {
            g.add_edge(*only).expect("sampled pair is absent");
            Some(*only)
        }
        [e1, e2] => Some(pr_birth_with(g, *e1, *e2).expect("sampled pairs are absent")),
        _ => unreachable!("sampler returns one or two candidates"),
    }
}

pub fn pr_death_step<R: Rng + ?Sized>(g: &mut DynamicGraph, rng: &mut R) -> Option<Edge> {
    let cands = g.sample_present_pairs(2, rng).ok()?;
    match cands.as_slice() {
        [only] => {
            g.remove_edge(*only).expect("sampled edge is present");
            Some(*only)
        }
        [e1, e2] => Some(pr_death_with(g, *e1, *e2).expect("sampled edges are present")),
        _ => unreachable!("sampler returns one or two candidates"),
    }
}

pub fn default_steps(n: usize) -> usize {
    n.saturating_mul(6)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProcessConfig {
    pub model: Model,
    pub n: usize,
    /// Number of steps `T`; the trajectory has `T + 1` rows.
    pub steps: usize,
    pub p: f64,
    pub q: f64,
    pub initial_y: bool,
    pub noise: Option<NoiseParams>,
    /// Keep every latent (and observed, when noisy) edge set.
    pub retain_edges: bool,
}

impl ProcessConfig {
    /// `T = 6n`, `Y_0 = 0`, no noise.
    pub fn new(model: Model, n: usize, p: f64, q: f64) -> Self {
        ProcessConfig {
            model,
            n,
            steps: default_steps(n),
            p,
            q,
            initial_y: false,
            noise: None,
            retain_edges: false,
        }
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn with_noise(mut self, noise: Option<NoiseParams>) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_model(mut self, model: Model) -> Self {
        self.model = model;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::TooFewVertices(self.n));
        }
        if self.n > MAX_VERTICES {
            return Err(Error::InvalidConfig(format!(
                "vertex count {} exceeds {MAX_VERTICES}",
                self.n
            )));
        }
        check_probability("p", self.p)?;
        check_probability("q", self.q)?;
        if let Some(noise) = &self.noise {
            noise.validate()?;
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        self.noise.map_or(0.0, |nz| nz.alpha)
    }

    pub fn beta(&self) -> f64 {
        self.noise.map_or(0.0, |nz| nz.beta)
    }
}

/// Edge count and two largest component sizes at one step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct StepSummary {
    pub m: usize,
    pub s1: usize,
    pub s2: usize,
}

impl StepSummary {
    pub fn of(g: &DynamicGraph) -> Self {
        let (s1, s2) = g.top_two();
        StepSummary {
            m: g.edge_count(),
            s1,
            s2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrajectoryRecord {
    pub config: ProcessConfig,
    pub seed: u64,
    pub run: u64,
    pub latent: Vec<StepSummary>,
    pub observed: Option<Vec<StepSummary>>,
    pub latent_edges: Option<Vec<Vec<Edge>>>,
    pub observed_edges: Option<Vec<Vec<Edge>>>,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.latent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.latent.is_empty()
    }

    /// Writes the trajectory CSV: `#` metadata lines, then
    /// `t,m,s1,s2,m_obs,s1_obs,s2_obs`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let c = &self.config;
        writeln!(w, "# model={}", c.model)?;
        writeln!(w, "# n={}", c.n)?;
        writeln!(w, "# T={}", c.steps)?;
        writeln!(w, "# p={}", c.p)?;
        writeln!(w, "# q={}", c.q)?;
        writeln!(w, "# alpha={}", c.alpha())?;
        writeln!(w, "# beta={}", c.beta())?;
        writeln!(
            w,
            "# noise={}",
            if c.noise.is_some() { "on" } else { "off" }
        )?;
        writeln!(w, "# initial_y={}", u8::from(c.initial_y))?;
        writeln!(w, "# seed={}", self.seed)?;
        writeln!(w, "# run={}", self.run)?;
        writeln!(w, "# timing={TIMING_CONVENTION}")?;
        writeln!(w, "t,m,s1,s2,m_obs,s1_obs,s2_obs")?;
        for (t, lat) in self.latent.iter().enumerate() {
            write!(w, "{t},{},{},{}", lat.m, lat.s1, lat.s2)?;
            match self.observed.as_ref().map(|o| o[t]) {
                Some(obs) => writeln!(w, ",{},{},{}", obs.m, obs.s1, obs.s2)?,
                None => writeln!(w, ",,,")?,
            }
        }
        Ok(())
    }
}

/// Generator for run `run` of a batch seeded with `seed`: one ChaCha key per
/// seed, one stream per run.
pub fn run_rng(seed: u64, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng
}

/// Advances the latent graph by one step of the configured model.
pub fn apply_step<R: Rng + ?Sized>(
    model: Model,
    g: &mut DynamicGraph,
    y: bool,
    rng: &mut R,
) -> Option<Edge> {
    match (model, y) {
        (Model::Er, _) => er_step(g, y, rng),
        (Model::Pr, true) => pr_birth_step(g, rng),
        (Model::Pr, false) => pr_death_step(g, rng),
    }
}

pub fn simulate<R: Rng + ?Sized>(
    config: &ProcessConfig,
    seed: u64,
    run: u64,
    rng: &mut R,
) -> Result<TrajectoryRecord> {
    config.validate()?;
    if max_edges(config.n) > u32::MAX as usize {
        return Err(Error::InvalidConfig(format!("n={} is too large", config.n)));
    }
    let mut g = DynamicGraph::new(config.n)?;
    let mut chain = IndicatorChain::new(config.p, config.q, config.initial_y)?;
    let len = config.steps + 1;

    let mut latent = Vec::with_capacity(len);
    let mut observed = config.noise.map(|_| Vec::with_capacity(len));
    let mut latent_edges = config.retain_edges.then(|| Vec::with_capacity(len));
    let mut observed_edges =
        (config.retain_edges && config.noise.is_some()).then(|| Vec::with_capacity(len));

    for t in 0..len {
        if t > 0 {
            let y = chain.step(rng);
            apply_step(config.model, &mut g, y, rng);
        }
        latent.push(StepSummary::of(&g));
        if let Some(edges) = latent_edges.as_mut() {
            edges.push(g.sorted_edges());
        }
        if let (Some(params), Some(obs)) = (config.noise.as_ref(), observed.as_mut()) {
            match observed_edges.as_mut() {
                Some(store) => {
                    let mut edges = noise::observe_edges(&g, params, rng);
                    obs.push(noise::summarize_edges(config.n, &edges));
                    edges.sort_unstable();
                    store.push(edges);
                }
                None => obs.push(noise::observe_summary(&g, params, rng)),
            }
        }
    }

    Ok(TrajectoryRecord {
        config: config.clone(),
        seed,
        run,
        latent,
        observed,
        latent_edges,
        observed_edges,
    })
}

/// [`simulate`] with the generator given by [`run_rng`].
pub fn simulate_run(config: &ProcessConfig, seed: u64, run: u64) -> Result<TrajectoryRecord> {
    let mut rng = run_rng(seed, run);
    simulate(config, seed, run, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashMap, HashSet};

    fn e(a: u32, b: u32) -> Edge {
        Edge::new(a, b).unwrap()
    }

    #[test]
    fn indicator_deterministic_rows() {
        let mut rng = run_rng(0, 0);
        let mut c = IndicatorChain::new(1.0, 0.5, false).unwrap();
        assert!(c.step(&mut rng));
        let mut c = IndicatorChain::new(0.5, 1.0, true).unwrap();
        assert!(!c.step(&mut rng));
        assert!(IndicatorChain::new(1.2, 0.0, false).is_err());
    }

    #[test]
    fn indicator_independent_of_state_when_q_is_one_minus_p() {
        let mut rng = run_rng(8, 0);
        let mut c = IndicatorChain::new(0.7, 0.3, false).unwrap();
        let mut counts = [[0usize; 2]; 2];
        for _ in 0..100_000 {
            let prev = c.state() as usize;
            let next = c.step(&mut rng) as usize;
            counts[prev][next] += 1;
        }
        for row in counts {
            let total = (row[0] + row[1]) as f64;
            let f = row[1] as f64 / total;
            let se = (0.7 * 0.3 / total).sqrt();
            assert!((f - 0.7).abs() <= 3.0 * se, "{f}");
        }
    }

    #[test]
    fn er_step_boundaries() {
        let mut rng = run_rng(1, 0);
        let mut g = DynamicGraph::new(3).unwrap();
        assert_eq!(er_step(&mut g, false, &mut rng), None);
        assert_eq!(g.edge_count(), 0);
        for _ in 0..3 {
            er_step(&mut g, true, &mut rng).unwrap();
        }
        assert_eq!(er_step(&mut g, true, &mut rng), None);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn er_first_birth_is_uniform() {
        let mut rng = run_rng(2, 0);
        let draws = 100_000;
        let mut counts: HashMap<Edge, usize> = HashMap::new();
        for _ in 0..draws {
            let mut g = DynamicGraph::new(3).unwrap();
            let added = er_step(&mut g, true, &mut rng).unwrap();
            assert_eq!(g.edge_count(), 1);
            *counts.entry(added).or_default() += 1;
        }
        let p = 1.0 / 3.0;
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        assert_eq!(counts.len(), 3);
        for c in counts.values() {
            assert!((*c as f64 / draws as f64 - p).abs() <= 3.0 * se);
        }
    }

    #[test]
    fn product_rule_examples() {
        assert_eq!(product_rule_choice(1, 1, 2, 3), Choice::First);
        assert_eq!(product_rule_choice(2, 2, 4, 1), Choice::Second);
        assert_eq!(product_rule_choice(5, 1, 1, 1), Choice::Second);
    }

    #[test]
    fn pr_birth_prefers_small_product() {
        // a=0, b=1 isolated; {2,3,4} is a path.
        let mut g = DynamicGraph::from_edges(5, [e(2, 3), e(3, 4)]).unwrap();
        let added = pr_birth_with(&mut g, e(0, 1), e(2, 0)).unwrap();
        assert_eq!(added, e(0, 1));
        assert!(g.contains(e(0, 1)) && !g.contains(e(0, 2)));
    }

    #[test]
    fn pr_birth_single_candidate() {
        let mut rng = run_rng(3, 0);
        let mut g = DynamicGraph::from_edges(3, [e(0, 1), e(1, 2)]).unwrap();
        assert_eq!(pr_birth_step(&mut g, &mut rng), Some(e(0, 2)));
        assert_eq!(pr_birth_step(&mut g, &mut rng), None);
    }

    #[test]
    fn pr_first_birth_matches_er_in_distribution() {
        let mut rng = run_rng(4, 0);
        let draws = 60_000;
        let mut counts: HashMap<Edge, usize> = HashMap::new();
        for _ in 0..draws {
            let mut g = DynamicGraph::new(4).unwrap();
            let added = pr_birth_step(&mut g, &mut rng).unwrap();
            *counts.entry(added).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        let p = 1.0 / 6.0;
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        for c in counts.values() {
            assert!((*c as f64 / draws as f64 - p).abs() <= 3.0 * se);
        }
    }

    #[test]
    fn pr_death_keeps_deleting_by_both_removed_products() {
        // e1 = (0,1) joins two singletons once both are removed: product 1.
        // e2 = (2,3) with 3 hanging off 4 and 5: product 1 * 3 = 3.
        let mut g = DynamicGraph::from_edges(6, [e(0, 1), e(2, 3), e(3, 4), e(4, 5)]).unwrap();
        let deleted = pr_death_with(&mut g, e(0, 1), e(2, 3)).unwrap();
        assert_eq!(deleted, e(2, 3));
        assert!(g.contains(e(0, 1)) && !g.contains(e(2, 3)));
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn pr_death_reverses_birth_order() {
        // Components {0,1,2} and {3,4,5} for e1's endpoints; {6} and {7} for
        // e2's. At birth time e2 (product 1) wins over e1 (product 9).
        let base = [e(0, 1), e(1, 2), e(3, 4), e(4, 5)];
        let mut g = DynamicGraph::from_edges(8, base).unwrap();
        let e1 = e(2, 3);
        let e2 = e(6, 7);
        assert_eq!(pr_birth_with(&mut g, e1, e2).unwrap(), e2);
        g.add_edge(e1).unwrap();
        // A death step offering both deletes e1 first, e2 survives.
        let deleted = pr_death_with(&mut g, e1, e2).unwrap();
        assert_eq!(deleted, e1);
        assert!(g.contains(e2));
        // Smaller both-removed product survives: (6,7) has 1, (0,1) has 1 * 2.
        assert_eq!(pr_death_with(&mut g.clone(), e2, e(0, 1)).unwrap(), e(0, 1));
    }

    #[test]
    fn pr_death_single_edge() {
        let mut rng = run_rng(5, 0);
        let mut g = DynamicGraph::from_edges(4, [e(1, 2)]).unwrap();
        assert_eq!(pr_death_step(&mut g, &mut rng), Some(e(1, 2)));
        assert_eq!(pr_death_step(&mut g, &mut rng), None);
    }

    #[test]
    fn zero_steps_gives_single_row() {
        let cfg = ProcessConfig::new(Model::Er, 10, 1.0, 0.0).with_steps(0);
        let rec = simulate_run(&cfg, 1, 0).unwrap();
        assert_eq!(rec.latent, vec![StepSummary { m: 0, s1: 1, s2: 1 }]);
    }

    #[test]
    fn pure_birth_adds_one_edge_per_step() {
        for model in [Model::Er, Model::Pr] {
            let cfg = ProcessConfig::new(model, 8, 1.0, 0.0).with_steps(40);
            let rec = simulate_run(&cfg, 3, 0).unwrap();
            for (t, s) in rec.latent.iter().enumerate() {
                assert_eq!(s.m, t.min(28));
            }
        }
    }

    #[test]
    fn single_edge_dynamics() {
        let cfg = ProcessConfig::new(Model::Pr, 20, 0.6, 0.4).with_steps(500);
        let rec = simulate_run(&cfg, 9, 2).unwrap();
        for w in rec.latent.windows(2) {
            assert!(w[0].m.abs_diff(w[1].m) <= 1);
            assert!(w[1].s1 + w[1].s2 <= 20);
        }
    }

    #[test]
    fn simulation_is_deterministic() {
        let cfg = ProcessConfig::new(Model::Pr, 30, 0.8, 0.2)
            .with_noise(Some(NoiseParams::new(0.01, 0.01).unwrap()));
        let a = simulate_run(&cfg, 42, 7).unwrap();
        let b = simulate_run(&cfg, 42, 7).unwrap();
        assert_eq!(a.latent, b.latent);
        assert_eq!(a.observed, b.observed);
        let c = simulate_run(&cfg, 42, 8).unwrap();
        assert_ne!(a.latent, c.latent);
    }

    #[test]
    fn retained_edges_match_summaries() {
        let mut cfg = ProcessConfig::new(Model::Er, 12, 0.7, 0.3)
            .with_steps(60)
            .with_noise(Some(NoiseParams::new(0.05, 0.1).unwrap()));
        cfg.retain_edges = true;
        let rec = simulate_run(&cfg, 5, 0).unwrap();
        let lat = rec.latent_edges.as_ref().unwrap();
        let obs = rec.observed_edges.as_ref().unwrap();
        for t in 0..rec.len() {
            let g = DynamicGraph::from_edges(12, lat[t].iter().copied()).unwrap();
            assert_eq!(StepSummary::of(&g), rec.latent[t]);
            let h = DynamicGraph::from_edges(12, obs[t].iter().copied()).unwrap();
            assert_eq!(StepSummary::of(&h), rec.observed.as_ref().unwrap()[t]);
        }
    }

    #[test]
    fn er_percolates_with_pure_birth() {
        let cfg = ProcessConfig::new(Model::Er, 100, 1.0, 0.0);
        let connected = (0..100)
            .filter(|&r| {
                let rec = simulate_run(&cfg, 17, r).unwrap();
                rec.latent.iter().any(|s| s.s1 == 100)
            })
            .count();
        assert!(connected > 50, "{connected}");
    }

    #[test]
    fn pr_percolates_later_than_er() {
        let er = ProcessConfig::new(Model::Er, 100, 1.0, 0.0);
        let pr = er.clone().with_model(Model::Pr);
        let half = |rec: &TrajectoryRecord| {
            rec.latent
                .iter()
                .position(|s| s.s1 >= 50)
                .unwrap_or(usize::MAX)
        };
        let later = (0..100)
            .filter(|&r| {
                half(&simulate_run(&pr, 21, r).unwrap()) > half(&simulate_run(&er, 22, r).unwrap())
            })
            .count();
        assert!(later > 50, "{later}");
    }

    #[test]
    fn irreducible_on_small_graph() {
        let cfg = ProcessConfig {
            retain_edges: true,
            ..ProcessConfig::new(Model::Pr, 4, 0.5, 0.5).with_steps(20_000)
        };
        let rec = simulate_run(&cfg, 10, 0).unwrap();
        let mut seen_present = HashSet::new();
        let mut seen_absent = HashSet::new();
        let all: Vec<Edge> = (0..4u32)
            .flat_map(|a| (a + 1..4).map(move |b| e(a, b)))
            .collect();
        for edges in rec.latent_edges.unwrap() {
            for x in &all {
                if edges.contains(x) {
                    seen_present.insert(*x);
                } else {
                    seen_absent.insert(*x);
                }
            }
        }
        assert_eq!(seen_present.len(), 6);
        assert_eq!(seen_absent.len(), 6);
    }

    #[test]
    fn indicator_is_time_homogeneous() {
        // Transition frequencies in the first and second half of a long run
        // agree within a two-sample z bound.
        let mut rng = run_rng(12, 0);
        let mut c = IndicatorChain::new(0.6, 0.25, false).unwrap();
        let half = 100_000;
        let mut counts = [[[0usize; 2]; 2]; 2];
        for t in 0..2 * half {
            let prev = c.state() as usize;
            let next = c.step(&mut rng) as usize;
            counts[t / half][prev][next] += 1;
        }
        for prev in 0..2 {
            let rate = |b: usize| {
                let row = counts[b][prev];
                (
                    row[1] as f64 / (row[0] + row[1]) as f64,
                    (row[0] + row[1]) as f64,
                )
            };
            let ((f0, n0), (f1, n1)) = (rate(0), rate(1));
            let pooled = (f0 * n0 + f1 * n1) / (n0 + n1);
            let se = (pooled * (1.0 - pooled) * (1.0 / n0 + 1.0 / n1)).sqrt();
            assert!((f0 - f1).abs() <= 3.0 * se);
        }
    }

    #[test]
    fn csv_layout() {
        let cfg = ProcessConfig::new(Model::Er, 4, 1.0, 0.0).with_steps(2);
        let rec = simulate_run(&cfg, 0, 0).unwrap();
        let mut buf = Vec::new();
        rec.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body[0], "t,m,s1,s2,m_obs,s1_obs,s2_obs");
        assert_eq!(body[1], "0,0,1,1,,,");
        assert_eq!(body[2], "1,1,2,1,,,");
        assert!(text.contains("# model=er\n"));
    }

    #[test]
    fn invalid_config_rejected() {
        let cfg = ProcessConfig::new(Model::Er, 1, 1.0, 0.0);
        assert!(simulate_run(&cfg, 0, 0).is_err());
        let cfg = ProcessConfig::new(Model::Er, 10, -0.1, 0.0);
        assert!(simulate_run(&cfg, 0, 0).is_err());
    }
}
