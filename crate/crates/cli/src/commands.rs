use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use noisyperc::closedform::{
    latent_transition_given_y, latent_transition_marginal, observed_marginal_consistent,
    observed_marginal_scaled, observed_transition_consistent, observed_transition_scaled,
    TransitionTable,
};
use noisyperc::infer::{
    auc, derive_seed, empirical_auc, mc_pvalue, roc_from_samples, sample_statistics,
    simulate_batch, statistic_source, Direction, Kde, StatisticSample, GRID_POINTS,
};
use noisyperc::ingest::parse_trajectory;
use noisyperc::stats::{max_second, mean_curve, quantile, quantile_difference};
use noisyperc::{Error, Model, ProcessConfig, StatisticKind};

use crate::RunSpec;

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).with_context(|| format!("creating directory {}", path.display()))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn echo_spec<W: Write>(mut w: W, spec: &RunSpec, cfg: &ProcessConfig) -> io::Result<()> {
    writeln!(w, "# n={}", cfg.n)?;
    writeln!(w, "# T={}", cfg.steps)?;
    writeln!(
        w,
        "# q={}",
        spec.q.map_or_else(|| "1-p".to_string(), |q| q.to_string())
    )?;
    writeln!(w, "# initial_y={}", u8::from(cfg.initial_y))?;
    writeln!(w, "# runs={}", spec.runs)?;
    writeln!(w, "# seed={}", spec.seed)?;
    writeln!(w, "# normalization={}", spec.opts.normalization.as_str())?;
    writeln!(
        w,
        "# quantiles={},{}",
        spec.opts.quantiles.0, spec.opts.quantiles.1
    )?;
    writeln!(w, "# drop_censored={}", u8::from(spec.opts.drop_censored))
}

/// `runs` trajectory files plus `mean_curve.csv`.
pub fn simulate(spec: &RunSpec, out: &Path) -> Result<()> {
    let cfg = spec.config(spec.single_point()?)?;
    create_dir(out)?;
    let records = simulate_batch(&cfg, spec.runs, spec.seed)?;
    let width = (spec.runs - 1).to_string().len().max(4);
    for rec in &records {
        let path = out.join(format!("run_{:0width$}.csv", rec.run));
        let mut w = create(&path)?;
        rec.write_csv(&mut w)?;
        w.flush()?;
    }
    let curve = mean_curve(&records, statistic_source(&cfg), spec.opts.normalization)?;
    let mut w = create(&out.join("mean_curve.csv"))?;
    writeln!(w, "# model={}", cfg.model)?;
    writeln!(w, "# p={}", cfg.p)?;
    writeln!(w, "# alpha={}", cfg.alpha())?;
    writeln!(w, "# beta={}", cfg.beta())?;
    writeln!(
        w,
        "# source={}",
        if cfg.noise.is_some() {
            "observed"
        } else {
            "latent"
        }
    )?;
    echo_spec(&mut w, spec, &cfg)?;
    writeln!(w, "t,gcc,s2")?;
    for (t, (g, s2)) in curve.gcc.iter().zip(&curve.s2).enumerate() {
        writeln!(w, "{t},{g},{s2}")?;
    }
    w.flush()?;
    Ok(())
}

fn point_tag((p, alpha, beta): (f64, f64, f64)) -> String {
    format!("p{p}_a{alpha}_b{beta}")
}

/// Smoothed ER and PR densities on one shared grid.
fn write_densities(path: &Path, neg: &Kde, pos: &Kde) -> Result<()> {
    let (a, b) = (neg.support(), pos.support());
    let (lo, hi) = (a.0.min(b.0), a.1.max(b.1));
    let mut w = create(path)?;
    writeln!(w, "# er_bandwidth={}", neg.bandwidth())?;
    writeln!(w, "# pr_bandwidth={}", pos.bandwidth())?;
    writeln!(w, "x,er,pr")?;
    for i in 0..GRID_POINTS {
        let x = lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64;
        writeln!(w, "{x},{},{}", neg.density(x), pos.density(x))?;
    }
    w.flush()?;
    Ok(())
}

fn write_sample(path: &Path, sample: &StatisticSample, tag: &str) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "# point={tag}")?;
    sample.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

const AUC_HEADER: &str = "p,alpha,beta,kind,auc,n_runs,seed";

/// Per sweep point: both models, both statistics, the smoothed and the
/// empirical ROC path.
pub fn compare(spec: &RunSpec, out: &Path) -> Result<()> {
    let points = spec.points();
    if points.is_empty() {
        bail!("empty sweep");
    }
    for sub in ["roc", "samples", "density"] {
        create_dir(&out.join(sub))?;
    }
    let mut kde_rows = Vec::new();
    let mut emp_rows = Vec::new();
    let mut last_cfg = None;
    for point in points {
        let (p, alpha, beta) = point;
        let base = spec.config(point)?;
        let tag = point_tag(point);
        let er = sample_statistics(
            &base.clone().with_model(Model::Er),
            &StatisticKind::ALL,
            spec.runs,
            derive_seed(spec.seed, Model::Er.as_str()),
            &spec.opts,
        )
        .with_context(|| format!("sampling ER at {tag}"))?;
        let pr = sample_statistics(
            &base.clone().with_model(Model::Pr),
            &StatisticKind::ALL,
            spec.runs,
            derive_seed(spec.seed, Model::Pr.as_str()),
            &spec.opts,
        )
        .with_context(|| format!("sampling PR at {tag}"))?;
        for (neg, pos) in er.iter().zip(&pr) {
            let kind = neg.kind;
            let orientation = kind.orientation();
            let n_runs = neg.len().min(pos.len());
            write_sample(
                &out.join("samples").join(format!("er_{kind}_{tag}.csv")),
                neg,
                &tag,
            )?;
            write_sample(
                &out.join("samples").join(format!("pr_{kind}_{tag}.csv")),
                pos,
                &tag,
            )?;

            let empirical = roc_from_samples(&neg.values, &pos.values, orientation)?;
            let mut w = create(&out.join("roc").join(format!("{kind}_{tag}_empirical.csv")))?;
            empirical.write_csv(&mut w)?;
            w.flush()?;
            let emp_auc = empirical_auc(&neg.values, &pos.values, orientation)?;
            emp_rows.push(format!(
                "{p},{alpha},{beta},{kind},{emp_auc},{n_runs},{}",
                spec.seed
            ));

            let smoothed = match (Kde::new(&neg.values, None), Kde::new(&pos.values, None)) {
                (Ok(a), Ok(b)) => Some((a, b)),
                (Err(Error::BandwidthUndefined), _) | (_, Err(Error::BandwidthUndefined)) => None,
                (Err(e), _) | (_, Err(e)) => return Err(e.into()),
            };
            let kde_auc = match smoothed {
                Some((a, b)) => {
                    write_densities(
                        &out.join("density").join(format!("{kind}_{tag}.csv")),
                        &a,
                        &b,
                    )?;
                    let curve =
                        noisyperc::infer::roc_from_densities(&a, &b, orientation, GRID_POINTS);
                    let mut w = create(&out.join("roc").join(format!("{kind}_{tag}_kde.csv")))?;
                    curve.write_csv(&mut w)?;
                    w.flush()?;
                    auc(&curve)
                }
                None => {
                    eprintln!("warning: {kind} at {tag} has a constant sample; smoothed AUC reported as NaN");
                    f64::NAN
                }
            };
            kde_rows.push(format!(
                "{p},{alpha},{beta},{kind},{kde_auc},{n_runs},{}",
                spec.seed
            ));
        }
        last_cfg = Some(base);
    }
    let cfg = last_cfg.expect("nonempty sweep");
    for (name, path, rows) in [
        ("kde", "auc.csv", &kde_rows),
        ("empirical", "auc_empirical.csv", &emp_rows),
    ] {
        let mut w = create(&out.join(path))?;
        writeln!(w, "# path={name}")?;
        echo_spec(&mut w, spec, &cfg)?;
        writeln!(w, "{AUC_HEADER}")?;
        for row in rows {
            writeln!(w, "{row}")?;
        }
        w.flush()?;
    }
    Ok(())
}

fn write_table<W: Write>(mut w: W, name: &str, table: &TransitionTable) -> io::Result<()> {
    for from in 0..2 {
        match table.rows[from] {
            Some([a, b]) => {
                let sum = a + b;
                let stochastic = (sum - 1.0).abs() <= 1e-12;
                writeln!(w, "{name},{from},{a},{b},{sum},{stochastic}")?;
            }
            None => writeln!(w, "{name},{from},undefined,undefined,undefined,undefined")?,
        }
    }
    Ok(())
}

/// The five single-edge tables, one CSV row per (table, current status).
pub fn formulas(
    n: usize,
    m: usize,
    p: f64,
    alpha: f64,
    beta: f64,
    out: Option<&Path>,
) -> Result<()> {
    let tables = [
        ("latent_given_y0", latent_transition_given_y(n, m, false)?),
        ("latent_given_y1", latent_transition_given_y(n, m, true)?),
        ("latent_marginal", latent_transition_marginal(n, m, p)?),
        (
            "observed_scaled",
            observed_transition_scaled(n, m, p, alpha, beta)?,
        ),
        (
            "observed_consistent",
            observed_transition_consistent(n, m, p, alpha, beta)?,
        ),
    ];
    let mut w = output(out)?;
    writeln!(w, "# n={n}")?;
    writeln!(w, "# m={m}")?;
    writeln!(w, "# p={p}")?;
    writeln!(w, "# alpha={alpha}")?;
    writeln!(w, "# beta={beta}")?;
    writeln!(w, "table,from,to0,to1,row_sum,row_stochastic")?;
    for (name, table) in &tables {
        write_table(&mut w, name, table)?;
    }
    match observed_marginal_scaled(n, m, p, alpha, beta) {
        Ok((a, b)) => writeln!(w, "# observed_marginal_scaled={a},{b} (sum {})", a + b)?,
        Err(e) => writeln!(w, "# observed_marginal_scaled=undefined ({e})")?,
    }
    let (a, b) = observed_marginal_consistent(n, m, p, alpha, beta)?;
    writeln!(w, "# observed_marginal_consistent={a},{b} (sum {})", a + b)?;
    let scaled = &tables[3].1;
    if !scaled.row_stochastic() {
        writeln!(w, "# warning: observed_scaled rows do not sum to 1")?;
        eprintln!("warning: observed_scaled rows do not sum to 1; observed_consistent is the row-stochastic version");
    }
    w.flush()?;
    Ok(())
}

/// Tail that counts as evidence against `null` for `kind`: a larger second
/// component and a shorter transition point towards PR.
pub fn null_direction(null: Model, kind: StatisticKind) -> Direction {
    match (null, kind) {
        (Model::Er, StatisticKind::Sec) | (Model::Pr, StatisticKind::Qd) => Direction::Greater,
        (Model::Er, StatisticKind::Qd) | (Model::Pr, StatisticKind::Sec) => Direction::Less,
    }
}

/// Statistics of an external trajectory and their Monte-Carlo p-values
/// under both null models.
pub fn ingest(spec: &RunSpec, n: Option<usize>, input: &Path, out: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let traj =
        parse_trajectory(&text, n).with_context(|| format!("parsing {}", input.display()))?;
    let steps = traj.len() - 1;
    if let Some(s) = spec.steps.filter(|&s| s != steps) {
        bail!("--steps {s} does not match the trajectory ({steps} steps)");
    }
    let mut spec = spec.clone();
    spec.n = traj.n;
    spec.steps = Some(steps);
    let base = spec.config(spec.single_point()?)?;

    let series = traj.gcc_series(spec.opts.normalization);
    let (x1, x2) = spec.opts.quantiles;
    let qd = quantile_difference(&series, x1, x2)?;
    let observed = [
        (StatisticKind::Qd, qd.value),
        (
            StatisticKind::Sec,
            max_second(traj.s2.iter().copied()) as f64,
        ),
    ];

    let mut w = output(out)?;
    writeln!(w, "# input={}", input.display())?;
    writeln!(w, "# p={}", base.p)?;
    writeln!(w, "# alpha={}", base.alpha())?;
    writeln!(w, "# beta={}", base.beta())?;
    echo_spec(&mut w, &spec, &base)?;
    for x in [x1, x2] {
        let q = quantile(&series, x)?;
        writeln!(
            w,
            "# Q({x})={}{}",
            q.t,
            if q.censored { " censored" } else { "" }
        )?;
    }
    writeln!(w, "null_model,kind,observed,direction,p_value,n_runs,seed")?;
    for null in [Model::Er, Model::Pr] {
        let seed = derive_seed(spec.seed, null.as_str());
        let samples = sample_statistics(
            &base.clone().with_model(null),
            &StatisticKind::ALL,
            spec.runs,
            seed,
            &spec.opts,
        )
        .with_context(|| format!("sampling the {null} null"))?;
        for (sample, &(kind, value)) in samples.iter().zip(&observed) {
            let direction = null_direction(null, kind);
            let pv = mc_pvalue(&sample.values, value, direction)?;
            writeln!(
                w,
                "{null},{kind},{value},{},{pv},{},{}",
                direction.as_str(),
                sample.len(),
                spec.seed
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_flip_with_the_null() {
        for kind in StatisticKind::ALL {
            assert_ne!(
                null_direction(Model::Er, kind),
                null_direction(Model::Pr, kind)
            );
        }
        assert_eq!(
            null_direction(Model::Er, StatisticKind::Sec),
            Direction::Greater
        );
        assert_eq!(
            null_direction(Model::Er, StatisticKind::Qd),
            Direction::Less
        );
    }
}
