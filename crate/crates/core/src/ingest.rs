//! Parsing of externally observed trajectories.
//!
//! Two layouts are accepted:
//!
//! * a summary CSV with at least the columns `t,s1,s2` (optionally `m`, and
//!   the `m_obs,s1_obs,s2_obs` columns written by the simulator, which are
//!   preferred when filled);
//! * per-step edge lists, one `u v` pair per line, steps separated by a blank
//!   line. Each additional consecutive blank line is an empty step.
//!
//! `#` lines are comments; `# n=<count>` supplies the vertex count, which
//! can also be passed explicitly.

use std::collections::{HashMap, HashSet};

use crate::dsu::DisjointSets;
use crate::dyngraph::{parse_edge_line, Edge, MAX_VERTICES};
use crate::error::{Error, Result};
use crate::stats::{GccSeries, Normalization};

#[derive(Clone, Debug, PartialEq)]
pub struct IngestedTrajectory {
    pub n: usize,
    /// Edge counts, when the input carries them.
    pub m: Option<Vec<usize>>,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub metadata: HashMap<String, String>,
}

impl IngestedTrajectory {
    pub fn len(&self) -> usize {
        self.s1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s1.is_empty()
    }

    pub fn gcc_series(&self, normalization: Normalization) -> GccSeries {
        GccSeries::from_s1(self.s1.iter().copied(), self.n, normalization)
    }
}

fn metadata(text: &str) -> HashMap<String, String> {
    text.lines()
        .filter_map(|l| l.trim_start().strip_prefix('#'))
        .filter_map(|body| {
            let (k, v) = body.split_once('=')?;
            Some((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

/// Parses either layout. `n` overrides any `# n=` metadata.
pub fn parse_trajectory(text: &str, n: Option<usize>) -> Result<IngestedTrajectory> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| Error::parse(0, "empty trajectory"))?;
    let meta = metadata(text);
    let n = match n {
        Some(n) => n,
        None => match meta.get("n") {
            Some(v) => v
                .parse()
                .map_err(|_| Error::parse(0, format!("bad vertex count {v:?} in metadata")))?,
            None => {
                return Err(Error::parse(
                    0,
                    "vertex count unknown: add `# n=<count>` or pass it explicitly",
                ))
            }
        },
    };
    if n < 2 {
        return Err(Error::TooFewVertices(n));
    }
    if n > MAX_VERTICES {
        return Err(Error::parse(
            0,
            format!("vertex count {n} exceeds {MAX_VERTICES}"),
        ));
    }
    let mut out = if first.contains(',') {
        parse_summary_csv(text, n)?
    } else {
        parse_edge_blocks(text, n)?
    };
    if out.len() < 2 {
        return Err(Error::parse(
            0,
            format!("trajectory has {} step(s); at least 2 needed", out.len()),
        ));
    }
    out.metadata = meta;
    Ok(out)
}

/// Two largest component sizes, touching only the endpoints that appear.
fn top_two_sparse(n: usize, edges: &[Edge]) -> (usize, usize) {
    let mut index: HashMap<u32, u32> = HashMap::new();
    let mut pairs = Vec::with_capacity(edges.len());
    for e in edges {
        let mut id = |v: u32| {
            let next = index.len() as u32;
            *index.entry(v).or_insert(next)
        };
        pairs.push((id(e.lo()), id(e.hi())));
    }
    let mut dsu = DisjointSets::new(index.len());
    for (a, b) in pairs {
        dsu.union(a, b);
    }
    let (mut s1, mut s2) = dsu.top_two();
    let singletons = n - index.len();
    for _ in 0..singletons.min(2) {
        if s1 == 0 {
            s1 = 1;
        } else if s2 == 0 {
            s2 = 1;
        }
    }
    (s1, s2)
}

fn parse_edge_blocks(text: &str, n: usize) -> Result<IngestedTrajectory> {
    let mut blocks: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
    let mut last_content = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            blocks.push(Vec::new());
        } else {
            blocks.last_mut().expect("nonempty").push((i + 1, line));
            last_content = blocks.len();
        }
    }
    blocks.truncate(last_content);

    let mut m = Vec::with_capacity(blocks.len());
    let mut s1 = Vec::with_capacity(blocks.len());
    let mut s2 = Vec::with_capacity(blocks.len());
    for block in blocks {
        let mut seen = HashSet::with_capacity(block.len());
        let mut edges = Vec::with_capacity(block.len());
        for (lineno, line) in block {
            let e = parse_edge_line(line, lineno, Some(n))?;
            if !seen.insert(e) {
                return Err(Error::parse(lineno, format!("duplicate edge {e}")));
            }
            edges.push(e);
        }
        let (a, b) = top_two_sparse(n, &edges);
        m.push(edges.len());
        s1.push(a);
        s2.push(b);
    }
    Ok(IngestedTrajectory {
        n,
        m: Some(m),
        s1,
        s2,
        metadata: HashMap::new(),
    })
}

fn parse_summary_csv(text: &str, n: usize) -> Result<IngestedTrajectory> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (Some(ct), Some(c1), Some(c2)) = (col("t"), col("s1"), col("s2")) else {
        return Err(Error::parse(1, "summary CSV needs columns t, s1, s2"));
    };
    let cm = col("m");
    let obs = (col("s1_obs"), col("s2_obs"), col("m_obs"));

    struct Row {
        m: Option<usize>,
        s1: usize,
        s2: usize,
        obs: Option<(usize, usize, Option<usize>)>,
    }

    let mut rows: Vec<Row> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let lineno = rec.position().map_or(i + 2, |p| p.line() as usize);
        let field = |c: usize| -> Result<Option<usize>> {
            match rec.get(c).unwrap_or("") {
                "" => Ok(None),
                s => s
                    .parse()
                    .map(Some)
                    .map_err(|_| Error::parse(lineno, format!("bad integer {s:?}"))),
            }
        };
        let required = |c: usize, name: &str| -> Result<usize> {
            field(c)?.ok_or_else(|| Error::parse(lineno, format!("missing {name}")))
        };
        let t = required(ct, "t")?;
        if t != rows.len() {
            return Err(Error::parse(
                lineno,
                format!("expected t={}, found t={t}", rows.len()),
            ));
        }
        let observed = match obs {
            (Some(a), Some(b), mc) => match (field(a)?, field(b)?) {
                (Some(x), Some(y)) => Some((x, y, mc.map(field).transpose()?.flatten())),
                (None, None) => None,
                _ => return Err(Error::parse(lineno, "partially filled observed columns")),
            },
            _ => None,
        };
        rows.push(Row {
            m: cm.map(field).transpose()?.flatten(),
            s1: required(c1, "s1")?,
            s2: required(c2, "s2")?,
            obs: observed,
        });
    }

    let use_observed = !rows.is_empty() && rows.iter().all(|r| r.obs.is_some());
    if !use_observed && rows.iter().any(|r| r.obs.is_some()) {
        return Err(Error::parse(0, "observed columns filled on some rows only"));
    }
    let mut out = IngestedTrajectory {
        n,
        m: None,
        s1: Vec::with_capacity(rows.len()),
        s2: Vec::with_capacity(rows.len()),
        metadata: HashMap::new(),
    };
    let mut m = Vec::with_capacity(rows.len());
    for (t, r) in rows.iter().enumerate() {
        let (s1, s2, mm) = match r.obs {
            Some((a, b, mm)) if use_observed => (a, b, mm),
            _ => (r.s1, r.s2, r.m),
        };
        if s1 == 0 || s1 > n || s2 > s1 || s1 + s2 > n {
            return Err(Error::parse(
                0,
                format!("inconsistent component sizes s1={s1}, s2={s2} for n={n} at t={t}"),
            ));
        }
        out.s1.push(s1);
        out.s2.push(s2);
        if let Some(v) = mm {
            m.push(v);
        }
    }
    if m.len() == rows.len() {
        out.m = Some(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseParams;
    use crate::process::{simulate_run, Model, ProcessConfig};

    #[test]
    fn sparse_summary_matches_dense() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let n = rng.random_range(2..30usize);
            let k = rng.random_range(0..2 * n);
            let mut edges: Vec<Edge> = (0..k)
                .filter_map(|_| {
                    Edge::new(rng.random_range(0..n as u32), rng.random_range(0..n as u32)).ok()
                })
                .collect();
            edges.sort();
            edges.dedup();
            let dense = crate::noise::summarize_edges(n, &edges);
            assert_eq!(top_two_sparse(n, &edges), (dense.s1, dense.s2));
        }
    }

    #[test]
    fn edge_blocks() {
        let text = "# n=4\n0 1\n\n0 1\n2 3\n\n\n0 1\n1 2\n2 3\n";
        let t = parse_trajectory(text, None).unwrap();
        assert_eq!(t.n, 4);
        assert_eq!(t.m, Some(vec![1, 2, 0, 3]));
        assert_eq!(t.s1, vec![2, 2, 1, 4]);
        assert_eq!(t.s2, vec![1, 2, 1, 0]);
    }

    #[test]
    fn leading_empty_step_and_trailing_blanks() {
        let t = parse_trajectory("\n0 1\n\n\n", Some(3)).unwrap();
        assert_eq!(t.m, Some(vec![0, 1]));
    }

    #[test]
    fn summary_csv() {
        let text = "# n=5\nt,s1,s2\n0,1,1\n1,2,1\n2,5,0\n";
        let t = parse_trajectory(text, None).unwrap();
        assert_eq!(t.s1, vec![1, 2, 5]);
        assert_eq!(t.m, None);
    }

    #[test]
    fn simulator_output_roundtrips() {
        let cfg = ProcessConfig::new(Model::Pr, 20, 0.9, 0.1)
            .with_steps(50)
            .with_noise(Some(NoiseParams::new(0.01, 0.02).unwrap()));
        let rec = simulate_run(&cfg, 3, 0).unwrap();
        let mut buf = Vec::new();
        rec.write_csv(&mut buf).unwrap();
        let t = parse_trajectory(std::str::from_utf8(&buf).unwrap(), None).unwrap();
        let obs = rec.observed.unwrap();
        assert_eq!(t.s1, obs.iter().map(|s| s.s1).collect::<Vec<_>>());
        assert_eq!(t.m, Some(obs.iter().map(|s| s.m).collect()));
        assert_eq!(t.metadata.get("model").map(String::as_str), Some("pr"));

        let clean = simulate_run(&cfg.clone().with_noise(None), 3, 0).unwrap();
        let mut buf = Vec::new();
        clean.write_csv(&mut buf).unwrap();
        let t = parse_trajectory(std::str::from_utf8(&buf).unwrap(), None).unwrap();
        assert_eq!(t.s2, clean.latent.iter().map(|s| s.s2).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_trajectory("", Some(4)).is_err());
        assert!(parse_trajectory("# only comments\n", Some(4)).is_err());
        assert!(parse_trajectory("0 1\n\n1 2\n", None).is_err(), "n unknown");
        assert!(parse_trajectory("0 1\n", Some(4)).is_err(), "one step");
        assert!(
            parse_trajectory("0 1\n0 1\n\n1 2\n", Some(4)).is_err(),
            "duplicate edge"
        );
        assert!(
            parse_trajectory("0 9\n\n1 2\n", Some(4)).is_err(),
            "vertex out of range"
        );
        assert!(
            parse_trajectory("t,s1\n0,1\n1,1\n", Some(4)).is_err(),
            "missing column"
        );
        assert!(
            parse_trajectory("t,s1,s2\n0,1,1\n2,2,1\n", Some(4)).is_err(),
            "gap in t"
        );
        assert!(
            parse_trajectory("t,s1,s2\n0,1,1\n1,3,3\n", Some(4)).is_err(),
            "sizes exceed n"
        );
        assert!(parse_trajectory("t,s1,s2\n0,1,1\n1,x,1\n", Some(4)).is_err());
        assert!(parse_trajectory("# n=1\nt,s1,s2\n0,1,0\n1,1,0\n", None).is_err());
    }
}
