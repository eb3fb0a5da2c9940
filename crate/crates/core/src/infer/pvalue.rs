use std::str::FromStr;

use crate::error::{Error, Result};

/// Tail of the null distribution counted as "at least as extreme".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Greater,
    Less,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Greater => "greater",
            Direction::Less => "less",
        }
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greater" => Ok(Direction::Greater),
            "less" => Ok(Direction::Less),
            _ => Err(Error::UnknownName {
                what: "direction",
                value: s.to_string(),
            }),
        }
    }
}

/// `(1 + #{null draws at least as extreme as observed}) / (N + 1)`.
pub fn mc_pvalue(null: &[f64], observed: f64, direction: Direction) -> Result<f64> {
    if null.is_empty() {
        return Err(Error::EmptySample);
    }
    let extreme = null
        .iter()
        .filter(|&&x| match direction {
            Direction::Greater => x >= observed,
            Direction::Less => x <= observed,
        })
        .count();
    Ok((1 + extreme) as f64 / (null.len() + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        let null: Vec<f64> = (0..999).map(f64::from).collect();
        assert_eq!(
            mc_pvalue(&null, 5000.0, Direction::Greater).unwrap(),
            1.0 / 1000.0
        );
        assert_eq!(mc_pvalue(&null, -1.0, Direction::Greater).unwrap(), 1.0);
        assert_eq!(
            mc_pvalue(&null, -1.0, Direction::Less).unwrap(),
            1.0 / 1000.0
        );
        assert!(mc_pvalue(&[], 0.0, Direction::Less).is_err());
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = combinations(n - 1, k);
        for mut c in combinations(n - 1, k - 1) {
            c.push(n - 1);
            out.push(c);
        }
        out
    }

    #[test]
    fn agrees_with_exact_permutation_test() {
        // Difference-of-means statistic on a pooled 8-value sample split 4/4.
        let pooled = [3.1, 0.4, 2.2, 5.0, 1.7, 4.4, 0.9, 3.8];
        let stat = |idx: &[usize]| {
            let a: f64 = idx.iter().map(|&i| pooled[i]).sum::<f64>() / 4.0;
            let b: f64 = (0..8)
                .filter(|i| !idx.contains(i))
                .map(|i| pooled[i])
                .sum::<f64>()
                / 4.0;
            a - b
        };
        let splits = combinations(8, 4);
        assert_eq!(splits.len(), 70);
        for observed_split in [vec![3, 5, 7, 0], vec![1, 6, 4, 2], vec![0, 2, 4, 6]] {
            let mut sorted = observed_split.clone();
            sorted.sort_unstable();
            let obs = stat(&sorted);
            let all: Vec<f64> = splits.iter().map(|s| stat(s)).collect();
            for dir in [Direction::Greater, Direction::Less] {
                let exact = all
                    .iter()
                    .filter(|&&x| match dir {
                        Direction::Greater => x >= obs,
                        Direction::Less => x <= obs,
                    })
                    .count() as f64
                    / 70.0;
                let others: Vec<f64> = splits
                    .iter()
                    .filter(|s| **s != sorted)
                    .map(|s| stat(s))
                    .collect();
                assert_eq!(others.len(), 69);
                let mc = mc_pvalue(&others, obs, dir).unwrap();
                assert!((mc - exact).abs() < 1e-12, "{mc} vs {exact}");
            }
        }
    }
}
