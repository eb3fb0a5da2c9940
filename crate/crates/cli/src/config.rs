//! Optional key-value run configuration (TOML). Every key mirrors a flag of
//! the same name; flags given on the command line take precedence.

use serde::Deserialize;

/// A scalar or a list, so sweep keys accept both `p = 1.0` and
/// `p = [0.7, 0.8]`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    pub fn into_vec(self) -> Vec<f64> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub steps: Option<usize>,
    pub p: Option<OneOrMany>,
    pub q: Option<f64>,
    pub alpha: Option<OneOrMany>,
    pub beta: Option<OneOrMany>,
    pub initial_y: Option<bool>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub normalization: Option<String>,
    pub quantiles: Option<[f64; 2]>,
    pub drop_censored: Option<bool>,
}

pub fn parse_config(text: &str) -> Result<FileConfig, toml::de::Error> {
    toml::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_and_lists() {
        let c =
            parse_config("n = 50\np = [0.7, 0.8]\nalpha = 0.01\nquantiles = [0.1, 0.9]\n").unwrap();
        assert_eq!(c.n, Some(50));
        assert_eq!(c.p.unwrap().into_vec(), vec![0.7, 0.8]);
        assert_eq!(c.alpha.unwrap().into_vec(), vec![0.01]);
        assert_eq!(c.quantiles, Some([0.1, 0.9]));
    }

    #[test]
    fn integer_rates_accepted() {
        let c = parse_config("p = 1\nq = 0\n").unwrap();
        assert_eq!(c.p, Some(OneOrMany::One(1.0)));
        assert_eq!(c.q, Some(0.0));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(parse_config("n = 5\nbogus = 1\n").is_err());
        assert!(parse_config("n = -5\n").is_err());
        assert!(parse_config("n = \n").is_err());
    }
}
