use crate::error::{Error, Result};

/// Grid resolution for [`SmoothedDensity`] and density-path ROC curves.
pub const GRID_POINTS: usize = 512;
/// Grid padding beyond the sample range, in bandwidths.
pub const PAD_BANDWIDTHS: f64 = 3.0;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Type-7 (linear interpolation) quantile of sorted data.
fn sorted_quantile(sorted: &[f64], prob: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * prob;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// `0.9 * min(sd, IQR / 1.34) * N^(-1/5)`. Falls back to the standard
/// deviation when the IQR is zero.
pub fn silverman_bandwidth(sample: &[f64]) -> Result<f64> {
    if sample.len() < 2 {
        return Err(Error::BandwidthUndefined);
    }
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let sd = (sample.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    if !(sd > 0.0) {
        return Err(Error::BandwidthUndefined);
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = sorted_quantile(&sorted, 0.75) - sorted_quantile(&sorted, 0.25);
    let robust = iqr / 1.34;
    let scale = if robust > 0.0 { sd.min(robust) } else { sd };
    Ok(0.9 * scale * n.powf(-0.2))
}

/// Gaussian-kernel density estimate.
#[derive(Clone, Debug)]
pub struct Kde {
    points: Vec<f64>,
    bandwidth: f64,
}

impl Kde {
    pub fn new(sample: &[f64], bandwidth: Option<f64>) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        let bandwidth = match bandwidth {
            Some(h) if h > 0.0 && h.is_finite() => h,
            Some(h) => return Err(Error::InvalidBandwidth(h)),
            None => silverman_bandwidth(sample)?,
        };
        Ok(Kde {
            points: sample.to_vec(),
            bandwidth,
        })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn density(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        let sum: f64 = self
            .points
            .iter()
            .map(|&p| {
                let z = (x - p) / h;
                (-0.5 * z * z).exp()
            })
            .sum();
        sum * INV_SQRT_2PI / (h * self.points.len() as f64)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        let sum: f64 = self
            .points
            .iter()
            .map(|&p| std_normal_cdf((x - p) / h))
            .sum();
        sum / self.points.len() as f64
    }

    /// Sample range padded by [`PAD_BANDWIDTHS`] bandwidths.
    pub fn support(&self) -> (f64, f64) {
        let lo = self.points.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self
            .points
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let pad = PAD_BANDWIDTHS * self.bandwidth;
        (lo - pad, hi + pad)
    }

    pub fn smooth(&self, grid_points: usize) -> SmoothedDensity {
        let (lo, hi) = self.support();
        let grid = linspace(lo, hi, grid_points.max(2));
        let density = grid.iter().map(|&x| self.density(x)).collect();
        SmoothedDensity {
            bandwidth: self.bandwidth,
            grid,
            density,
        }
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    let step = (hi - lo) / (k - 1) as f64;
    (0..k)
        .map(|i| if i + 1 == k { hi } else { lo + step * i as f64 })
        .collect()
}

/// Density evaluated on an evenly spaced grid.
#[derive(Clone, Debug)]
pub struct SmoothedDensity {
    pub bandwidth: f64,
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
}

impl SmoothedDensity {
    /// Trapezoidal integral over the grid.
    pub fn integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }
}

/// Smoothed density on the default [`GRID_POINTS`] grid.
pub fn kde(sample: &[f64], bandwidth: Option<f64>) -> Result<SmoothedDensity> {
    Ok(Kde::new(sample, bandwidth)?.smooth(GRID_POINTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::run_rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn symmetric_sample_gives_symmetric_density() {
        let k = Kde::new(&[-1.0, 1.0], None).unwrap();
        for x in [0.1, 0.5, 1.0, 2.3] {
            assert!((k.density(x) - k.density(-x)).abs() < 1e-12);
        }
    }

    #[test]
    fn silverman_reference_value() {
        // sd = sqrt(2.5), IQR = 2 (quantiles 2 and 4), N = 5.
        let h = silverman_bandwidth(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let expect = 0.9 * (2.0_f64 / 1.34).min(2.5_f64.sqrt()) * 5.0_f64.powf(-0.2);
        assert!((h - expect).abs() < 1e-15);
    }

    #[test]
    fn grid_integrates_to_one() {
        let mut rng = run_rng(1, 0);
        let normal = Normal::new(3.0, 2.0).unwrap();
        let sample: Vec<f64> = (0..500).map(|_| normal.sample(&mut rng)).collect();
        let d = kde(&sample, None).unwrap();
        let total = d.integral();
        assert!((0.99..=1.01).contains(&total), "{total}");
        assert!(d.density.iter().all(|&v| v >= 0.0));
        assert_eq!(d.grid.len(), GRID_POINTS);

        let small = kde(&[0.0, 10.0, 10.5], Some(0.5)).unwrap();
        assert!((0.99..=1.01).contains(&small.integral()));
    }

    #[test]
    fn horizontal_rescaling() {
        let sample = [0.3, 1.2, 2.0, 4.4];
        let doubled: Vec<f64> = sample.iter().map(|x| 2.0 * x).collect();
        let a = Kde::new(&sample, Some(0.7)).unwrap();
        let b = Kde::new(&doubled, Some(1.4)).unwrap();
        for x in [-1.0, 0.5, 2.0, 3.7] {
            assert!((b.density(2.0 * x) - 0.5 * a.density(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn cdf_matches_integrated_density() {
        let k = Kde::new(&[0.0, 1.0, 5.0], Some(0.8)).unwrap();
        let (lo, _) = k.support();
        let x = 1.7;
        let grid = linspace(lo - 5.0, x, 20_001);
        let integral: f64 = grid
            .windows(2)
            .map(|w| 0.5 * (w[1] - w[0]) * (k.density(w[0]) + k.density(w[1])))
            .sum();
        assert!((integral - k.cdf(x)).abs() < 1e-7);
    }

    #[test]
    fn bandwidth_errors() {
        assert!(matches!(
            Kde::new(&[2.0, 2.0, 2.0], None),
            Err(Error::BandwidthUndefined)
        ));
        assert!(matches!(
            Kde::new(&[2.0], None),
            Err(Error::BandwidthUndefined)
        ));
        assert!(Kde::new(&[2.0, 2.0], Some(0.5)).is_ok());
        assert!(matches!(
            Kde::new(&[1.0, 2.0], Some(0.0)),
            Err(Error::InvalidBandwidth(_))
        ));
        assert!(matches!(Kde::new(&[], Some(1.0)), Err(Error::EmptySample)));
    }

    #[test]
    fn zero_iqr_falls_back_to_sd() {
        let sample = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 5.0];
        let h = silverman_bandwidth(&sample).unwrap();
        assert!(h > 0.0);
    }
}
