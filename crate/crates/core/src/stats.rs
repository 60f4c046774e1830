//! Monte-Carlo summaries: frequency estimates with normal-approximation
//! confidence intervals at a fixed 99% level.

/// z-value for a two-sided 99% normal interval.
pub const Z_99: f64 = 2.575_829_303_548_901;

/// Frequency estimate from `successes` out of `trials`.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct FreqEstimate {
    pub estimate: f64,
    /// Half-width of the 99% CI (0 when the empirical variance is 0).
    pub ci_half_width: f64,
    pub successes: u64,
    pub trials: u64,
}

impl FreqEstimate {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        assert!(trials > 0, "trials must be positive");
        let p = successes as f64 / trials as f64;
        let half = Z_99 * (p * (1.0 - p) / trials as f64).sqrt();
        FreqEstimate {
            estimate: p,
            ci_half_width: half,
            successes,
            trials,
        }
    }

    /// 3-sigma agreement check against a reference probability.
    pub fn within_3_sigma_of(&self, p: f64) -> bool {
        let sigma = (p * (1.0 - p) / self.trials as f64).sqrt();
        (self.estimate - p).abs() <= 3.0 * sigma.max(f64::EPSILON)
    }
}

/// Mean and 99% CI of a sample of reals.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub ci_half_width: f64,
    pub trials: u64,
}

impl MeanEstimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        assert!(!samples.is_empty());
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var =
            samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0).max(1.0);
        let half = Z_99 * (var / n).sqrt();
        MeanEstimate {
            mean,
            ci_half_width: half,
            trials: samples.len() as u64,
        }
    }
}
