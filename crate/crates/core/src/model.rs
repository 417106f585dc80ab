//! The Gaussian model, observation datasets and synthetic data generation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::error::{Error, Result};

/// Three unknowns need at least three observations.
pub const MIN_POINTS: usize = 3;

/// Amplitude, mean and standard deviation of a Gaussian function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianParams {
    amplitude: f64,
    mean: f64,
    sigma: f64,
}

impl GaussianParams {
    /// Rejects non-finite values and non-positive amplitude or width.
    pub fn new(amplitude: f64, mean: f64, sigma: f64) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(Error::InvalidInput(format!(
                "amplitude must be positive and finite, got {amplitude}"
            )));
        }
        if !mean.is_finite() {
            return Err(Error::InvalidInput(format!(
                "mean must be finite, got {mean}"
            )));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidInput(format!(
                "sigma must be positive and finite, got {sigma}"
            )));
        }
        Ok(Self {
            amplitude,
            mean,
            sigma,
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Value of the Gaussian at `x`.
    pub fn value_at(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.sigma;
        self.amplitude * (-0.5 * z * z).exp()
    }

    /// Same curve moved `offset` along the x axis.
    pub fn shifted(&self, offset: f64) -> Result<Self> {
        Self::new(self.amplitude, self.mean + offset, self.sigma)
    }
}

/// Evaluates the Gaussian element-wise over `xs`.
pub fn evaluate(params: &GaussianParams, xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|&x| params.value_at(x)).collect()
}

/// Paired observations `(x_n, y_n)` with strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Dataset {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidInput(format!(
                "xs and ys differ in length ({} vs {})",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < MIN_POINTS {
            return Err(Error::TooFewPoints {
                needed: MIN_POINTS,
                got: xs.len(),
            });
        }
        if let Some(i) = xs.iter().chain(&ys).position(|v| !v.is_finite()) {
            let (which, idx) = if i < xs.len() {
                ("x", i)
            } else {
                ("y", i - xs.len())
            };
            return Err(Error::InvalidInput(format!(
                "{which} value at index {idx} is not finite"
            )));
        }
        if let Some(i) = xs.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NonIncreasingX { index: i + 1 });
        }
        Ok(Self { xs, ys })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    /// Always false; a dataset holds at least [`MIN_POINTS`] observations.
    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Widths of the rectangles under each sample: the forward gap
    /// `x_{n+1} - x_n`, with the last gap repeated for the final sample.
    pub fn step_sizes(&self) -> Vec<f64> {
        let mut steps: Vec<f64> = self.xs.windows(2).map(|w| w[1] - w[0]).collect();
        let last = *steps.last().expect("dataset has at least two gaps");
        steps.push(last);
        steps
    }

    /// The same observations with every x moved by `offset`.
    pub fn shifted(&self, offset: f64) -> Result<Self> {
        Self::new(
            self.xs.iter().map(|x| x + offset).collect(),
            self.ys.clone(),
        )
    }

    /// The same abscissae with every y multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.xs.clone(),
            self.ys.iter().map(|y| y * factor).collect(),
        )
    }
}

/// A synthetic experiment: `n` uniformly spaced samples over a window of
/// `width_ratio` standard deviations centred on the true mean, with additive
/// white Gaussian noise of standard deviation `noise_sd`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub truth: GaussianParams,
    pub n: usize,
    pub width_ratio: f64,
    pub noise_sd: f64,
    pub seed: u64,
}

impl Scenario {
    /// Signal-to-noise ratio `A / noise_sd`; infinite for noiseless scenarios.
    pub fn snr(&self) -> f64 {
        self.truth.amplitude() / self.noise_sd
    }

    /// Uniform grid over `[mu - W sigma / 2, mu + W sigma / 2]`.
    pub fn grid(&self) -> Result<Vec<f64>> {
        if self.n < MIN_POINTS {
            return Err(Error::TooFewPoints {
                needed: MIN_POINTS,
                got: self.n,
            });
        }
        if !(self.width_ratio.is_finite() && self.width_ratio > 0.0) {
            return Err(Error::InvalidInput(format!(
                "width ratio must be positive, got {}",
                self.width_ratio
            )));
        }
        let half = 0.5 * self.width_ratio * self.truth.sigma();
        let mu = self.truth.mean();
        Ok(linspace(mu - half, mu + half, self.n))
    }
}

/// `n` evenly spaced points from `start` to `end` inclusive; `n >= 2`.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    let step = (end - start) / (n - 1) as f64;
    let mut xs: Vec<f64> = (0..n).map(|i| start + step * i as f64).collect();
    xs[n - 1] = end;
    xs
}

/// Generates the noisy dataset described by `scenario`.
pub fn synthesize(scenario: &Scenario) -> Result<Dataset> {
    let xs = scenario.grid()?;
    synthesize_on_grid(&scenario.truth, xs, scenario.noise_sd, scenario.seed)
}

/// Samples `truth` on an arbitrary grid and adds seeded Gaussian noise.
///
/// Noise comes from ChaCha8 seeded with `seed` through a ziggurat normal
/// sampler, so the output is a pure function of the arguments.
pub fn synthesize_on_grid(
    truth: &GaussianParams,
    xs: Vec<f64>,
    noise_sd: f64,
    seed: u64,
) -> Result<Dataset> {
    if !(noise_sd.is_finite() && noise_sd >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "noise SD must be non-negative and finite, got {noise_sd}"
        )));
    }
    let mut ys = evaluate(truth, &xs);
    if noise_sd > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, noise_sd).expect("noise SD checked above");
        for y in &mut ys {
            *y += normal.sample(&mut rng);
        }
    }
    Dataset::new(xs, ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, mu: f64, sigma: f64) -> GaussianParams {
        GaussianParams::new(a, mu, sigma).unwrap()
    }

    fn scenario(noise_sd: f64, seed: u64) -> Scenario {
        Scenario {
            truth: params(1.0, 10.0, 2.0),
            n: 200,
            width_ratio: 12.0,
            noise_sd,
            seed,
        }
    }

    #[test]
    fn evaluate_known_values() {
        assert_eq!(evaluate(&params(1.0, 0.0, 1.0), &[0.0]), vec![1.0]);
        assert_eq!(evaluate(&params(2.0, 10.0, 2.0), &[10.0]), vec![2.0]);
        let v = evaluate(&params(1.0, 0.0, 1.0), &[1.0])[0];
        assert!((v - (-0.5f64).exp()).abs() < 1e-15);
        assert!((v - 0.60653).abs() < 1e-5);
    }

    #[test]
    fn evaluate_is_symmetric_about_mean() {
        let p = params(3.0, -1.5, 0.7);
        for d in [0.125, 0.5, 1.25, 4.0] {
            assert_eq!(p.value_at(-1.5 + d), p.value_at(-1.5 - d));
        }
    }

    #[test]
    fn params_reject_non_positive_width_and_amplitude() {
        assert!(GaussianParams::new(1.0, 0.0, 0.0).is_err());
        assert!(GaussianParams::new(1.0, 0.0, -1.0).is_err());
        assert!(GaussianParams::new(0.0, 0.0, 1.0).is_err());
        assert!(GaussianParams::new(1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn dataset_validation() {
        assert!(matches!(
            Dataset::new(vec![0.0, 1.0], vec![1.0, 1.0]),
            Err(Error::TooFewPoints { needed: 3, got: 2 })
        ));
        assert!(matches!(
            Dataset::new(vec![0.0, 1.0, 1.0], vec![1.0, 1.0, 1.0]),
            Err(Error::NonIncreasingX { index: 2 })
        ));
        assert!(matches!(
            Dataset::new(vec![0.0, 1.0, 2.0], vec![1.0, 1.0]),
            Err(Error::InvalidInput(_))
        ));
        assert!(Dataset::new(vec![0.0, 1.0, 2.0], vec![1.0, f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn step_sizes_replicate_last_gap() {
        let d = Dataset::new(vec![0.0, 1.0, 3.0, 3.5], vec![0.0; 4]).unwrap();
        assert_eq!(d.step_sizes(), vec![1.0, 2.0, 0.5, 0.5]);
    }

    #[test]
    fn grid_spans_window() {
        let s = scenario(0.0, 0);
        let xs = s.grid().unwrap();
        assert_eq!(xs.len(), 200);
        assert_eq!(xs[0], -2.0);
        assert_eq!(xs[199], 22.0);
        let step = xs[1] - xs[0];
        for w in xs.windows(2) {
            assert!((w[1] - w[0] - step).abs() < 1e-12);
        }
    }

    #[test]
    fn noiseless_peak_hits_amplitude_on_odd_grid() {
        let s = Scenario {
            n: 201,
            ..scenario(0.0, 0)
        };
        let d = synthesize(&s).unwrap();
        let max = d.ys().iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(max, 1.0);

        let even = synthesize(&scenario(0.0, 0)).unwrap();
        let max = even.ys().iter().cloned().fold(f64::MIN, f64::max);
        assert!(max < 1.0);
    }

    #[test]
    fn snr_of_reference_noise_level() {
        assert!((scenario(0.04, 1).snr() - 25.0).abs() < 1e-12);
        assert!(scenario(0.0, 1).snr().is_infinite());
    }

    #[test]
    fn synthesize_is_deterministic_per_seed() {
        let a = synthesize(&scenario(0.04, 42)).unwrap();
        let b = synthesize(&scenario(0.04, 42)).unwrap();
        assert_eq!(a, b);
        let c = synthesize(&scenario(0.04, 43)).unwrap();
        assert_ne!(a.ys(), c.ys());
    }

    #[test]
    fn synthesize_rejects_bad_scenarios() {
        let s = Scenario {
            n: 2,
            ..scenario(0.1, 0)
        };
        assert!(matches!(synthesize(&s), Err(Error::TooFewPoints { .. })));
        assert!(synthesize(&scenario(-0.1, 0)).is_err());
        let s = Scenario {
            width_ratio: 0.0,
            ..scenario(0.1, 0)
        };
        assert!(synthesize(&s).is_err());
    }

    #[test]
    fn noise_is_zero_mean() {
        let sd = 0.1;
        let trials = 200;
        let base = scenario(sd, 0);
        let clean = evaluate(&base.truth, &base.grid().unwrap());
        let mut total = 0.0;
        for seed in 0..trials {
            let d = synthesize(&Scenario { seed, ..base }).unwrap();
            total += d.ys().iter().zip(&clean).map(|(y, c)| y - c).sum::<f64>();
        }
        let count = (base.n as u64 * trials) as f64;
        let mean = total / count;
        assert!(mean.abs() < 4.0 * sd / count.sqrt(), "mean noise {mean}");
    }
}
