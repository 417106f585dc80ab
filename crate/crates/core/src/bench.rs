//! Monte Carlo accuracy sweeps.
//!
//! One of snr, width ratio or sample count is swept while the other two stay
//! fixed. Every trial draws a fresh noisy dataset and fits it with each
//! requested algorithm. The absolute relative error of the width estimate is
//! aggregated into a mean and a worst case per algorithm.

use rayon::prelude::*;
use serde::Serialize;

use crate::errmodel::{predict_relative_error, DEFAULT_K1, DEFAULT_K2};
use crate::error::{Error, Result};
use crate::fitters::{fit, Algorithm, IterationPolicy};
use crate::model::{synthesize, GaussianParams, Scenario, MIN_POINTS};

/// Trial count used when none is given.
pub const DEFAULT_TRIALS: usize = 10_000;

/// Absolute relative error in percent.
pub fn are_percent(estimate: f64, truth: f64) -> Result<f64> {
    if !(truth > 0.0) || !truth.is_finite() {
        return Err(Error::InvalidInput(format!(
            "truth must be positive, got {truth}"
        )));
    }
    Ok(100.0 * (estimate - truth).abs() / truth)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Snr,
    W,
    N,
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "snr" => Ok(SweepAxis::Snr),
            "w" => Ok(SweepAxis::W),
            "n" => Ok(SweepAxis::N),
            other => Err(Error::InvalidInput(format!("unknown sweep axis '{other}'"))),
        }
    }
}

/// Values of the two axes not being swept. `snr` may be infinite for
/// noiseless runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedAxes {
    pub snr: f64,
    pub width_ratio: f64,
    pub n: usize,
}

impl Default for FixedAxes {
    fn default() -> Self {
        Self {
            snr: 25.0,
            width_ratio: 12.0,
            n: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub truth: GaussianParams,
    pub axis: SweepAxis,
    pub axis_values: Vec<f64>,
    pub fixed: FixedAxes,
    pub trials: usize,
    pub algorithms: Vec<Algorithm>,
    pub policy: IterationPolicy,
    pub base_seed: u64,
    pub k1: f64,
    pub k2: f64,
}

impl SweepConfig {
    /// Sweep with truth `A = 1, mu = 10, sigma = 2`, snr 25, W = 12, N = 200,
    /// 10^4 trials and the four single-shot algorithms.
    pub fn new(axis: SweepAxis, axis_values: Vec<f64>) -> Self {
        Self {
            truth: GaussianParams::new(1.0, 10.0, 2.0).expect("valid default truth"),
            axis,
            axis_values,
            fixed: FixedAxes::default(),
            trials: DEFAULT_TRIALS,
            algorithms: vec![
                Algorithm::Caruana,
                Algorithm::Guo,
                Algorithm::Roonizi,
                Algorithm::Fas,
            ],
            policy: IterationPolicy::default(),
            base_seed: 0,
            k1: DEFAULT_K1,
            k2: DEFAULT_K2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be at least 1".into()));
        }
        if self.axis_values.is_empty() {
            return Err(Error::InvalidInput("axis values must not be empty".into()));
        }
        if self.axis_values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(
                "axis values must be strictly increasing".into(),
            ));
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidInput("no algorithms requested".into()));
        }
        self.policy.validate()?;
        for &v in &self.axis_values {
            self.point(v)?.scenario(self.truth, 0)?;
        }
        Ok(())
    }

    /// Resolved `(snr, width_ratio, n)` at one axis value.
    pub fn point(&self, axis_value: f64) -> Result<SweepPoint> {
        let mut p = SweepPoint {
            snr: self.fixed.snr,
            width_ratio: self.fixed.width_ratio,
            n: self.fixed.n,
        };
        match self.axis {
            SweepAxis::Snr => p.snr = axis_value,
            SweepAxis::W => p.width_ratio = axis_value,
            SweepAxis::N => {
                if axis_value.fract() != 0.0 || axis_value < MIN_POINTS as f64 {
                    return Err(Error::InvalidInput(format!(
                        "sample count {axis_value} must be an integer >= {MIN_POINTS}"
                    )));
                }
                p.n = axis_value as usize;
            }
        }
        if p.snr.is_nan() || p.snr <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "snr must be positive, got {}",
                p.snr
            )));
        }
        Ok(p)
    }
}

/// The experiment parameters at one sweep position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub snr: f64,
    pub width_ratio: f64,
    pub n: usize,
}

impl SweepPoint {
    pub fn noise_sd(&self, truth: &GaussianParams) -> f64 {
        truth.amplitude() / self.snr
    }

    pub fn scenario(&self, truth: GaussianParams, seed: u64) -> Result<Scenario> {
        let s = Scenario {
            truth,
            n: self.n,
            width_ratio: self.width_ratio,
            noise_sd: self.noise_sd(&truth),
            seed,
        };
        s.grid()?;
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlgorithmStats {
    pub algorithm: Algorithm,
    /// NaN when every trial failed.
    pub mean_are_pct: f64,
    pub worst_are_pct: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis_value: f64,
    pub stats: Vec<AlgorithmStats>,
    pub theoretical_worst_pct: f64,
}

impl SweepRow {
    pub fn stats_for(&self, algorithm: Algorithm) -> Option<&AlgorithmStats> {
        self.stats.iter().find(|s| s.algorithm == algorithm)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one trial, mixed from the base seed, axis position and trial index
/// so that distinct `(axis_index, trial)` pairs never share a stream.
pub fn derive_seed(base_seed: u64, axis_index: usize, trial: usize) -> u64 {
    let lane = ((axis_index as u64) << 40) ^ trial as u64;
    splitmix64(base_seed ^ splitmix64(lane))
}

/// Runs every trial at every axis value.
///
/// Trials run in parallel on the current rayon pool. Per-trial results are
/// gathered in trial order before reduction, so the output does not depend
/// on the number of threads.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    config
        .axis_values
        .iter()
        .enumerate()
        .map(|(axis_index, &axis_value)| run_point(config, axis_index, axis_value))
        .collect()
}

fn run_point(config: &SweepConfig, axis_index: usize, axis_value: f64) -> Result<SweepRow> {
    let point = config.point(axis_value)?;
    let truth_sigma = config.truth.sigma();
    let outcomes: Vec<Vec<Option<f64>>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = derive_seed(config.base_seed, axis_index, trial);
            let data = point
                .scenario(config.truth, seed)
                .and_then(|s| synthesize(&s));
            config
                .algorithms
                .iter()
                .map(|&alg| {
                    let data = data.as_ref().ok()?;
                    let r = fit(data, alg, &config.policy).ok()?;
                    are_percent(r.params.sigma(), truth_sigma).ok()
                })
                .collect()
        })
        .collect();

    let stats = config
        .algorithms
        .iter()
        .enumerate()
        .map(|(i, &algorithm)| {
            let (mut sum, mut worst, mut ok, mut failures) =
                (0.0, f64::NEG_INFINITY, 0usize, 0usize);
            for trial in &outcomes {
                match trial[i] {
                    Some(e) => {
                        sum += e;
                        worst = worst.max(e);
                        ok += 1;
                    }
                    None => failures += 1,
                }
            }
            let (mean, worst) = if ok == 0 {
                (f64::NAN, f64::NAN)
            } else {
                (sum / ok as f64, worst)
            };
            AlgorithmStats {
                algorithm,
                mean_are_pct: mean,
                worst_are_pct: worst,
                failures,
            }
        })
        .collect();

    let alpha =
        predict_relative_error(point.snr, point.width_ratio, point.n, config.k1, config.k2)?;
    Ok(SweepRow {
        axis_value,
        stats,
        theoretical_worst_pct: 100.0 * alpha.alpha_total,
    })
}
