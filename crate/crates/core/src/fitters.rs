//! Closed-form Gaussian fitters.
//!
//! The log-domain fitters (Caruana, Guo, FAS) work on `ln y = a + b x + c x^2`
//! and discard observations that are not strictly positive before taking
//! logarithms. Roonizi's method fits `y` directly and keeps every sample.
//!
//! All normal equations are assembled in coordinates centred on the midpoint
//! of the sampled x range. The least-squares solution is the same as in raw
//! coordinates; centring only keeps the moment matrices well conditioned when
//! the data sit far from the origin.

use std::f64::consts::PI;
use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::SmallSystem;
use crate::model::{Dataset, GaussianParams, MIN_POINTS};

/// Default relative-change threshold for the iterative variants.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Coefficients of the log-domain quadratic `a + b x + c x^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadraticCoeffs {
    /// The quadratic whose exponential is the given Gaussian.
    pub fn from_params(params: &GaussianParams) -> Self {
        let var = params.sigma() * params.sigma();
        let mu = params.mean();
        Self {
            a: params.amplitude().ln() - mu * mu / (2.0 * var),
            b: mu / var,
            c: -1.0 / (2.0 * var),
        }
    }

    fn as_array(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    fn value_at(&self, x: f64) -> f64 {
        self.a + x * (self.b + x * self.c)
    }
}

/// Maps log-domain coefficients back to amplitude, mean and width.
///
/// Fails with [`Error::InvalidCurvature`] unless `c < 0`.
pub fn params_from_quadratic(coeffs: &QuadraticCoeffs) -> Result<GaussianParams> {
    let QuadraticCoeffs { a, b, c } = *coeffs;
    if !(c < 0.0) {
        return Err(Error::InvalidCurvature { value: c });
    }
    let amplitude = (a - b * b / (4.0 * c)).exp();
    let mean = -b / (2.0 * c);
    let sigma = (-1.0 / (2.0 * c)).sqrt();
    GaussianParams::new(amplitude, mean, sigma).map_err(|_| Error::InvalidCurvature { value: c })
}

/// Regression coefficients of Roonizi's integral form
/// `y = beta1 * phi1(x) + beta2 * phi2(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RooniziCoeffs {
    pub beta1: f64,
    pub beta2: f64,
}

impl RooniziCoeffs {
    /// `(mean, sigma)` from `beta1 = -1/sigma^2` and `beta2 = mean/sigma^2`.
    pub fn mean_and_sigma(&self) -> Result<(f64, f64)> {
        if !(self.beta1 < 0.0) {
            return Err(Error::InvalidCurvature { value: self.beta1 });
        }
        let sigma = (-1.0 / self.beta1).sqrt();
        let mean = -self.beta2 / self.beta1;
        Ok((mean, sigma))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Caruana,
    Guo,
    GuoIterative,
    Roonizi,
    Fas,
    FasIterative,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Caruana,
        Algorithm::Guo,
        Algorithm::GuoIterative,
        Algorithm::Roonizi,
        Algorithm::Fas,
        Algorithm::FasIterative,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Caruana => "caruana",
            Algorithm::Guo => "guo",
            Algorithm::GuoIterative => "guo-iter",
            Algorithm::Roonizi => "roonizi",
            Algorithm::Fas => "fas",
            Algorithm::FasIterative => "fas-iter",
        }
    }

    pub fn is_iterative(&self) -> bool {
        matches!(self, Algorithm::GuoIterative | Algorithm::FasIterative)
    }
}

impl Serialize for Algorithm {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown algorithm '{s}'")))
    }
}

/// Controls the reweighting loop of [`fit_guo`] and [`fit_fas`].
///
/// The loop stops after `max_iters` reweighted solves or as soon as the
/// infinity-norm change of `(a, b, c)` falls below `rel_tol` times the norm of
/// the new coefficients. `max_iters == 0` runs the single-shot algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationPolicy {
    pub max_iters: usize,
    pub rel_tol: f64,
    /// FAS only: recompute the area-based width every this many iterations,
    /// using the current amplitude estimate in place of the sample maximum.
    pub refresh_sigma_every: Option<NonZeroUsize>,
}

impl Default for IterationPolicy {
    fn default() -> Self {
        Self {
            max_iters: 0,
            rel_tol: DEFAULT_REL_TOL,
            refresh_sigma_every: None,
        }
    }
}

impl IterationPolicy {
    /// Exactly `max_iters` reweighted solves unless converged to rounding.
    pub fn iterations(max_iters: usize) -> Self {
        Self {
            max_iters,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "relative tolerance must be positive, got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

/// Fitted parameters plus bookkeeping about how they were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub algorithm: Algorithm,
    pub params: GaussianParams,
    pub iterations_used: usize,
    pub points_used: usize,
    pub dropped_nonpositive: usize,
}

impl FitResult {
    /// Sum of squared residuals of the fitted curve over every observation.
    pub fn residual_sum_of_squares(&self, data: &Dataset) -> f64 {
        data.xs()
            .iter()
            .zip(data.ys())
            .map(|(&x, &y)| {
                let r = y - self.params.value_at(x);
                r * r
            })
            .sum()
    }
}

/// Runs `algorithm` on `data`. The policy is ignored by non-iterative
/// algorithms, and `Guo`/`Fas` always run with zero iterations.
pub fn fit(data: &Dataset, algorithm: Algorithm, policy: &IterationPolicy) -> Result<FitResult> {
    let single = IterationPolicy {
        max_iters: 0,
        ..*policy
    };
    let mut result = match algorithm {
        Algorithm::Caruana => fit_caruana(data)?,
        Algorithm::Guo => fit_guo(data, &single)?,
        Algorithm::GuoIterative => fit_guo(data, policy)?,
        Algorithm::Roonizi => fit_roonizi(data)?,
        Algorithm::Fas => fit_fas(data, &single)?,
        Algorithm::FasIterative => fit_fas(data, policy)?,
    };
    result.algorithm = algorithm;
    Ok(result)
}

/// Positive observations in centred coordinates, ready for the log transform.
struct LogData {
    center: f64,
    xs: Vec<f64>,
    ys: Vec<f64>,
    log_ys: Vec<f64>,
    dropped: usize,
}

impl LogData {
    fn new(data: &Dataset) -> Result<Self> {
        let center = midpoint(data);
        let (xs, ys): (Vec<f64>, Vec<f64>) = data
            .xs()
            .iter()
            .zip(data.ys())
            .filter(|(_, &y)| y > 0.0)
            .map(|(&x, &y)| (x - center, y))
            .unzip();
        if xs.len() < MIN_POINTS {
            return Err(Error::TooFewPoints {
                needed: MIN_POINTS,
                got: xs.len(),
            });
        }
        let log_ys = ys.iter().map(|y| y.ln()).collect();
        Ok(Self {
            center,
            dropped: data.len() - xs.len(),
            xs,
            ys,
            log_ys,
        })
    }

    fn observed_weights(&self) -> Vec<f64> {
        self.ys.iter().map(|y| y * y).collect()
    }

    /// Squared fitted values `exp(a + b x + c x^2)^2` used as weights.
    fn fitted_weights(&self, coeffs: &QuadraticCoeffs) -> Vec<f64> {
        self.xs
            .iter()
            .map(|&x| (2.0 * coeffs.value_at(x)).exp())
            .collect()
    }

    /// Weighted moments `sum w x^k` for k = 0..=4 and `sum w x^k ln y` for k = 0..=2.
    fn moments(&self, weights: &[f64]) -> ([f64; 5], [f64; 3]) {
        let mut s = [0.0; 5];
        let mut t = [0.0; 3];
        for ((&x, &ly), &w) in self.xs.iter().zip(&self.log_ys).zip(weights) {
            let mut p = w;
            for (k, sk) in s.iter_mut().enumerate() {
                if k < 3 {
                    t[k] += p * ly;
                }
                *sk += p;
                p *= x;
            }
        }
        (s, t)
    }

    /// Weighted least squares for all three coefficients.
    fn solve_quadratic(&self, weights: &[f64]) -> Result<QuadraticCoeffs> {
        let (s, t) = self.moments(weights);
        let system = SmallSystem::new(
            [[s[0], s[1], s[2]], [s[1], s[2], s[3]], [s[2], s[3], s[4]]],
            t,
        );
        let [a, b, c] = system.solve()?;
        Ok(QuadraticCoeffs { a, b, c })
    }

    /// Weighted least squares for `a` and `b` with the curvature held at `c`.
    fn solve_with_curvature(&self, weights: &[f64], c: f64) -> Result<QuadraticCoeffs> {
        let (s, t) = self.moments(weights);
        let system = SmallSystem::new(
            [[s[0], s[1]], [s[1], s[2]]],
            [t[0] - c * s[2], t[1] - c * s[3]],
        );
        let [a, b] = system.solve()?;
        Ok(QuadraticCoeffs { a, b, c })
    }

    fn params(&self, coeffs: &QuadraticCoeffs) -> Result<GaussianParams> {
        let p = params_from_quadratic(coeffs)?;
        GaussianParams::new(p.amplitude(), p.mean() + self.center, p.sigma())
    }
}

fn midpoint(data: &Dataset) -> f64 {
    let xs = data.xs();
    0.5 * (xs[0] + xs[xs.len() - 1])
}

fn relative_change(prev: &QuadraticCoeffs, next: &QuadraticCoeffs) -> f64 {
    let p = prev.as_array();
    let n = next.as_array();
    let diff = p
        .iter()
        .zip(&n)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let norm = n.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if norm == 0.0 {
        diff
    } else {
        diff / norm
    }
}

/// Unweighted least squares on the logarithm of the positive observations.
pub fn fit_caruana(data: &Dataset) -> Result<FitResult> {
    let logs = LogData::new(data)?;
    let coeffs = logs.solve_quadratic(&vec![1.0; logs.xs.len()])?;
    Ok(FitResult {
        algorithm: Algorithm::Caruana,
        params: logs.params(&coeffs)?,
        iterations_used: 0,
        points_used: logs.xs.len(),
        dropped_nonpositive: logs.dropped,
    })
}

/// Least squares on `ln y` weighted by `y^2`.
///
/// The first solve weights by the observations themselves. Each further
/// iteration weights by the curve fitted in the previous one.
pub fn fit_guo(data: &Dataset, policy: &IterationPolicy) -> Result<FitResult> {
    policy.validate()?;
    let logs = LogData::new(data)?;
    let mut coeffs = logs.solve_quadratic(&logs.observed_weights())?;
    let mut iterations = 0;
    while iterations < policy.max_iters {
        let next = logs.solve_quadratic(&logs.fitted_weights(&coeffs))?;
        iterations += 1;
        let change = relative_change(&coeffs, &next);
        coeffs = next;
        if change < policy.rel_tol {
            break;
        }
    }
    Ok(FitResult {
        algorithm: if policy.max_iters == 0 {
            Algorithm::Guo
        } else {
            Algorithm::GuoIterative
        },
        params: logs.params(&coeffs)?,
        iterations_used: iterations,
        points_used: logs.xs.len(),
        dropped_nonpositive: logs.dropped,
    })
}

/// Cumulative trapezoid integrals of `x y` and `y` from the first sample.
fn cumulative_integrals(xs: &[f64], ys: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut phi1 = Vec::with_capacity(xs.len());
    let mut phi2 = Vec::with_capacity(xs.len());
    let (mut acc1, mut acc2) = (0.0, 0.0);
    phi1.push(acc1);
    phi2.push(acc2);
    for i in 1..xs.len() {
        let h = 0.5 * (xs[i] - xs[i - 1]);
        acc1 += h * (xs[i - 1] * ys[i - 1] + xs[i] * ys[i]);
        acc2 += h * (ys[i - 1] + ys[i]);
        phi1.push(acc1);
        phi2.push(acc2);
    }
    (phi1, phi2)
}

/// Least-squares regression of `y` on its running integrals.
pub(crate) fn roonizi_coeffs(xs: &[f64], ys: &[f64]) -> Result<RooniziCoeffs> {
    let (phi1, phi2) = cumulative_integrals(xs, ys);
    let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for ((p1, p2), y) in phi1.iter().zip(&phi2).zip(ys) {
        s11 += p1 * p1;
        s12 += p1 * p2;
        s22 += p2 * p2;
        r1 += p1 * y;
        r2 += p2 * y;
    }
    let [beta1, beta2] = SmallSystem::new([[s11, s12], [s12, s22]], [r1, r2]).solve()?;
    Ok(RooniziCoeffs { beta1, beta2 })
}

/// Roonizi's integral method specialised to a lone Gaussian.
///
/// Mean and width come from regressing `y` on cumulative trapezoid integrals
/// of `x y` and `y`. The amplitude is then the least-squares scale of the unit
/// Gaussian with that mean and width.
pub fn fit_roonizi(data: &Dataset) -> Result<FitResult> {
    let center = midpoint(data);
    let xs: Vec<f64> = data.xs().iter().map(|x| x - center).collect();
    let ys = data.ys();
    let (mean, sigma) = roonizi_coeffs(&xs, ys)?.mean_and_sigma()?;

    let (mut num, mut den) = (0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let z = (x - mean) / sigma;
        let e = (-0.5 * z * z).exp();
        num += y * e;
        den += e * e;
    }
    // A curve that misses the data entirely leaves nothing to scale.
    if !(den > f64::MIN_POSITIVE) || !(num > 0.0) || !num.is_finite() {
        return Err(Error::SingularSystem);
    }
    let amplitude = num / den;
    Ok(FitResult {
        algorithm: Algorithm::Roonizi,
        params: GaussianParams::new(amplitude, mean + center, sigma)?,
        iterations_used: 0,
        points_used: data.len(),
        dropped_nonpositive: 0,
    })
}

/// Riemann-sum area under the observations.
fn riemann_area(data: &Dataset) -> f64 {
    data.step_sizes()
        .iter()
        .zip(data.ys())
        .map(|(dx, y)| dx * y)
        .sum()
}

fn sigma_from_area(area: f64, peak: f64) -> Result<f64> {
    if !(peak > 0.0) {
        return Err(Error::NonPositivePeak { value: peak });
    }
    if !(area > 0.0) {
        return Err(Error::NonPositiveArea { value: area });
    }
    Ok(area / ((2.0 * PI).sqrt() * peak))
}

/// Width estimate from equating the Riemann-sum area under the samples with
/// the Gaussian area `A sigma sqrt(2 pi)`, taking the sample maximum as `A`.
///
/// Needs no other parameter and no linear solve.
pub fn estimate_sigma_fas(data: &Dataset) -> Result<f64> {
    let peak = data.ys().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    sigma_from_area(riemann_area(data), peak)
}

/// Fast, accurate and separable fit: the width from [`estimate_sigma_fas`]
/// fixes the curvature, then a two-unknown `y^2`-weighted fit gives amplitude
/// and mean.
///
/// Iterations reweight with the fitted curve as in [`fit_guo`]. With
/// `refresh_sigma_every = m`, every `m`-th iteration recomputes the width from
/// the area using the current amplitude estimate.
pub fn fit_fas(data: &Dataset, policy: &IterationPolicy) -> Result<FitResult> {
    policy.validate()?;
    let mut sigma = estimate_sigma_fas(data)?;
    let logs = LogData::new(data)?;
    let curvature = |s: f64| -1.0 / (2.0 * s * s);

    let mut coeffs = logs.solve_with_curvature(&logs.observed_weights(), curvature(sigma))?;
    let mut iterations = 0;
    let area = riemann_area(data);
    while iterations < policy.max_iters {
        let mut next = logs.solve_with_curvature(&logs.fitted_weights(&coeffs), coeffs.c)?;
        iterations += 1;
        if let Some(every) = policy.refresh_sigma_every {
            if iterations % every.get() == 0 {
                let amplitude = params_from_quadratic(&next)?.amplitude();
                sigma = sigma_from_area(area, amplitude)?;
                next.c = curvature(sigma);
            }
        }
        let change = relative_change(&coeffs, &next);
        coeffs = next;
        if change < policy.rel_tol {
            break;
        }
    }

    let p = logs.params(&coeffs)?;
    Ok(FitResult {
        algorithm: if policy.max_iters == 0 {
            Algorithm::Fas
        } else {
            Algorithm::FasIterative
        },
        params: GaussianParams::new(p.amplitude(), p.mean(), sigma)?,
        iterations_used: iterations,
        points_used: logs.xs.len(),
        dropped_nonpositive: logs.dropped,
    })
}
