//! First-order relative-error predictor for the area-based width estimate.
//!
//! The numerator error comes from the noise summed into the Riemann area.
//! The denominator error comes from using the noisy sample maximum as the
//! amplitude. Both scale as `1/snr`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Two-sided 95.5% confidence multiplier for the area noise.
pub const DEFAULT_K1: f64 = 2.0;
/// Worst-case multiplier for the peak noise.
pub const DEFAULT_K2: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorBreakdown {
    pub alpha_numerator: f64,
    pub alpha_denominator: f64,
    pub alpha_total: f64,
    pub k1: f64,
    pub k2: f64,
}

/// Predicted relative error of the width estimate for `n` samples spanning
/// `width_ratio` standard deviations at the given signal-to-noise ratio.
///
/// `snr` may be infinite (noiseless), in which case every term is zero.
pub fn predict_relative_error(
    snr: f64,
    width_ratio: f64,
    n: usize,
    k1: f64,
    k2: f64,
) -> Result<ErrorBreakdown> {
    for (name, v) in [
        ("snr", snr),
        ("width ratio", width_ratio),
        ("k1", k1),
        ("k2", k2),
    ] {
        if v.is_nan() || v <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    if !(width_ratio.is_finite() && k1.is_finite() && k2.is_finite()) {
        return Err(Error::InvalidInput(
            "width ratio and multipliers must be finite".into(),
        ));
    }
    let alpha_numerator = k1 * width_ratio / (snr * (2.0 * PI * n as f64).sqrt());
    let alpha_denominator = k2 / snr;
    Ok(ErrorBreakdown {
        alpha_numerator,
        alpha_denominator,
        alpha_total: alpha_numerator + alpha_denominator,
        k1,
        k2,
    })
}

/// [`predict_relative_error`] with the default multipliers, as a percentage.
pub fn worst_case_percent(snr: f64, width_ratio: f64, n: usize) -> Result<f64> {
    Ok(100.0 * predict_relative_error(snr, width_ratio, n, DEFAULT_K1, DEFAULT_K2)?.alpha_total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_operating_point() {
        let e = predict_relative_error(25.0, 12.0, 200, 2.0, 3.0).unwrap();
        assert!((e.alpha_denominator - 0.12).abs() < 1e-15);
        let expected_n = 24.0 / (25.0 * (400.0 * PI).sqrt());
        assert!((e.alpha_numerator - expected_n).abs() < 1e-15);
        assert!((e.alpha_numerator - 0.02709).abs() < 1e-5);
        assert!((e.alpha_total - 0.14709).abs() < 1e-5);
        assert_eq!(e.alpha_total, e.alpha_numerator + e.alpha_denominator);
    }

    #[test]
    fn noiseless_limit_is_zero() {
        let e = predict_relative_error(f64::INFINITY, 12.0, 200, 2.0, 3.0).unwrap();
        assert_eq!(
            (e.alpha_numerator, e.alpha_denominator, e.alpha_total),
            (0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn doubling_n_shrinks_numerator_by_root_two() {
        let a = predict_relative_error(10.0, 8.0, 100, 2.0, 3.0).unwrap();
        let b = predict_relative_error(10.0, 8.0, 200, 2.0, 3.0).unwrap();
        assert!((b.alpha_numerator / a.alpha_numerator - 0.5f64.sqrt()).abs() < 1e-14);
        assert_eq!(a.alpha_denominator, b.alpha_denominator);
    }

    #[test]
    fn rejects_non_positive_arguments() {
        assert!(predict_relative_error(0.0, 12.0, 200, 2.0, 3.0).is_err());
        assert!(predict_relative_error(25.0, -1.0, 200, 2.0, 3.0).is_err());
        assert!(predict_relative_error(25.0, 12.0, 0, 2.0, 3.0).is_err());
        assert!(predict_relative_error(25.0, 12.0, 200, 0.0, 3.0).is_err());
        assert!(predict_relative_error(25.0, 12.0, 200, 2.0, f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn monotone_in_each_argument(snr in 0.5f64..200.0, w in 1.0f64..30.0, n in 3usize..5000) {
            let base = worst_case_percent(snr, w, n).unwrap();
            prop_assert!(worst_case_percent(snr * 1.1, w, n).unwrap() < base);
            prop_assert!(worst_case_percent(snr, w, n + 1).unwrap() < base);
            prop_assert!(worst_case_percent(snr, w * 1.1, n).unwrap() > base);
        }
    }
}
