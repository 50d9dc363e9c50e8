//! Power-law fitting on log-log axes.
//!
//! Two estimates are reported side by side: the global least-squares slope
//! over the window, and a successive-slope extrapolant (Aitken delta-squared
//! on the running slopes) that removes the leading correction to scaling.

use crate::error::{Error, Result};

/// Result of a power-law fit y ~ amplitude * x^exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    /// Global least-squares slope on log-log axes.
    pub exponent: f64,
    /// exp(intercept) of the global fit.
    pub amplitude: f64,
    /// (min, max) of the abscissa window.
    pub window: (f64, f64),
    /// Worst absolute log-residual of the global fit inside the window.
    pub max_residual: f64,
    /// Successive-slope extrapolant, when at least four points are available.
    pub exponent_extrapolated: Option<f64>,
    /// Amplitude extrapolant built from the extrapolated exponent.
    pub amplitude_extrapolated: Option<f64>,
}

impl ScalingFit {
    /// The headline exponent: extrapolated when available, global otherwise.
    pub fn best_exponent(&self) -> f64 {
        self.exponent_extrapolated.unwrap_or(self.exponent)
    }

    /// The headline amplitude: extrapolated when available, global otherwise.
    pub fn best_amplitude(&self) -> f64 {
        self.amplitude_extrapolated.unwrap_or(self.amplitude)
    }
}

/// Plain least squares; returns (slope, intercept).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

/// Aitken delta-squared extrapolation of the tail of a sequence.
/// Falls back to the last element when the differences are not contracting.
fn aitken_tail(seq: &[f64]) -> Option<f64> {
    let k = seq.len();
    if k < 3 {
        return seq.last().copied();
    }
    let (a, b, c) = (seq[k - 3], seq[k - 2], seq[k - 1]);
    let d1 = b - a;
    let d2 = c - b;
    let den = d2 - d1;
    if d2.abs() < 1e-12 {
        return Some(c);
    }
    if den.abs() < 1e-9 * (1.0 + d2.abs()) || d2.abs() >= d1.abs() {
        return Some(c);
    }
    Some(c - d2 * d2 / den)
}

/// Fit y ~ A x^p over positive data on log-log axes.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Result<ScalingFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::FitDomain(format!(
            "need >= 2 matched points, got {} x {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.iter().chain(ys.iter()).any(|&v| !(v > 0.0)) {
        return Err(Error::FitDomain(
            "log-log fit requires strictly positive data".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (slope, intercept) = linear_fit(&lx, &ly);
    let max_residual = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - (intercept + slope * x)).abs())
        .fold(0.0f64, f64::max);

    // running slopes between consecutive points, ordered by |x| ascending
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&i, &j| xs[i].partial_cmp(&xs[j]).expect("finite abscissae"));
    let slopes: Vec<f64> = idx
        .windows(2)
        .map(|w| (ly[w[1]] - ly[w[0]]) / (lx[w[1]] - lx[w[0]]))
        .collect();

    let (exponent_extrapolated, amplitude_extrapolated) = if slopes.len() >= 3 {
        let p = aitken_tail(&slopes);
        let amp = p.and_then(|p| {
            let amps: Vec<f64> = idx.iter().map(|&i| ys[i] / xs[i].powf(p)).collect();
            aitken_tail(&amps)
        });
        (p, amp)
    } else {
        (None, None)
    };

    let window = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    Ok(ScalingFit {
        exponent: slope,
        amplitude: intercept.exp(),
        window,
        max_residual,
        exponent_extrapolated,
        amplitude_extrapolated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_pure_power_law() {
        let xs: Vec<f64> = (1..=8).map(|k| 2.0f64.powi(k)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.5 * x.powf(1.5)).collect();
        let fit = loglog_fit(&xs, &ys).unwrap();
        assert!((fit.exponent - 1.5).abs() < 1e-12);
        assert!((fit.amplitude - 3.5).abs() < 1e-10);
        assert!(fit.max_residual < 1e-12);
    }

    #[test]
    fn extrapolation_removes_leading_correction() {
        // y = A x^p (1 + b x^{-1/2}): the global slope is biased, the
        // successive-slope extrapolant should get much closer.
        let (a, p, b) = (2.0, 1.5, 0.8);
        let xs: Vec<f64> = (4..=12).map(|k| 2.0f64.powi(k)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| a * x.powf(p) * (1.0 + b / x.sqrt())).collect();
        let fit = loglog_fit(&xs, &ys).unwrap();
        let ex = fit.exponent_extrapolated.unwrap();
        assert!((ex - p).abs() < 0.2 * (fit.exponent - p).abs());
        let am = fit.amplitude_extrapolated.unwrap();
        assert!((am - a).abs() / a < 0.01, "amp {am}");
    }

    #[test]
    fn rejects_nonpositive_data() {
        assert!(loglog_fit(&[1.0, 2.0], &[1.0, 0.0]).is_err());
        assert!(loglog_fit(&[1.0, -2.0], &[1.0, 2.0]).is_err());
        assert!(loglog_fit(&[1.0], &[1.0]).is_err());
    }
}
