//! Least-squares slopes in log-log coordinates.

use serde::Serialize;

use crate::error::{Result, TfError};

/// A fitted power law `value ≈ e^intercept · scale^slope`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual in log coordinates.
    pub max_residual: f64,
    pub points: Vec<(f64, f64)>,
}

pub fn fit_log_slope(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 4 {
        return Err(TfError::DegenerateFit(format!("{} points, need at least 4", points.len())));
    }
    for w in points.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(TfError::DegenerateFit("scales must be strictly increasing".into()));
        }
    }
    for &(s, v) in points {
        if !(s > 0.0 && s.is_finite() && v > 0.0 && v.is_finite()) {
            return Err(TfError::Domain(format!("log undefined at ({s}, {v})")));
        }
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(ScalingFit {
        slope,
        intercept,
        max_residual,
        points: points.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        [1.0, 2.0, 4.0, 8.0, 16.0, 32.0].iter().map(|&x| (x, f(x))).collect()
    }

    #[test]
    fn exact_power_laws() {
        let f = fit_log_slope(&pts(|x| x)).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-14);
        let f = fit_log_slope(&pts(|_| 7.0)).unwrap();
        assert!(f.slope.abs() < 1e-14);
        assert!((f.intercept - 7f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn noisy_power_law() {
        let noise = [1e-3, -1e-3, 5e-4, -7e-4, 2e-4, 1e-3];
        let p: Vec<(f64, f64)> = pts(|x| x.powf(2.5))
            .into_iter()
            .zip(noise)
            .map(|((x, y), e)| (x, y * (1.0 + e)))
            .collect();
        let f = fit_log_slope(&p).unwrap();
        assert!((f.slope - 2.5).abs() < 0.01);
        assert!(f.max_residual < 2e-3);
    }

    #[test]
    fn errors() {
        assert!(matches!(fit_log_slope(&pts(|x| x)[..3]), Err(TfError::DegenerateFit(_))));
        assert!(matches!(fit_log_slope(&pts(|x| x - 1.0)), Err(TfError::Domain(_))));
        let mut p = pts(|x| x);
        p.swap(1, 2);
        assert!(matches!(fit_log_slope(&p), Err(TfError::DegenerateFit(_))));
    }
}
