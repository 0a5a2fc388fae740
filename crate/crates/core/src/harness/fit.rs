use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares line through `(log δ, log e)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// RMS of the log residuals.
    pub residual: f64,
    pub points: usize,
    pub dropped: usize,
}

/// Fits `log e = intercept + slope · log δ`. Zero errors are dropped with a
/// warning; at least four points must remain.
pub fn fit_rate(deltas: &[f64], errors: &[f64]) -> Result<RateFit> {
    if deltas.len() != errors.len() {
        return Err(Error::domain("deltas and errors differ in length"));
    }
    if let Some(d) = deltas.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
        return Err(Error::domain(format!("deltas must be positive, got {d}")));
    }
    if let Some(e) = errors.iter().find(|e| !(**e >= 0.0 && e.is_finite())) {
        return Err(Error::domain(format!("errors must be finite and >= 0, got {e}")));
    }
    let pts: Vec<(f64, f64)> = deltas
        .iter()
        .zip(errors)
        .filter(|(_, &e)| e > 0.0)
        .map(|(d, e)| (d.ln(), e.ln()))
        .collect();
    let dropped = deltas.len() - pts.len();
    if dropped > 0 {
        log::warn!("rate fit: dropped {dropped} zero error(s)");
    }
    if pts.len() < 4 {
        return Err(Error::domain(format!("rate fit needs >= 4 positive errors, got {}", pts.len())));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("rate fit needs distinct deltas"));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(RateFit {
        slope,
        intercept,
        residual,
        points: pts.len(),
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GRID: [f64; 5] = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];

    #[test]
    fn square_root_law() {
        let e: Vec<f64> = GRID.iter().map(|d| d.sqrt()).collect();
        let f = fit_rate(&GRID, &e).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-12 && f.intercept.abs() < 1e-12 && f.residual < 1e-12);
    }

    #[test]
    fn linear_law_with_constant() {
        let e: Vec<f64> = GRID.iter().map(|d| 3.0 * d).collect();
        let f = fit_rate(&GRID, &e).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12 && (f.intercept - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn zeros_are_dropped_and_counted() {
        let e = [1e-1, 0.0, 1e-2, 1e-3 * 3.0, 1e-3];
        let f = fit_rate(&GRID, &e).unwrap();
        assert_eq!((f.points, f.dropped), (4, 1));
        assert!(fit_rate(&GRID, &[1.0, 0.0, 0.0, 1.0, 1.0]).is_err());
        assert!(fit_rate(&GRID[..3], &[1.0, 1.0, 1.0]).is_err());
        assert!(fit_rate(&GRID, &[1.0, -1.0, 1.0, 1.0, 1.0]).is_err());
    }

    proptest! {
        #[test]
        fn recovers_any_power_law(p in -2.0f64..3.0, c in 1e-3f64..1e3) {
            let e: Vec<f64> = GRID.iter().map(|d| c * d.powf(p)).collect();
            let f = fit_rate(&GRID, &e).unwrap();
            prop_assert!((f.slope - p).abs() < 1e-10);
            prop_assert!((f.intercept - c.ln()).abs() < 1e-9);
        }
    }
}
