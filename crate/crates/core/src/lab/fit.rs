use crate::error::{Error, Result};
use serde::Serialize;

/// Least-squares line through `(log H, log count)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub points: usize,
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual, in natural-log units.
    pub max_residual: f64,
}

/// Fits `log count = slope * log H + intercept` by ordinary least squares.
///
/// Needs at least three points with strictly increasing `H >= 1` and
/// positive counts.
pub fn fit_loglog(points: &[(u64, u128)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::Degenerate(format!(
            "log-log fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if points.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::Degenerate("H values must be strictly increasing".into()));
    }
    if let Some(&(h, c)) = points.iter().find(|&&(h, c)| h == 0 || c == 0) {
        return Err(Error::Degenerate(format!("cannot take logs of H={h}, count={c}")));
    }
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|&(h, c)| ((h as f64).ln(), (c as f64).ln()))
        .collect();
    let k = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / k;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all log H equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xy
        .iter()
        .map(|&(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    Ok(FitResult {
        points: xy.len(),
        slope,
        intercept,
        max_residual,
    })
}
