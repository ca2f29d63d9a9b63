use super::{HarnessError, SweepRow};

/// Least-squares fit of `T ~ a * n^b` on log-log data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    /// Root-mean-square residual in natural-log units.
    pub residual: f64,
    pub points: usize,
}

pub fn fit_power_law(points: &[(f64, f64)]) -> Result<FitResult, HarnessError> {
    if points.len() < 3 {
        return Err(HarnessError::InsufficientRows(points.len()));
    }
    if let Some(&(n, _)) = points.iter().find(|&&(n, t)| n <= 0.0 || t <= 0.0) {
        return Err(HarnessError::NonPositive { n: n as usize });
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, t)| (n.ln(), t.ln())).collect();
    let k = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let b = sxy / sxx;
    let ln_a = mean_y - b * mean_x;
    let sse: f64 = logs.iter().map(|p| (p.1 - ln_a - b * p.0).powi(2)).sum();
    Ok(FitResult {
        a: ln_a.exp(),
        b,
        residual: (sse / k).sqrt(),
        points: logs.len(),
    })
}

/// Fits freezing time against the family parameter `n`.
pub fn fit_exponent(rows: &[SweepRow]) -> Result<FitResult, HarnessError> {
    if rows.len() < 3 {
        return Err(HarnessError::InsufficientRows(rows.len()));
    }
    let points = rows
        .iter()
        .map(|r| match r.freeze_time {
            Some(t) if t > 0 => Ok((r.n as f64, t as f64)),
            _ => Err(HarnessError::NonPositive { n: r.n }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    fit_power_law(&points)
}
