//! Least-squares line through the origin.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    /// Standard error of the slope; 0 with a single point.
    pub stderr: f64,
    pub rms: f64,
    pub n: usize,
}

/// Fits `y = slope·x`. Returns `None` for empty input or `Σx² = 0`.
pub fn fit_through_origin(x: &[f64], y: &[f64]) -> Option<LineFit> {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    if n == 0 || !(sxx > 0.0) {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let slope = sxy / sxx;
    let sse: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a).powi(2)).sum();
    let stderr = if n > 1 {
        (sse / (n - 1) as f64 / sxx).sqrt()
    } else {
        0.0
    };
    Some(LineFit {
        slope,
        stderr,
        rms: (sse / n as f64).sqrt(),
        n,
    })
}
