//! Exhaustive grid search, used to cross-check the iterative fitters.

use crate::error::{Error, Result};

pub const MAX_ORACLE_PARAMS: usize = 3;
pub const MIN_ORACLE_RESOLUTION: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub params: Vec<f64>,
    pub sse: f64,
    pub evaluations: usize,
}

fn grid_value(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

/// Evaluates `objective` on every node of an evenly spaced grid (endpoints
/// included) and returns the smallest value found.
pub fn grid_oracle<F>(
    objective: F,
    bounds: &[(f64, f64)],
    resolution: &[usize],
) -> Result<OracleResult>
where
    F: Fn(&[f64]) -> f64,
{
    if bounds.is_empty() {
        return Err(Error::invalid(
            "bounds",
            "at least one parameter is required",
        ));
    }
    if bounds.len() > MAX_ORACLE_PARAMS {
        return Err(Error::invalid(
            "bounds",
            format!("at most {MAX_ORACLE_PARAMS} parameters"),
        ));
    }
    if resolution.len() != bounds.len() {
        return Err(Error::invalid(
            "resolution",
            "one entry per parameter is required",
        ));
    }
    for &(lo, hi) in bounds {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::invalid(
                "bounds",
                format!("empty or infinite interval [{lo}, {hi}]"),
            ));
        }
    }
    if let Some(&n) = resolution.iter().find(|&&n| n < MIN_ORACLE_RESOLUTION) {
        return Err(Error::invalid(
            "resolution",
            format!("need at least {MIN_ORACLE_RESOLUTION} points per axis, got {n}"),
        ));
    }

    let dims = bounds.len();
    let mut index = vec![0usize; dims];
    let mut point: Vec<f64> = bounds.iter().map(|b| b.0).collect();
    let mut best = OracleResult {
        params: point.clone(),
        sse: f64::INFINITY,
        evaluations: 0,
    };
    loop {
        for d in 0..dims {
            point[d] = grid_value(bounds[d].0, bounds[d].1, index[d], resolution[d]);
        }
        let value = objective(&point);
        best.evaluations += 1;
        if value < best.sse {
            best.sse = value;
            best.params.copy_from_slice(&point);
        }
        // Mixed-radix increment.
        let mut d = 0;
        loop {
            index[d] += 1;
            if index[d] < resolution[d] {
                break;
            }
            index[d] = 0;
            d += 1;
            if d == dims {
                return Ok(best);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_minimum_within_one_step() {
        let r = grid_oracle(|p| (p[0] - 0.3137).powi(2), &[(-1.0, 1.0)], &[101]).unwrap();
        assert!((r.params[0] - 0.3137).abs() <= 2.0 / 100.0);
        assert_eq!(r.evaluations, 101);
    }

    #[test]
    fn bounds_excluding_optimum_give_boundary() {
        let r = grid_oracle(
            |p| (p[0] - 5.0).powi(2) + (p[1] + 5.0).powi(2),
            &[(0.0, 1.0), (0.0, 1.0)],
            &[50, 50],
        )
        .unwrap();
        assert_eq!(r.params, vec![1.0, 0.0]);
    }

    #[test]
    fn invalid_configuration() {
        let f = |_: &[f64]| 0.0;
        assert!(grid_oracle(f, &[], &[]).is_err());
        assert!(grid_oracle(f, &[(1.0, 0.0)], &[50]).is_err());
        assert!(grid_oracle(f, &[(0.0, 1.0)], &[10]).is_err());
        assert!(grid_oracle(f, &[(0.0, 1.0); 4], &[50; 4]).is_err());
    }
}
