//! Damped Gauss-Newton for small box-constrained least-squares problems.
//!
//! Jacobians come from central differences. Each iteration solves
//! `(JᵀJ + λ·diag(JᵀJ))·Δ = −Jᵀr` over the parameters that are not pinned at
//! a bound, projects the step into the box and adapts `λ` on success or
//! failure.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Finite-difference step relative to the parameter scale.
    pub relative_step: f64,
    /// Converged when `‖Δx‖ / ‖x‖` falls below this.
    pub step_tolerance: f64,
    /// Converged when the relative decrease of the objective falls below this.
    pub sse_tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            relative_step: 1e-6,
            step_tolerance: 1e-10,
            sse_tolerance: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub params: Vec<f64>,
    pub residuals: Vec<f64>,
    pub sse: f64,
    pub iterations: usize,
    pub converged: bool,
    pub identifiable: bool,
}

const LAMBDA_MAX: f64 = 1e16;

/// Moving one parameter across its whole range must change the residual
/// RMS by at least this much for the parameter to count as identifiable.
const MIN_SENSITIVITY: f64 = 1e-8;

/// Smallest admissible pivot of the column-normalised normal matrix.
const MIN_PIVOT: f64 = 1e-10;

fn sum_sq(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

fn param_scale(x: f64, (lo, hi): (f64, f64)) -> f64 {
    let width = hi - lo;
    let floor = if width.is_finite() { 1e-3 * width } else { 1.0 };
    x.abs().max(floor)
}

fn clamp(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (v, &(lo, hi)) in x.iter_mut().zip(bounds) {
        *v = v.clamp(lo, hi);
    }
}

/// Central-difference Jacobian, stored column by column.
fn jacobian<F>(f: &F, x: &[f64], bounds: &[(f64, f64)], rel: f64) -> Vec<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut cols = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    for j in 0..x.len() {
        let h = rel * param_scale(x[j], bounds[j]);
        probe[j] = x[j] + h;
        let up = f(&probe);
        probe[j] = x[j] - h;
        let down = f(&probe);
        probe[j] = x[j];
        cols.push(
            up.iter()
                .zip(&down)
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect(),
        );
    }
    cols
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves a small dense system by Gaussian elimination with partial pivoting.
/// Returns `None` when the matrix is numerically singular.
pub(crate) fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if !(a[pivot][col].abs() > 0.0) || !a[pivot][col].is_finite() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn is_identifiable(jac: &[Vec<f64>], x: &[f64], bounds: &[(f64, f64)], m: usize) -> bool {
    let n = jac.len();
    let norms: Vec<f64> = jac.iter().map(|c| dot(c, c).sqrt()).collect();
    for j in 0..n {
        let (lo, hi) = bounds[j];
        let range = if (hi - lo).is_finite() {
            hi - lo
        } else {
            x[j].abs().max(1.0)
        };
        if !(norms[j] * range / (m as f64).sqrt() > MIN_SENSITIVITY) {
            return false;
        }
    }
    // Pivots of the correlation matrix of the Jacobian columns.
    let mut corr: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| dot(&jac[i], &jac[j]) / (norms[i] * norms[j]))
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = corr[col][col];
        if !(p > MIN_PIVOT) {
            return false;
        }
        for row in col + 1..n {
            let factor = corr[row][col] / p;
            for k in col..n {
                corr[row][k] -= factor * corr[col][k];
            }
        }
    }
    true
}

/// Minimises `Σ r(x)²` subject to `bounds`, starting from `x0`.
pub fn minimize<F>(f: F, x0: &[f64], bounds: &[(f64, f64)], options: &SolverOptions) -> Solution
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    assert_eq!(x0.len(), bounds.len());
    let n = x0.len();
    let mut x = x0.to_vec();
    clamp(&mut x, bounds);
    let mut r = f(&x);
    let m = r.len();
    let mut sse = sum_sq(&r);
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < options.max_iterations && !converged {
        iterations += 1;
        if sse == 0.0 {
            converged = true;
            break;
        }
        let jac = jacobian(&f, &x, bounds, options.relative_step);
        let grad: Vec<f64> = jac.iter().map(|c| dot(c, &r)).collect();
        // Parameters held at a bound by a gradient pushing outwards stay fixed.
        let free: Vec<usize> = (0..n)
            .filter(|&j| {
                let (lo, hi) = bounds[j];
                !((x[j] <= lo && grad[j] > 0.0) || (x[j] >= hi && grad[j] < 0.0))
            })
            .collect();
        if free.is_empty() {
            converged = true;
            break;
        }
        let normal: Vec<Vec<f64>> = free
            .iter()
            .map(|&i| free.iter().map(|&j| dot(&jac[i], &jac[j])).collect())
            .collect();
        let trace: f64 = (0..free.len()).map(|i| normal[i][i]).sum();
        let rhs: Vec<f64> = free.iter().map(|&j| -grad[j]).collect();

        let mut accepted = None;
        while lambda <= LAMBDA_MAX {
            let mut damped = normal.clone();
            for (i, row) in damped.iter_mut().enumerate() {
                row[i] += lambda * normal[i][i].max(1e-15 * trace).max(f64::MIN_POSITIVE);
            }
            if let Some(step) = solve_dense(damped, rhs.clone()) {
                let mut candidate = x.clone();
                for (k, &j) in free.iter().enumerate() {
                    candidate[j] += step[k];
                }
                clamp(&mut candidate, bounds);
                let r_new = f(&candidate);
                let sse_new = sum_sq(&r_new);
                if sse_new.is_finite() && sse_new <= sse {
                    lambda = (lambda / 3.0).max(1e-12);
                    accepted = Some((candidate, r_new, sse_new));
                    break;
                }
            }
            lambda *= 4.0;
        }

        match accepted {
            Some((x_new, r_new, sse_new)) => {
                let dx: f64 = x_new
                    .iter()
                    .zip(&x)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                let xn: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                let rel_step = dx / xn.max(f64::MIN_POSITIVE);
                let rel_drop = (sse - sse_new) / sse;
                x = x_new;
                r = r_new;
                sse = sse_new;
                if rel_step < options.step_tolerance || rel_drop < options.sse_tolerance {
                    converged = true;
                }
            }
            // No damped step decreases the objective: the step length has
            // collapsed below any tolerance.
            None => converged = true,
        }
    }

    let jac = jacobian(&f, &x, bounds, options.relative_step);
    let identifiable = is_identifiable(&jac, &x, bounds, m.max(1));
    Solution {
        params: x,
        residuals: r,
        sse,
        iterations,
        converged,
        identifiable,
    }
}
