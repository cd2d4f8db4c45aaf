//! Dense phase-one simplex for feasibility of `A x = b, x >= 0`.
//!
//! One artificial variable per row starts in the basis; the sum of
//! artificials is minimized with Bland's rule (smallest eligible entering
//! index, ties in the ratio test broken by smallest basic index), which rules
//! out cycling. The system is feasible when the minimum is within the
//! caller's tolerance.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;

/// Outcome of a phase-one solve.
#[derive(Clone, Debug, PartialEq)]
pub struct LPReport {
    pub feasible: bool,
    /// Slack between the tolerance and the final residual; `None` when
    /// infeasible.
    pub margin: Option<f64>,
    pub iterations: usize,
    /// Sum of the artificial variables at the optimum (L1 residual of
    /// `A x = b`).
    pub residual: f64,
}

/// Decide feasibility of `A x = b, x >= 0` for a dense row-major `rows x cols`
/// matrix, accepting an L1 residual up to `tol`.
pub fn phase_one(a: &[f64], rows: usize, cols: usize, b: &[f64], tol: f64) -> Result<LPReport> {
    assert_eq!(a.len(), rows * cols, "matrix shape mismatch");
    assert_eq!(b.len(), rows, "rhs length mismatch");

    let width = cols + rows + 1;
    let rhs = width - 1;
    let mut t = vec![0.0; rows * width];
    for i in 0..rows {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let row = &mut t[i * width..(i + 1) * width];
        for j in 0..cols {
            row[j] = flip * a[i * cols + j];
        }
        row[cols + i] = 1.0;
        row[rhs] = flip * b[i];
    }
    // reduced costs of the artificial objective
    let mut z = vec![0.0; width];
    for i in 0..rows {
        for j in 0..cols {
            z[j] -= t[i * width + j];
        }
        z[rhs] -= t[i * width + rhs];
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    let cap = 50 * (rows + cols) + 1000;
    let mut iterations = 0;
    while let Some(enter) = (0..cols).find(|&j| z[j] < -COST_TOL) {
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            let coef = t[i * width + enter];
            if coef <= PIVOT_TOL {
                continue;
            }
            let ratio = t[i * width + rhs].max(0.0) / coef;
            leave = match leave {
                None => Some((i, ratio)),
                Some((li, lr)) => {
                    let tie = (ratio - lr).abs() <= 1e-12 * (1.0 + lr.abs());
                    if (ratio < lr && !tie) || (tie && basis[i] < basis[li]) {
                        Some((i, ratio))
                    } else {
                        Some((li, lr))
                    }
                }
            };
        }
        // the artificial objective is bounded below, so a missing pivot row
        // means the tableau has lost precision
        let Some((pr, _)) = leave else {
            return Err(Error::IllConditioned { iterations });
        };

        pivot(&mut t, &mut z, width, rows, pr, enter);
        basis[pr] = enter;
        iterations += 1;
        if iterations > cap {
            return Err(Error::IllConditioned { iterations });
        }
    }

    let residual: f64 = (0..rows).filter(|&i| basis[i] >= cols).map(|i| t[i * width + rhs].max(0.0)).sum();
    if !residual.is_finite() {
        return Err(Error::IllConditioned { iterations });
    }
    let feasible = residual <= tol;
    Ok(LPReport { feasible, margin: feasible.then_some(tol - residual), iterations, residual })
}

fn pivot(t: &mut [f64], z: &mut [f64], width: usize, rows: usize, pr: usize, pc: usize) {
    let inv = 1.0 / t[pr * width + pc];
    for v in &mut t[pr * width..(pr + 1) * width] {
        *v *= inv;
    }
    let pivot_row: Vec<f64> = t[pr * width..(pr + 1) * width].to_vec();
    for i in 0..rows {
        if i == pr {
            continue;
        }
        let f = t[i * width + pc];
        if f != 0.0 {
            let row = &mut t[i * width..(i + 1) * width];
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            row[pc] = 0.0;
        }
    }
    let f = z[pc];
    if f != 0.0 {
        for (v, p) in z.iter_mut().zip(&pivot_row) {
            *v -= f * p;
        }
        z[pc] = 0.0;
    }
}
