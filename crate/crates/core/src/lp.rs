//! Dense phase-one simplex for small feasibility problems `A x = b, x >= 0`.
//!
//! The solver minimises the sum of artificial variables. At the optimum it
//! returns the primal point together with the phase-one dual `y`, which
//! satisfies `A^T y <= 0` and `b^T y = w*` (the optimal infeasibility). When
//! `w* > 0`, `-y` is a Farkas certificate of infeasibility.
//!
//! Bland's rule is used for both entering and leaving variables; the
//! problems solved here are tiny and heavily degenerate (most of `b` is
//! zero), where cycling is a real risk.

use thiserror::Error;

/// Pivot and reduced-cost tolerance.
const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("simplex did not converge within {0} pivots")]
    NonConvergence(usize),
    #[error("constraint matrix is ragged or empty")]
    Shape,
    #[error("non-finite coefficient in constraint data")]
    NonFinite,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseOne {
    /// Primal point; satisfies `A x = b` up to `infeasibility`.
    pub x: Vec<f64>,
    /// Phase-one dual multipliers, one per row of `A`.
    pub y: Vec<f64>,
    /// Optimal sum of artificials.
    pub infeasibility: f64,
    pub pivots: usize,
}

/// Solves the phase-one problem for `rows` (each of length `n`) and `b`.
pub fn phase_one(rows: &[Vec<f64>], b: &[f64]) -> Result<PhaseOne, LpError> {
    let m = rows.len();
    if m == 0 || b.len() != m {
        return Err(LpError::Shape);
    }
    let n = rows[0].len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(LpError::Shape);
    }
    if rows.iter().flatten().chain(b).any(|v| !v.is_finite()) {
        return Err(LpError::NonFinite);
    }

    // columns: x_0..x_{n-1}, artificials a_0..a_{m-1}, rhs
    let width = n + m + 1;
    let rhs = n + m;
    let mut sign = vec![1.0; m];
    let mut t = vec![0.0; m * width];
    for i in 0..m {
        if b[i] < 0.0 {
            sign[i] = -1.0;
        }
        let row = &mut t[i * width..(i + 1) * width];
        for j in 0..n {
            row[j] = sign[i] * rows[i][j];
        }
        row[n + i] = 1.0;
        row[rhs] = sign[i] * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced costs; cost 0 on x, 1 on artificials
    let mut cost = vec![0.0; width];
    for j in 0..n {
        cost[j] = -(0..m).map(|i| t[i * width + j]).sum::<f64>();
    }
    cost[rhs] = -(0..m).map(|i| t[i * width + rhs]).sum::<f64>();

    let max_pivots = 100 * (n + m) + 100;
    let mut pivots = 0;
    while let Some(enter) = (0..n + m).find(|&j| cost[j] < -PIVOT_EPS) {
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            let a = t[i * width + enter];
            if a > PIVOT_EPS {
                let ratio = t[i * width + rhs] / a;
                let better = match leave {
                    None => true,
                    Some(l) => ratio < best || (ratio == best && basis[i] < basis[l]),
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        // phase one is bounded below by zero, so a column without a pivot
        // can only come from round-off; treat as converged on that column
        let Some(r) = leave else {
            cost[enter] = 0.0;
            continue;
        };
        pivot(&mut t, &mut cost, width, m, r, enter);
        basis[r] = enter;
        pivots += 1;
        if pivots > max_pivots {
            return Err(LpError::NonConvergence(max_pivots));
        }
    }

    let mut x = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i * width + rhs];
        }
    }
    // reduced cost of artificial i is 1 - y_i in the sign-normalised rows
    let y = (0..m).map(|i| sign[i] * (1.0 - cost[n + i])).collect();
    let infeasibility = -cost[rhs];
    Ok(PhaseOne { x, y, infeasibility: infeasibility.max(0.0), pivots })
}

fn pivot(t: &mut [f64], cost: &mut [f64], width: usize, m: usize, r: usize, c: usize) {
    let p = t[r * width + c];
    for v in &mut t[r * width..(r + 1) * width] {
        *v /= p;
    }
    let pivot_row: Vec<f64> = t[r * width..(r + 1) * width].to_vec();
    for i in 0..m {
        if i == r {
            continue;
        }
        let f = t[i * width + c];
        if f != 0.0 {
            for (v, &pr) in t[i * width..(i + 1) * width].iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
        }
    }
    let f = cost[c];
    if f != 0.0 {
        for (v, &pr) in cost.iter_mut().zip(&pivot_row) {
            *v -= f * pr;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(rows: &[Vec<f64>], b: &[f64], x: &[f64]) -> f64 {
        rows.iter()
            .zip(b)
            .map(|(r, bi)| (r.iter().zip(x).map(|(a, xi)| a * xi).sum::<f64>() - bi).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn feasible_system() {
        // x0 + x1 = 1, x0 - x1 = 0
        let rows = vec![vec![1.0, 1.0], vec![1.0, -1.0]];
        let b = [1.0, 0.0];
        let s = phase_one(&rows, &b).unwrap();
        assert!(s.infeasibility < 1e-12);
        assert!(residual(&rows, &b, &s.x) < 1e-12);
        assert!((s.x[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn infeasible_system_gives_farkas_vector() {
        // x0 + x1 = 1, x0 + x1 = 2
        let rows = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let b = [1.0, 2.0];
        let s = phase_one(&rows, &b).unwrap();
        assert!(s.infeasibility > 0.5);
        // A^T y <= 0 and b^T y = w* > 0
        for j in 0..2 {
            let aty: f64 = rows.iter().zip(&s.y).map(|(r, yi)| r[j] * yi).sum();
            assert!(aty <= 1e-12);
        }
        let by: f64 = b.iter().zip(&s.y).map(|(a, c)| a * c).sum();
        assert!((by - s.infeasibility).abs() < 1e-12);
    }

    #[test]
    fn negative_rhs_rows_are_normalised() {
        // -x0 = -2  ->  x0 = 2
        let rows = vec![vec![-1.0, 0.0]];
        let s = phase_one(&rows, &[-2.0]).unwrap();
        assert!(s.infeasibility < 1e-12);
        assert_eq!(s.x[0], 2.0);

        // x0 = -1 is infeasible; Farkas y must satisfy A^T y <= 0, b^T y > 0
        let s = phase_one(&[vec![1.0]], &[-1.0]).unwrap();
        assert!(s.infeasibility > 0.0);
        assert!(s.y[0] <= 0.0);
        assert!(-s.y[0] > 0.0);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // many zero right-hand sides with parallel columns
        let rows = vec![
            vec![1.0, -1.0, 1.0, -1.0, 0.0],
            vec![1.0, 1.0, -1.0, -1.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0, 1.0, 1.0],
        ];
        let b = [0.0, 0.0, 0.0, 1.0];
        let s = phase_one(&rows, &b).unwrap();
        assert!(s.infeasibility < 1e-12);
        assert!(residual(&rows, &b, &s.x) < 1e-12);
    }

    #[test]
    fn shape_and_finiteness_checks() {
        assert_eq!(phase_one(&[], &[]), Err(LpError::Shape));
        assert_eq!(phase_one(&[vec![1.0], vec![1.0, 2.0]], &[1.0, 1.0]), Err(LpError::Shape));
        assert_eq!(phase_one(&[vec![f64::NAN]], &[1.0]), Err(LpError::NonFinite));
    }
}
