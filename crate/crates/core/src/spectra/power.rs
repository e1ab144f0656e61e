//! Power iteration for the Perron root of a nonnegative matrix.

use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};

const RESIDUAL_TOL: f64 = 1e-13;
const MAX_ITERATIONS: usize = 200_000;

/// Perron root and unit (2-norm) Perron vector of a nonnegative square
/// matrix, starting from the all-ones vector.
///
/// Iterates with `M + I`, which is primitive whenever `M` is irreducible,
/// and stops once `‖Mx − ρx‖∞ ≤ 1e-13·‖M‖∞` where `ρ = xᵀMx`. Works for the
/// non-symmetric quotient matrices as well as for distance matrices.
pub fn perron_pair(m: &Matrix) -> Result<(f64, Vec<f64>)> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)] < 0.0 {
                return Err(Error::NegativeEntry { row: i, col: j });
            }
        }
    }
    if n == 0 || m.max_abs() == 0.0 {
        return Err(Error::ZeroMatrix);
    }

    let scale = (0..n)
        .map(|i| m.row(i).iter().sum::<f64>())
        .fold(0.0, f64::max);
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..MAX_ITERATIONS {
        let mx = m.mul_vec(&x);
        let rq = dot(&x, &mx);
        let residual = mx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - rq * b).abs())
            .fold(0.0, f64::max);
        if residual <= RESIDUAL_TOL * scale && rq > 0.0 {
            return Ok((rq, x));
        }
        let y: Vec<f64> = mx.iter().zip(&x).map(|(a, b)| a + b).collect();
        let norm = dot(&y, &y).sqrt();
        x = y.into_iter().map(|v| v / norm).collect();
    }
    Err(Error::NoConvergence {
        method: "power iteration",
        iterations: MAX_ITERATIONS,
    })
}

/// Largest eigenvalue of a nonnegative irreducible matrix.
pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    perron_pair(m).map(|(r, _)| r)
}
