use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination with row pivoting on zero pivots.
pub fn det_exact<R: AsRef<[i64]>>(rows: &[R]) -> Result<BigInt> {
    let n = rows.len();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for r in rows {
        let r = r.as_ref();
        if r.len() != n {
            return Err(Error::NotSquare {
                rows: n,
                cols: r.len(),
            });
        }
        a.push(r.iter().map(|&x| BigInt::from(x)).collect());
    }
    if n == 0 {
        return Ok(BigInt::one());
    }

    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                // Exact by Sylvester's identity.
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}
