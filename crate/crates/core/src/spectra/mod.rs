//! Spectra of distance matrices: eigenvalues, spectral radius, inertia,
//! distance energy and determinants.

mod exact;
mod jacobi;
mod power;

pub use exact::det_exact;
pub use power::{perron_pair, spectral_radius};

use serde::Serialize;

use crate::error::Result;
use crate::graph::DistanceMatrix;
use crate::matrix::{norm_inf, Lu, Matrix};

/// Relative symmetry tolerance accepted for real (non-integer) input.
pub const REAL_SYMMETRY_TOL: f64 = 1e-12;

/// Eigenvalues sorted in descending order together with the accuracy
/// actually achieved by the solver.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
    pub zero_threshold: f64,
}

impl Spectrum {
    pub fn order(&self) -> usize {
        self.eigenvalues.len()
    }

    /// λ₁, the largest eigenvalue.
    pub fn largest(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// Spectrum plus unit eigenvectors, stored as columns in the same order as
/// the eigenvalues.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub spectrum: Spectrum,
    pub vectors: Matrix,
}

impl Eigen {
    pub fn vector(&self, i: usize) -> Vec<f64> {
        (0..self.vectors.rows()).map(|r| self.vectors[(r, i)]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

/// Full eigendecomposition of a real symmetric matrix.
pub fn eigh(m: &Matrix) -> Result<Eigen> {
    m.check_symmetric(REAL_SYMMETRY_TOL)?;
    let n = m.rows();
    let (vals, vecs) = jacobi::jacobi(m)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| vecs[(r, order[c])]);

    let mut residual: f64 = 0.0;
    for (c, &lambda) in eigenvalues.iter().enumerate() {
        let x: Vec<f64> = (0..n).map(|r| vectors[(r, c)]).collect();
        let mx = m.mul_vec(&x);
        let diff: Vec<f64> = mx.iter().zip(&x).map(|(a, b)| a - lambda * b).collect();
        residual = residual.max(norm_inf(&diff));
    }
    let zero_threshold = (10.0 * residual).max(1e-9 * n as f64 * m.max_abs());

    Ok(Eigen {
        spectrum: Spectrum {
            eigenvalues,
            residual,
            zero_threshold,
        },
        vectors,
    })
}

/// Eigenvalues of a real symmetric matrix (cyclic Jacobi).
pub fn eig_symmetric(m: &Matrix) -> Result<Spectrum> {
    eigh(m).map(|e| e.spectrum)
}

/// Spectrum of a distance matrix. Integer input is symmetric by
/// construction, so no tolerance is involved in the symmetry check.
pub fn distance_spectrum(d: &DistanceMatrix) -> Result<Spectrum> {
    let m = d.to_matrix();
    m.check_symmetric(0.0)?;
    eig_symmetric(&m)
}

pub fn distance_eigen(d: &DistanceMatrix) -> Result<Eigen> {
    let m = d.to_matrix();
    m.check_symmetric(0.0)?;
    eigh(&m)
}

/// Sign counts against the spectrum's zero threshold.
pub fn inertia(s: &Spectrum) -> Inertia {
    let positive = s
        .eigenvalues
        .iter()
        .filter(|&&l| l > s.zero_threshold)
        .count();
    let zero = s
        .eigenvalues
        .iter()
        .filter(|&&l| l.abs() <= s.zero_threshold)
        .count();
    Inertia {
        positive,
        zero,
        negative: s.order() - positive - zero,
    }
}

/// Sum of absolute eigenvalues.
pub fn distance_energy(s: &Spectrum) -> f64 {
    s.eigenvalues.iter().map(|l| l.abs()).sum()
}

/// `det(x·I − m)` by partially pivoted LU.
pub fn char_poly_eval(m: &Matrix, x: f64) -> Result<f64> {
    Ok(Lu::new(&m.shifted_negation(x))?.det())
}

pub fn distance_det_exact(d: &DistanceMatrix) -> num_bigint::BigInt {
    let rows: Vec<Vec<i64>> = d
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(i64::from).collect())
        .collect();
    det_exact(&rows).expect("distance matrices are square")
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::error::Error;
    use crate::graph::{build_clique_tree, clique_path, distance_matrix, BlockSpec};

    fn star() -> DistanceMatrix {
        distance_matrix(
            &build_clique_tree(&[
                BlockSpec::root(2),
                BlockSpec::attached(2, 0, 1),
                BlockSpec::attached(2, 0, 1),
            ])
            .unwrap(),
        )
    }

    fn path_d(sizes: &[usize]) -> DistanceMatrix {
        distance_matrix(&clique_path(sizes).unwrap())
    }

    #[test]
    fn complete_graph_spectrum() {
        let s = distance_spectrum(&path_d(&[3])).unwrap();
        assert_relative_eq!(s.eigenvalues[0], 2.0, epsilon = 1e-12);
        assert_relative_eq!(s.eigenvalues[1], -1.0, epsilon = 1e-12);
        assert_relative_eq!(s.eigenvalues[2], -1.0, epsilon = 1e-12);
        assert_relative_eq!(distance_energy(&s), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn path_three_spectrum() {
        let s = distance_spectrum(&path_d(&[2, 2])).unwrap();
        let r3 = 3f64.sqrt();
        assert_relative_eq!(s.eigenvalues[0], 1.0 + r3, epsilon = 1e-12);
        assert_relative_eq!(s.eigenvalues[1], 1.0 - r3, epsilon = 1e-12);
        assert_relative_eq!(s.eigenvalues[2], -2.0, epsilon = 1e-12);
        assert_relative_eq!(distance_energy(&s), 2.0 * (1.0 + r3), epsilon = 1e-12);
    }

    #[test]
    fn path_four_radius_and_energy() {
        let d = path_d(&[2, 2, 2]);
        let s = distance_spectrum(&d).unwrap();
        let lambda = 2.0 + 10f64.sqrt();
        assert_relative_eq!(s.largest(), lambda, max_relative = 1e-12);
        assert_relative_eq!(distance_energy(&s), 4.0 + 2.0 * 10f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(spectral_radius(&d.to_matrix()).unwrap(), lambda, max_relative = 1e-12);
        assert!(s.residual <= 1e-10 * 4.0 * 3.0);
    }

    #[test]
    fn spectral_radius_examples() {
        assert_relative_eq!(spectral_radius(&path_d(&[2]).to_matrix()).unwrap(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(
            spectral_radius(&path_d(&[2, 2]).to_matrix()).unwrap(),
            1.0 + 3f64.sqrt(),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            spectral_radius(&star().to_matrix()).unwrap(),
            2.0 + 7f64.sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn inertia_examples() {
        let expect = |d: &DistanceMatrix, n: usize| {
            let s = distance_spectrum(d).unwrap();
            assert_eq!(
                inertia(&s),
                Inertia {
                    positive: 1,
                    zero: 0,
                    negative: n - 1
                }
            );
        };
        expect(&path_d(&[4]), 4);
        expect(&path_d(&[2, 2, 2]), 4);
        expect(&path_d(&[3, 2, 4]), 7);
    }

    #[test]
    fn inertia_counts_zeros() {
        let m = Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]);
        let s = eig_symmetric(&m).unwrap();
        assert_eq!(
            inertia(&s),
            Inertia {
                positive: 1,
                zero: 1,
                negative: 0
            }
        );
    }

    #[test]
    fn rejects_nonsymmetric_real_input() {
        let m = Matrix::from_rows(&[[0.0, 1.0], [1.0 + 1e-6, 0.0]]);
        assert_eq!(eig_symmetric(&m), Err(Error::NotSymmetric { row: 0, col: 1 }));
        let nearly = Matrix::from_rows(&[[0.0, 1.0], [1.0 + 1e-14, 0.0]]);
        assert!(eig_symmetric(&nearly).is_ok());
    }

    #[test]
    fn eigenvectors_are_unit() {
        let e = distance_eigen(&path_d(&[3, 2, 2])).unwrap();
        for c in 0..e.vectors.cols() {
            let v = e.vector(c);
            assert_relative_eq!(v.iter().map(|x| x * x).sum::<f64>(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn graham_pollak_examples() {
        use num_bigint::BigInt;
        assert_eq!(distance_det_exact(&path_d(&[2])), BigInt::from(-1));
        assert_eq!(distance_det_exact(&path_d(&[2, 2])), BigInt::from(4));
        assert_eq!(distance_det_exact(&star()), BigInt::from(-12));
    }

    #[test]
    fn char_poly_examples() {
        assert_relative_eq!(char_poly_eval(&path_d(&[2]).to_matrix(), 2.0).unwrap(), 3.0, max_relative = 1e-12);
        // (3 − 1 − √3)(3 − 1 + √3)(3 + 2) = (4 − 3)·5
        assert_relative_eq!(char_poly_eval(&path_d(&[2, 2]).to_matrix(), 3.0).unwrap(), 5.0, max_relative = 1e-12);
        assert_relative_eq!(char_poly_eval(&Matrix::zeros(1, 1), 5.0).unwrap(), 5.0, max_relative = 1e-12);
    }
}
