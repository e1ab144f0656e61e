//! Quotient matrices of distance matrices over vertex partitions, and the
//! equitable partition of the clique path `P_{n₁+1,2,…,2,n₂+1}`.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{clique_path, CliqueTree, DistanceMatrix};
use crate::matrix::{norm_inf, Matrix};
use crate::report::{Check, Relation, VerificationReport};
use crate::spectra::{distance_spectrum, perron_pair};

pub type Rational = Ratio<i64>;

/// Ordered cells of disjoint vertex sets covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    cells: Vec<Vec<usize>>,
    n: usize,
}

impl Partition {
    pub fn new(n: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for (i, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::PartitionMismatch(format!("cell {i} is empty")));
            }
            for &v in cell {
                if v >= n {
                    return Err(Error::PartitionMismatch(format!(
                        "cell {i} names vertex {v} outside 0..{n}"
                    )));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::PartitionMismatch(format!("vertex {v} appears twice")));
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::PartitionMismatch(format!("vertex {v} is not covered")));
        }
        Ok(Self { cells, n })
    }

    /// Every vertex in its own cell, in vertex order.
    pub fn discrete(n: usize) -> Self {
        Self {
            cells: (0..n).map(|v| vec![v]).collect(),
            n,
        }
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// The `n × m` 0/1 matrix with `S[v][j] = 1` iff `v` lies in cell `j`.
    pub fn characteristic_matrix(&self) -> Matrix {
        let mut s = Matrix::zeros(self.n, self.cells.len());
        for (j, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                s[(v, j)] = 1.0;
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientSystem {
    pub partition: Partition,
    pub characteristic: Matrix,
    /// Average block row sums, kept exact.
    pub quotient: Vec<Vec<Rational>>,
    pub equitable: bool,
    /// `(i, j)` pairs whose block has non-constant row sums.
    pub offending_blocks: Vec<(usize, usize)>,
}

impl QuotientSystem {
    pub fn quotient_f64(&self) -> Matrix {
        let m = self.quotient.len();
        Matrix::from_fn(m, m, |i, j| {
            self.quotient[i][j]
                .to_f64()
                .expect("small rationals convert")
        })
    }

    /// The quotient as integers, when every entry is integral.
    pub fn quotient_integer(&self) -> Option<Vec<Vec<i64>>> {
        self.quotient
            .iter()
            .map(|row| {
                row.iter()
                    .map(|q| q.is_integer().then(|| q.to_integer()))
                    .collect()
            })
            .collect()
    }
}

/// `X₁` = first block minus its cut vertex, then the `k − 1` cut vertices
/// along the path as singletons, then the last block minus its cut vertex.
///
/// `g` must be the graph produced by `clique_path([n1+1, 2, …, 2, n2+1])`.
pub fn cliquepath_partition(g: &CliqueTree, n1: usize, k: usize, n2: usize) -> Result<Partition> {
    let expected = cliquepath_graph(n1, k, n2)?;
    if expected.specs() != g.specs() {
        return Err(Error::PartitionMismatch(format!(
            "graph is not P_{{{},2,...,2,{}}} with {k} blocks",
            n1 + 1,
            n2 + 1
        )));
    }
    let mut cells = Vec::with_capacity(k + 1);
    cells.push((0..n1).collect());
    cells.extend((n1..n1 + k - 1).map(|v| vec![v]));
    cells.push((n1 + k - 1..n1 + k - 1 + n2).collect());
    Partition::new(g.vertex_count(), cells)
}

/// Builds `P_{n₁+1,2,…,2,n₂+1}` with `k ≥ 2` blocks.
pub fn cliquepath_graph(n1: usize, k: usize, n2: usize) -> Result<CliqueTree> {
    check_cliquepath_params(n1, k, n2)?;
    let mut sizes = vec![2; k];
    sizes[0] = n1 + 1;
    sizes[k - 1] = n2 + 1;
    clique_path(&sizes)
}

fn check_cliquepath_params(n1: usize, k: usize, n2: usize) -> Result<()> {
    if n1 == 0 {
        return Err(Error::Precondition("n1 must be at least 1".into()));
    }
    if n2 == 0 {
        return Err(Error::Precondition("n2 must be at least 1".into()));
    }
    if k < 2 {
        return Err(Error::Precondition("k must be at least 2".into()));
    }
    Ok(())
}

/// Quotient matrix of `d` over `p`, with an exact constant-row-sum test for
/// equitability.
pub fn quotient_matrix(d: &DistanceMatrix, p: &Partition) -> Result<QuotientSystem> {
    if d.order() != p.vertex_count() {
        return Err(Error::PartitionMismatch(format!(
            "partition covers {} vertices, matrix has order {}",
            p.vertex_count(),
            d.order()
        )));
    }
    let m = p.cells.len();
    let mut quotient = vec![vec![Rational::zero(); m]; m];
    let mut offending_blocks = Vec::new();
    for (i, ci) in p.cells.iter().enumerate() {
        for (j, cj) in p.cells.iter().enumerate() {
            let row_sums: Vec<i64> = ci
                .iter()
                .map(|&u| cj.iter().map(|&v| i64::from(d.get(u, v))).sum())
                .collect();
            let total: i64 = row_sums.iter().sum();
            quotient[i][j] = Rational::new(total, ci.len() as i64);
            if row_sums.iter().any(|&s| s != row_sums[0]) {
                offending_blocks.push((i, j));
            }
        }
    }
    Ok(QuotientSystem {
        characteristic: p.characteristic_matrix(),
        partition: p.clone(),
        quotient,
        equitable: offending_blocks.is_empty(),
        offending_blocks,
    })
}

/// `u_{k−1} = (1, …, k−1)`.
pub fn u_vector(k: usize) -> Vec<i64> {
    (1..k as i64).collect()
}

/// `w_{k−1}`, the reversal of `u_{k−1}`.
pub fn w_vector(k: usize) -> Vec<i64> {
    (1..k as i64).rev().collect()
}

/// Distance matrix of the path on `m` vertices, `|i − j|`.
pub fn path_distance_rows(m: usize) -> Vec<Vec<i64>> {
    (0..m)
        .map(|i| (0..m).map(|j| (i as i64 - j as i64).abs()).collect())
        .collect()
}

/// Closed form of the quotient matrix of `P_{n₁+1,2,…,2,n₂+1}`:
///
/// ```text
/// [ n₁−1      uᵀ        k·n₂ ]
/// [ n₁·u   D(P_{k−1})   n₂·w ]
/// [ k·n₁      wᵀ        n₂−1 ]
/// ```
pub fn quotient_closed_form(n1: usize, k: usize, n2: usize) -> Result<Vec<Vec<i64>>> {
    check_cliquepath_params(n1, k, n2)?;
    let (n1, n2, kk) = (n1 as i64, n2 as i64, k as i64);
    let u = u_vector(k);
    let w = w_vector(k);
    let dp = path_distance_rows(k - 1);

    let mut b = Vec::with_capacity(k + 1);
    let mut first = vec![n1 - 1];
    first.extend(&u);
    first.push(kk * n2);
    b.push(first);
    for i in 0..k - 1 {
        let mut row = vec![n1 * u[i]];
        row.extend(&dp[i]);
        row.push(n2 * w[i]);
        b.push(row);
    }
    let mut last = vec![kk * n1];
    last.extend(&w);
    last.push(n2 - 1);
    b.push(last);
    Ok(b)
}

pub fn int_matrix(rows: &[Vec<i64>]) -> Matrix {
    Matrix::from_fn(rows.len(), rows.len(), |i, j| rows[i][j] as f64)
}

pub const RADIUS_TRANSFER_TOL: f64 = 1e-9;

/// λ(D) by the symmetric eigensolver against λ(B) by power iteration.
pub fn verify_radius_transfer(g: &CliqueTree, qs: &QuotientSystem) -> Result<VerificationReport> {
    let d = crate::graph::distance_matrix(g);
    let mut report = VerificationReport::new("radius_transfer")
        .param("n", g.vertex_count())
        .param("cell_sizes", qs.partition.cell_sizes());
    if qs.partition.vertex_count() != g.vertex_count() {
        return Err(Error::PartitionMismatch("partition and graph orders differ".into()));
    }
    report.push(Check::holds("partition_equitable", qs.equitable));
    if !qs.equitable {
        report.add_note(format!("non-constant row sums in blocks {:?}", qs.offending_blocks));
        return Ok(report);
    }
    let lambda_d = distance_spectrum(&d)?.largest();
    let lambda_b = perron_pair(&qs.quotient_f64())?.0;
    report.push(Check::new(
        "lambda_B_vs_lambda_D",
        lambda_b,
        Relation::Equal(RADIUS_TRANSFER_TOL * lambda_d.abs()),
        lambda_d,
    ));
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct Lift {
    pub vector: Vec<f64>,
    pub report: VerificationReport,
}

/// Lifts an eigenpair `(μ, v)` of the quotient to `S·v` and checks that it
/// is an eigenvector of `d` for the same eigenvalue.
pub fn lift_eigenvector(
    qs: &QuotientSystem,
    d: &DistanceMatrix,
    v: &[f64],
    mu: f64,
) -> Result<Lift> {
    let b = qs.quotient_f64();
    if v.len() != b.rows() {
        return Err(Error::Precondition(format!(
            "vector has length {}, quotient has order {}",
            v.len(),
            b.rows()
        )));
    }
    if d.order() != qs.partition.vertex_count() {
        return Err(Error::PartitionMismatch("partition and matrix orders differ".into()));
    }
    let mut report = VerificationReport::new("eigenvector_lift")
        .param("mu", mu)
        .param("cell_sizes", qs.partition.cell_sizes());
    report.push(Check::holds("partition_equitable", qs.equitable));

    let bv = b.mul_vec(v);
    let quotient_residual = norm_inf(&bv.iter().zip(v).map(|(x, y)| x - mu * y).collect::<Vec<_>>());
    report.push(Check::new(
        "quotient_residual",
        quotient_residual,
        Relation::LessEqual,
        1e-9 * mu.abs(),
    ));

    let lifted = qs.characteristic.mul_vec(v);
    let dl = d.to_matrix().mul_vec(&lifted);
    let residual = norm_inf(&dl.iter().zip(&lifted).map(|(x, y)| x - mu * y).collect::<Vec<_>>());
    report.push(Check::new(
        "lifted_residual",
        residual,
        Relation::LessEqual,
        1e-8 * mu.abs() * norm_inf(&lifted),
    ));
    Ok(Lift {
        vector: lifted,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_clique_tree, distance_matrix, BlockSpec};

    fn ints(rows: &[&[i64]]) -> Vec<Vec<i64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(3, vec![vec![0, 1], vec![2]]).is_ok());
        assert!(Partition::new(3, vec![vec![0, 1], vec![]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1, 5], vec![2]]).is_err());
    }

    #[test]
    fn characteristic_matrix_shape() {
        let p = Partition::new(4, vec![vec![0, 3], vec![1], vec![2]]).unwrap();
        let s = p.characteristic_matrix();
        for v in 0..4 {
            assert_eq!(s.row(v).iter().sum::<f64>(), 1.0);
        }
        for (j, cell) in p.cells().iter().enumerate() {
            assert_eq!((0..4).map(|v| s[(v, j)]).sum::<f64>(), cell.len() as f64);
        }
    }

    #[test]
    fn cliquepath_partitions() {
        let g = clique_path(&[2, 2, 2]).unwrap();
        let p = cliquepath_partition(&g, 1, 3, 1).unwrap();
        assert_eq!(p, Partition::discrete(4));

        let g = clique_path(&[3, 2]).unwrap();
        let p = cliquepath_partition(&g, 2, 2, 1).unwrap();
        assert_eq!(p.cells(), &[vec![0, 1], vec![2], vec![3]]);

        let g = clique_path(&[3, 2, 2, 4]).unwrap();
        let p = cliquepath_partition(&g, 2, 4, 3).unwrap();
        assert_eq!(p.cell_sizes(), vec![2, 1, 1, 1, 3]);

        assert!(cliquepath_partition(&g, 2, 3, 3).is_err());
        assert!(cliquepath_partition(&g, 0, 4, 3).is_err());
    }

    #[test]
    fn quotient_examples() {
        let d = distance_matrix(&clique_path(&[2, 2, 2]).unwrap());
        let qs = quotient_matrix(&d, &Partition::discrete(4)).unwrap();
        assert!(qs.equitable);
        let as_i64: Vec<Vec<i64>> = d
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(i64::from).collect())
            .collect();
        assert_eq!(qs.quotient_integer().unwrap(), as_i64);

        let g = clique_path(&[3, 2]).unwrap();
        let d = distance_matrix(&g);
        let qs = quotient_matrix(&d, &cliquepath_partition(&g, 2, 2, 1).unwrap()).unwrap();
        assert!(qs.equitable);
        assert_eq!(qs.quotient_integer().unwrap(), ints(&[&[1, 1, 2], &[2, 0, 1], &[4, 1, 0]]));

        let star = build_clique_tree(&[
            BlockSpec::root(2),
            BlockSpec::attached(2, 0, 1),
            BlockSpec::attached(2, 0, 1),
        ])
        .unwrap();
        let d = distance_matrix(&star);
        let p = Partition::new(4, vec![vec![1], vec![0, 2, 3]]).unwrap();
        let qs = quotient_matrix(&d, &p).unwrap();
        assert!(qs.equitable);
        assert_eq!(qs.quotient_integer().unwrap(), ints(&[&[0, 3], &[1, 4]]));
    }

    #[test]
    fn non_equitable_partition_detected() {
        let d = distance_matrix(&clique_path(&[2, 2, 2]).unwrap());
        let p = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let qs = quotient_matrix(&d, &p).unwrap();
        assert!(!qs.equitable);
        assert!(!qs.offending_blocks.is_empty());
        // Row sums 5 and 3 over {2,3}: average 4, but not constant.
        assert_eq!(qs.quotient[0][1], Rational::from_integer(4));
    }

    #[test]
    fn quotient_keeps_fractions() {
        let d = distance_matrix(&clique_path(&[2, 2]).unwrap());
        let p = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        let qs = quotient_matrix(&d, &p).unwrap();
        // Distances from {0,1} to 2 are 2 and 1.
        assert_eq!(qs.quotient[0][1], Rational::new(3, 2));
        assert!(qs.quotient_integer().is_none());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(
            quotient_closed_form(1, 3, 1).unwrap(),
            ints(&[&[0, 1, 2, 3], &[1, 0, 1, 2], &[2, 1, 0, 1], &[3, 2, 1, 0]])
        );
        assert_eq!(quotient_closed_form(2, 2, 1).unwrap(), ints(&[&[1, 1, 2], &[2, 0, 1], &[4, 1, 0]]));
        assert_eq!(quotient_closed_form(1, 2, 1).unwrap(), ints(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]));
        assert!(quotient_closed_form(0, 2, 1).is_err());
        assert!(quotient_closed_form(1, 1, 1).is_err());
    }

    #[test]
    fn radius_transfer_examples() {
        for (n1, k, n2) in [(1, 3, 1), (2, 2, 1), (3, 4, 4)] {
            let g = cliquepath_graph(n1, k, n2).unwrap();
            let qs = quotient_matrix(&distance_matrix(&g), &cliquepath_partition(&g, n1, k, n2).unwrap())
                .unwrap();
            let r = verify_radius_transfer(&g, &qs).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn radius_transfer_reports_non_equitable() {
        let g = clique_path(&[2, 2, 2]).unwrap();
        let p = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let qs = quotient_matrix(&distance_matrix(&g), &p).unwrap();
        let r = verify_radius_transfer(&g, &qs).unwrap();
        assert!(!r.pass);
        assert!(r.note.unwrap().contains("blocks"));
    }

    #[test]
    fn lift_identity_partition() {
        let d = distance_matrix(&clique_path(&[2, 2]).unwrap());
        let qs = quotient_matrix(&d, &Partition::discrete(3)).unwrap();
        let (mu, v) = perron_pair(&qs.quotient_f64()).unwrap();
        let lift = lift_eigenvector(&qs, &d, &v, mu).unwrap();
        assert_eq!(lift.vector, v);
        assert!(lift.report.pass, "{:?}", lift.report);
    }

    #[test]
    fn lift_star_is_constant_on_leaves() {
        let star = build_clique_tree(&[
            BlockSpec::root(2),
            BlockSpec::attached(2, 0, 1),
            BlockSpec::attached(2, 0, 1),
        ])
        .unwrap();
        let d = distance_matrix(&star);
        let p = Partition::new(4, vec![vec![1], vec![0, 2, 3]]).unwrap();
        let qs = quotient_matrix(&d, &p).unwrap();
        let (mu, v) = perron_pair(&qs.quotient_f64()).unwrap();
        assert!((mu - (2.0 + 7f64.sqrt())).abs() < 1e-12);
        let lift = lift_eigenvector(&qs, &d, &v, mu).unwrap();
        assert!(lift.report.pass, "{:?}", lift.report);
        assert_eq!(lift.vector[0], lift.vector[2]);
        assert_eq!(lift.vector[2], lift.vector[3]);
    }

    #[test]
    fn lift_rejects_wrong_eigenvalue() {
        let g = clique_path(&[3, 2]).unwrap();
        let d = distance_matrix(&g);
        let qs = quotient_matrix(&d, &cliquepath_partition(&g, 2, 2, 1).unwrap()).unwrap();
        let (mu, v) = perron_pair(&qs.quotient_f64()).unwrap();
        let lift = lift_eigenvector(&qs, &d, &v, mu + 0.5).unwrap();
        assert!(!lift.report.pass);
        let ok = lift_eigenvector(&qs, &d, &v, mu).unwrap();
        assert!(ok.report.pass);
        assert!(ok.vector.iter().all(|&x| x > 0.0));
        assert!(lift_eigenvector(&qs, &d, &[1.0], mu).is_err());
    }
}
