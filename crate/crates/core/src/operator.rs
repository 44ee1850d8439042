//! Symmetric positive definite operators with an application counter.
//!
//! One application of the operator to a single vector is the cost unit all
//! the Gram-Schmidt variants are compared by. Every `apply` bumps the counter
//! by one and every `apply_block` by the number of columns.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{dim_err, Error, Result};
use crate::matrix::Matrix;

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Assembles from `(row, col, value)` triplets. Duplicates are summed in
    /// input order.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(i, j, _) in triplets {
            if i >= rows || j >= cols {
                return Err(Error::InvalidArgument(format!(
                    "entry ({i}, {j}) outside a {rows}x{cols} matrix"
                )));
            }
        }
        let mut order: Vec<usize> = (0..triplets.len()).collect();
        order.sort_by_key(|&k| (triplets[k].0, triplets[k].1));

        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for k in order {
            let (i, j, v) = triplets[k];
            if last == Some((i, j)) {
                *values.last_mut().expect("entry exists") += v;
                continue;
            }
            col_idx.push(j);
            values.push(v);
            row_ptr[i + 1] += 1;
            last = Some((i, j));
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Iterates stored entries row by row.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1])
                .map(move |k| (i, self.col_idx[k], self.values[k]))
        })
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let mut trip = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m[(i, j)];
                if v != 0.0 {
                    trip.push((i, j, v));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), &trip).expect("indices in range")
    }

    fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[k] * x[self.col_idx[k]];
            }
            *yi = s;
        }
    }
}

#[derive(Clone, Debug)]
pub enum Realization {
    Dense(Matrix),
    Sparse(CsrMatrix),
}

/// An spd operator `A` of dimension `m` with an internal application counter.
///
/// Symmetry and definiteness are not verified on construction; the testbed
/// generators guarantee them, user-supplied matrices are taken on trust.
#[derive(Debug)]
pub struct SpdOperator {
    dim: usize,
    realization: Realization,
    mv_count: AtomicU64,
}

impl Clone for SpdOperator {
    fn clone(&self) -> Self {
        Self {
            dim: self.dim,
            realization: self.realization.clone(),
            mv_count: AtomicU64::new(self.mv_count()),
        }
    }
}

impl SpdOperator {
    pub fn dense(a: Matrix) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(dim_err(
                "square matrix",
                format!("{}x{}", a.rows(), a.cols()),
            ));
        }
        Ok(Self {
            dim: a.rows(),
            realization: Realization::Dense(a),
            mv_count: AtomicU64::new(0),
        })
    }

    pub fn sparse(a: CsrMatrix) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(dim_err(
                "square matrix",
                format!("{}x{}", a.rows(), a.cols()),
            ));
        }
        Ok(Self {
            dim: a.rows(),
            realization: Realization::Sparse(a),
            mv_count: AtomicU64::new(0),
        })
    }

    pub fn identity(m: usize) -> Self {
        Self::sparse(CsrMatrix::identity(m)).expect("identity is square")
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let trip: Vec<_> = d.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        Self::sparse(CsrMatrix::from_triplets(d.len(), d.len(), &trip).expect("in range"))
            .expect("square")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    /// Number of single-vector applications performed so far.
    pub fn mv_count(&self) -> u64 {
        self.mv_count.load(Ordering::Relaxed)
    }

    pub fn reset_mv_count(&self) {
        self.mv_count.store(0, Ordering::Relaxed);
    }

    pub fn to_dense(&self) -> Matrix {
        match &self.realization {
            Realization::Dense(a) => a.clone(),
            Realization::Sparse(a) => a.to_dense(),
        }
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.dim];
        self.apply_into(x, &mut y)?;
        Ok(y)
    }

    /// `y = A x`. Each output entry is accumulated sequentially over the
    /// column index.
    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(dim_err(self.dim, format!("x: {}, y: {}", x.len(), y.len())));
        }
        match &self.realization {
            Realization::Dense(a) => {
                y.fill(0.0);
                for (j, &xj) in x.iter().enumerate() {
                    for (yi, aij) in y.iter_mut().zip(a.col(j)) {
                        *yi += aij * xj;
                    }
                }
            }
            Realization::Sparse(a) => a.mul_vec_into(x, y),
        }
        self.mv_count.fetch_add(1, Ordering::Relaxed);
        Ok(())
    }

    /// `A X` for an `m x k` block. Bitwise equal to `k` calls of [`apply`],
    /// but the dense path streams each column of `A` once for the whole
    /// block.
    ///
    /// [`apply`]: SpdOperator::apply
    pub fn apply_block(&self, x: &Matrix) -> Result<Matrix> {
        if x.rows() != self.dim {
            return Err(dim_err(self.dim, x.rows()));
        }
        let k = x.cols();
        let m = self.dim;
        let mut out = Matrix::zeros(m, k);
        match &self.realization {
            Realization::Dense(a) => {
                let ys = out.as_mut_slice();
                for j in 0..m {
                    let acol = a.col(j);
                    for c in 0..k {
                        let xjc = x[(j, c)];
                        let ycol = &mut ys[c * m..(c + 1) * m];
                        for (yi, aij) in ycol.iter_mut().zip(acol) {
                            *yi += aij * xjc;
                        }
                    }
                }
            }
            Realization::Sparse(a) => {
                for c in 0..k {
                    a.mul_vec_into(x.col(c), out.col_mut(c));
                }
            }
        }
        self.mv_count.fetch_add(k as u64, Ordering::Relaxed);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testbed::laplacian_spd;

    #[test]
    fn identity_apply_counts_one() {
        let op = SpdOperator::identity(3);
        assert_eq!(op.apply(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(op.mv_count(), 1);
    }

    #[test]
    fn diagonal_action() {
        let op = SpdOperator::dense(Matrix::from_diag(&[1.0, 4.0])).unwrap();
        assert_eq!(op.apply(&[1.0, 1.0]).unwrap(), vec![1.0, 4.0]);
    }

    #[test]
    fn dimension_mismatch_is_an_error_and_not_counted() {
        let op = SpdOperator::identity(3);
        assert!(matches!(op.apply(&[1.0]), Err(Error::Dimension { .. })));
        assert!(op.apply_block(&Matrix::zeros(2, 2)).is_err());
        assert_eq!(op.mv_count(), 0);
    }

    #[test]
    fn block_identity_and_diagonal() {
        let op = SpdOperator::identity(2);
        assert_eq!(
            op.apply_block(&Matrix::identity(2)).unwrap(),
            Matrix::identity(2)
        );
        assert_eq!(op.mv_count(), 2);

        let op = SpdOperator::dense(Matrix::from_diag(&[1.0, 4.0])).unwrap();
        let x = Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let y = op.apply_block(&x).unwrap();
        assert_eq!(y, Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 4.0]]));
    }

    #[test]
    fn laplacian_apply_matches_dense_assembly() {
        let op = laplacian_spd(3, 3).unwrap();
        let ones = vec![1.0; 9];
        let y = op.apply(&ones).unwrap();
        // interior node (1,1) has all four neighbours
        assert_eq!(y[4], 0.0);
        for (i, &v) in y.iter().enumerate() {
            if i != 4 {
                assert!(v > 0.0, "boundary row {i} should be positive");
            }
        }
        let dense = op.to_dense();
        let reference: Vec<f64> = (0..9)
            .map(|i| (0..9).map(|j| dense[(i, j)]).sum())
            .collect();
        for (a, b) in y.iter().zip(&reference) {
            assert!((a - b).abs() <= 1e-13 * 8.0 * 3.0);
        }
    }

    #[test]
    fn triplets_sum_duplicates() {
        let a = CsrMatrix::from_triplets(2, 2, &[(1, 1, 1.0), (0, 0, 2.0), (1, 1, 0.5)]).unwrap();
        assert_eq!(a.nnz(), 2);
        assert_eq!(a.to_dense(), Matrix::from_diag(&[2.0, 1.5]));
        assert!(CsrMatrix::from_triplets(2, 2, &[(2, 0, 1.0)]).is_err());
    }
}
