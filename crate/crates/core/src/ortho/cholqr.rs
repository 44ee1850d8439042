use crate::decomp::{cholesky_upper, tri_solve_right};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::operator::SpdOperator;

use super::{check_shapes, CostReport, Diagnostics, Method, QrResult};

/// Cholesky QR in the A-inner product: `G = Zᵀ(AZ)`, `R = chol(G)`,
/// `Q = Z R⁻¹`. Fails with `NotPositiveDefinite` once `G` is numerically
/// singular.
pub fn cholesky_qr(z: &Matrix, op: &SpdOperator) -> Result<QrResult> {
    check_shapes(z, op)?;
    let (m, n) = z.shape();
    let before = op.mv_count();
    let az = op.apply_block(z)?;
    let gram = z.tr_matmul(&az)?;
    let r = cholesky_upper(&gram)?;
    let q = tri_solve_right(z, &r)?;
    Ok(QrResult {
        q,
        r,
        cost: CostReport {
            mv_count: op.mv_count() - before,
            flops: Method::CholeskyQr.flop_model(m, n),
        },
        diagnostics: Diagnostics::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padded_identity() {
        let mut z = Matrix::zeros(5, 3);
        for i in 0..3 {
            z[(i, i)] = 1.0;
        }
        let res = cholesky_qr(&z, &SpdOperator::identity(5)).unwrap();
        assert_eq!(res.q, z);
        assert_eq!(res.r, Matrix::identity(3));
        assert_eq!(res.cost.mv_count, 3);
    }

    #[test]
    fn hand_example() {
        let z = Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let op = SpdOperator::dense(Matrix::from_diag(&[1.0, 4.0])).unwrap();
        let res = cholesky_qr(&z, &op).unwrap();
        assert_eq!(res.r, Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 2.0]]));
        assert_eq!(res.q, Matrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.5]]));
    }

    #[test]
    fn dependent_columns_are_not_positive_definite() {
        let z = Matrix::from_rows(&[&[1.0, 2.0], &[0.0, 0.0]]);
        assert!(matches!(
            cholesky_qr(&z, &SpdOperator::identity(2)),
            Err(crate::Error::NotPositiveDefinite { .. })
        ));
    }
}
