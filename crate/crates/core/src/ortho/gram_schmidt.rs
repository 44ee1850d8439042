use crate::error::{Error, Result};
use crate::matrix::{axpy, dot_unchecked, norm2, Matrix};
use crate::metrics::UNIT_ROUNDOFF;
use crate::operator::SpdOperator;

use super::{
    check_shapes, CostReport, Diagnostics, Family, Method, Orientation, QrResult, Variant,
};

/// Working storage of one Gram-Schmidt run.
///
/// `w` holds the partially projected columns `z_j^{(i)}`; column `j` is
/// overwritten by `q_j` when it is normalized. `p` holds `A q_j`. HP keeps
/// `x_j^{(i)} = A z_j^{(i)}` for every column, the other variants only a
/// scratch vector for the column being normalized.
struct GsWorkspace<'a> {
    family: Family,
    variant: Variant,
    op: &'a SpdOperator,
    z0: &'a Matrix,
    w: Matrix,
    p: Matrix,
    x: Option<Matrix>,
    scratch: Vec<f64>,
    r: Matrix,
    diagnostics: Diagnostics,
}

impl<'a> GsWorkspace<'a> {
    fn new(z: &'a Matrix, op: &'a SpdOperator, family: Family, variant: Variant) -> Result<Self> {
        let (m, n) = z.shape();
        let x = match variant {
            Variant::Hp => Some(op.apply_block(z)?),
            Variant::Naive | Variant::Ha => None,
        };
        Ok(Self {
            family,
            variant,
            op,
            z0: z,
            w: z.clone(),
            p: Matrix::zeros(m, n),
            x,
            scratch: vec![0.0; m],
            r: Matrix::zeros(n, n),
            diagnostics: Diagnostics::default(),
        })
    }

    /// `r_ij = p_iᵀ z_j` (current column for MGS, original for CGS), then
    /// `z_j -= r_ij q_i` and, for HP, `x_j -= r_ij p_i`.
    fn project(&mut self, i: usize, j: usize) {
        let pi = self.p.col(i);
        let rij = match self.family {
            Family::Mgs => dot_unchecked(pi, self.w.col(j)),
            Family::Cgs => dot_unchecked(pi, self.z0.col(j)),
        };
        self.r[(i, j)] = rij;
        let (qi, zj) = self.w.col_pair(i, j);
        axpy(-rij, qi, zj);
        if let Some(x) = self.x.as_mut() {
            axpy(-rij, pi, x.col_mut(j));
        }
    }

    fn normalize(&mut self, j: usize) -> Result<()> {
        let Self {
            variant,
            op,
            w,
            p,
            x,
            scratch,
            r,
            diagnostics,
            ..
        } = self;
        let xj: &[f64] = match x {
            Some(x) => x.col(j),
            None => {
                op.apply_into(w.col(j), scratch)?;
                &scratch[..]
            }
        };
        let zj = w.col(j);
        let sq = dot_unchecked(zj, xj);
        if !(sq > 0.0) || !sq.is_finite() {
            return Err(Error::Breakdown {
                column: j,
                value: sq,
            });
        }
        if sq < 1e2 * UNIT_ROUNDOFF * norm2(zj) * norm2(xj) {
            diagnostics.tiny_pivots.push(j);
        }
        let rjj = sq.sqrt();
        r[(j, j)] = rjj;
        for v in w.col_mut(j) {
            *v /= rjj;
        }
        match variant {
            Variant::Naive => op.apply_into(w.col(j), p.col_mut(j))?,
            Variant::Ha | Variant::Hp => {
                for (pv, xv) in p.col_mut(j).iter_mut().zip(xj) {
                    *pv = xv / rjj;
                }
            }
        }
        Ok(())
    }
}

/// Gram-Schmidt in the A-inner product.
///
/// The MV count in the returned cost is the operator counter delta, so it is
/// only meaningful when no other thread applies `op` concurrently.
pub fn gram_schmidt(
    z: &Matrix,
    op: &SpdOperator,
    family: Family,
    variant: Variant,
    orientation: Orientation,
) -> Result<QrResult> {
    check_shapes(z, op)?;
    let (m, n) = z.shape();
    let before = op.mv_count();
    let mut ws = GsWorkspace::new(z, op, family, variant)?;
    match orientation {
        Orientation::Col => {
            for j in 0..n {
                for i in 0..j {
                    ws.project(i, j);
                }
                ws.normalize(j)?;
            }
        }
        Orientation::Row => {
            for i in 0..n {
                ws.normalize(i)?;
                for j in i + 1..n {
                    ws.project(i, j);
                }
            }
        }
    }
    let method = Method::gs(family, variant, orientation);
    Ok(QrResult {
        q: ws.w,
        r: ws.r,
        cost: CostReport {
            mv_count: op.mv_count() - before,
            flops: method.flop_model(m, n),
        },
        diagnostics: ws.diagnostics,
    })
}

/// Modified Gram-Schmidt with `2n` applications.
pub fn mgs_naive(z: &Matrix, op: &SpdOperator, orientation: Orientation) -> Result<QrResult> {
    gram_schmidt(z, op, Family::Mgs, Variant::Naive, orientation)
}

/// Modified Gram-Schmidt with `n` sequential applications; `A q_j` is
/// recovered as `A z_j / r_jj`.
pub fn mgs_ha(z: &Matrix, op: &SpdOperator, orientation: Orientation) -> Result<QrResult> {
    gram_schmidt(z, op, Family::Mgs, Variant::Ha, orientation)
}

/// Modified Gram-Schmidt with a single block application `AZ`.
pub fn mgs_hp(z: &Matrix, op: &SpdOperator, orientation: Orientation) -> Result<QrResult> {
    gram_schmidt(z, op, Family::Mgs, Variant::Hp, orientation)
}

/// Classical Gram-Schmidt: projections against the original columns, the
/// diagonal from the A-norm of the projected column.
pub fn cgs(
    z: &Matrix,
    op: &SpdOperator,
    variant: Variant,
    orientation: Orientation,
) -> Result<QrResult> {
    gram_schmidt(z, op, Family::Cgs, variant, orientation)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hand_instance() -> (Matrix, SpdOperator) {
        let z = Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        (
            z,
            SpdOperator::dense(Matrix::from_diag(&[1.0, 4.0])).unwrap(),
        )
    }

    #[test]
    fn hand_example_every_gs_method() {
        let (z, op) = hand_instance();
        let q = Matrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.5]]);
        let r = Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 2.0]]);
        for method in Method::all() {
            if let Method::Gs {
                family,
                variant,
                orientation,
            } = method
            {
                let res = gram_schmidt(&z, &op, family, variant, orientation).unwrap();
                assert_eq!(res.q, q, "{method}");
                assert_eq!(res.r, r, "{method}");
            }
        }
    }

    #[test]
    fn mv_counts_per_variant() {
        let mut rng = crate::Rng::new(4);
        let z = rng.normal_matrix(30, 6);
        let op = crate::testbed::random_dense_spd(30, &mut rng);
        let naive = mgs_naive(&z, &op, Orientation::Col).unwrap();
        assert_eq!(naive.cost.mv_count, 12);
        assert_eq!(mgs_ha(&z, &op, Orientation::Row).unwrap().cost.mv_count, 6);
        assert_eq!(mgs_hp(&z, &op, Orientation::Col).unwrap().cost.mv_count, 6);
        assert_eq!(op.mv_count(), 24);
    }

    #[test]
    fn single_column_cgs_equals_mgs() {
        let mut rng = crate::Rng::new(8);
        let z = rng.normal_matrix(7, 1);
        let op = crate::testbed::random_dense_spd(7, &mut rng);
        for v in [Variant::Naive, Variant::Ha, Variant::Hp] {
            let a = cgs(&z, &op, v, Orientation::Col).unwrap();
            let b = gram_schmidt(&z, &op, Family::Mgs, v, Orientation::Row).unwrap();
            assert_eq!(a.q, b.q);
            assert_eq!(a.r, b.r);
        }
    }

    #[test]
    fn dependent_columns_break_down() {
        let z = Matrix::from_rows(&[&[1.0, 2.0], &[0.0, 0.0], &[0.0, 0.0]]);
        let op = SpdOperator::identity(3);
        let err = mgs_naive(&z, &op, Orientation::Col).unwrap_err();
        assert!(matches!(err, Error::Breakdown { column: 1, .. }), "{err}");
        let zero = Matrix::zeros(3, 1);
        assert!(matches!(
            mgs_hp(&zero, &op, Orientation::Row),
            Err(Error::Breakdown { column: 0, .. })
        ));
    }

    #[test]
    fn shape_errors() {
        let op = SpdOperator::identity(3);
        assert!(mgs_ha(
            &Matrix::zeros(2, 3),
            &SpdOperator::identity(2),
            Orientation::Col
        )
        .is_err());
        assert!(matches!(
            mgs_ha(&Matrix::identity(2), &op, Orientation::Col),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn tiny_squared_norm_is_flagged() {
        // zᵀAz = 2 while ‖z‖‖Az‖ ≈ 1e15
        let op = SpdOperator::diagonal(&[1.0, 1e30]);
        let z = Matrix::from_rows(&[&[1.0], &[1e-15]]);
        let res = mgs_ha(&z, &op, Orientation::Col).unwrap();
        assert_eq!(res.diagnostics.tiny_pivots, vec![0]);
        let clean = mgs_ha(
            &Matrix::identity(3),
            &SpdOperator::identity(3),
            Orientation::Col,
        )
        .unwrap();
        assert!(clean.diagnostics.tiny_pivots.is_empty());
    }
}
