//! Accuracy measures of a computed factorization and the bound surrogates
//! they are compared against.

use crate::decomp::{jacobi_svd_values, spectral_norm, sym_eig};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::operator::SpdOperator;
use crate::testbed::SpdFactors;

/// Unit roundoff of IEEE binary64, `2⁻⁵³`.
pub const UNIT_ROUNDOFF: f64 = 1.0 / 9_007_199_254_740_992.0;

/// Everything measured about one factorization.
#[derive(Clone, Debug, PartialEq)]
pub struct AccuracyReport {
    pub loss_a_orth: f64,
    pub rep_error: f64,
    pub rep_error_rel: f64,
    pub kappa_a: f64,
    pub kappa_ahalf_z: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub unit_roundoff: f64,
}

/// `‖QᵀAQ - I‖₂`, the largest eigenvalue magnitude of the symmetrized
/// defect.
pub fn loss_of_a_orthogonality(q: &Matrix, op: &SpdOperator) -> Result<f64> {
    let aq = op.apply_block(q)?;
    let mut s = q.tr_matmul(&aq)?.symmetrized();
    for i in 0..s.rows() {
        s[(i, i)] -= 1.0;
    }
    let (vals, _) = sym_eig(&s)?;
    Ok(vals.iter().fold(0.0_f64, |acc, v| acc.max(v.abs())))
}

/// `(‖Z - QR‖₂, ‖Z - QR‖₂ / (‖Z‖₂ + ‖Q‖₂‖R‖₂))`.
pub fn representation_error(z: &Matrix, q: &Matrix, r: &Matrix) -> Result<(f64, f64)> {
    let z_norm = spectral_norm(z)?;
    representation_error_with_norm(z, z_norm, q, r)
}

/// As [`representation_error`] with `‖Z‖₂` supplied by the caller.
pub fn representation_error_with_norm(
    z: &Matrix,
    z_norm: f64,
    q: &Matrix,
    r: &Matrix,
) -> Result<(f64, f64)> {
    let residual = z.sub(&q.matmul(r)?)?;
    let abs = spectral_norm(&residual)?;
    let scale = z_norm + spectral_norm(q)? * spectral_norm(r)?;
    let rel = if scale > 0.0 { abs / scale } else { 0.0 };
    Ok((abs, rel))
}

/// `κ(A^{1/2} Z)` from the exact eigenpairs of a generated `A`.
///
/// Uses `κ(V D^{1/2} Vᵀ Z) = κ(D^{1/2} Vᵀ Z)`; dropping the outer orthogonal
/// factor avoids one rounding step that would otherwise swamp the smallest
/// singular value.
pub fn kappa_weighted(factors: &SpdFactors, z: &Matrix) -> Result<f64> {
    let mut b = factors.v.tr_matmul(z)?;
    for j in 0..b.cols() {
        for (v, d) in b.col_mut(j).iter_mut().zip(&factors.d) {
            *v *= d.sqrt();
        }
    }
    condition_number(&b)
}

/// `κ(A^{1/2} Z)` for an arbitrary spd matrix via its Jacobi
/// eigendecomposition. Accurate only to the eigensolver's resolution of the
/// small eigenvalues of `A`.
pub fn kappa_weighted_general(a: &Matrix, z: &Matrix) -> Result<f64> {
    let (d, v) = sym_eig(&a.symmetrized())?;
    if d.first().is_some_and(|&l| l <= 0.0) {
        return Err(Error::NotPositiveDefinite {
            pivot: 0,
            value: d[0],
        });
    }
    let factors = SpdFactors {
        v,
        d,
        kappa_target: f64::NAN,
    };
    kappa_weighted(&factors, z)
}

/// `σ₁ / σₙ` by one-sided Jacobi.
pub fn condition_number(b: &Matrix) -> Result<f64> {
    let sv = jacobi_svd_values(b)?;
    let smin = *sv.last().expect("at least one column");
    if smin == 0.0 {
        return Err(Error::RankDeficient);
    }
    Ok(sv[0] / smin)
}

/// `(u κ(A) κ(A^{1/2}Z), u (κ(A) + κ(A^{1/2}Z)))`.
pub fn delta_bounds(kappa_a: f64, kappa_ahalf_z: f64) -> (f64, f64) {
    (
        UNIT_ROUNDOFF * kappa_a * kappa_ahalf_z,
        UNIT_ROUNDOFF * (kappa_a + kappa_ahalf_z),
    )
}

/// Measures one factorization against its generating instance.
pub fn accuracy_report(
    factors: &SpdFactors,
    op: &SpdOperator,
    z: &Matrix,
    q: &Matrix,
    r: &Matrix,
) -> Result<AccuracyReport> {
    let kappa_a = factors.kappa();
    let kappa_ahalf_z = kappa_weighted(factors, z)?;
    let (delta1, delta2) = delta_bounds(kappa_a, kappa_ahalf_z);
    let (rep_error, rep_error_rel) = representation_error(z, q, r)?;
    Ok(AccuracyReport {
        loss_a_orth: loss_of_a_orthogonality(q, op)?,
        rep_error,
        rep_error_rel,
        kappa_a,
        kappa_ahalf_z,
        delta1,
        delta2,
        unit_roundoff: UNIT_ROUNDOFF,
    })
}
