//! Thin QR factorization `Z = QR` with `QᵀAQ = I` for an spd operator `A`.
//!
//! Every method returns the same contract and differs only in how the
//! entries of `R` reach the operator:
//!
//! * naive: `x_j = A z_j` for the norm and `p_j = A q_j` for later
//!   projections, two applications per column;
//! * HA: `p_j = x_j / r_jj`, one sequential application per column;
//! * HP: `X = AZ` in one block call, with `x_j` kept current by the same
//!   projection recurrence as `z_j`;
//! * Cholesky QR: `R = chol(Zᵀ A Z)`, `Q = Z R⁻¹`.

mod cholqr;
mod gram_schmidt;
mod method;

pub use cholqr::cholesky_qr;
pub use gram_schmidt::{cgs, gram_schmidt, mgs_ha, mgs_hp, mgs_naive};
pub use method::{parse_method_list, Family, Method, Orientation, Variant};

use crate::error::Result;
use crate::matrix::Matrix;
use crate::operator::SpdOperator;

/// Cost of one factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CostReport {
    /// Operator applications consumed, measured from the operator counter.
    pub mv_count: u64,
    /// Analytic flop model excluding the applications themselves.
    pub flops: u64,
}

/// Non-fatal observations made during a factorization.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// Zero-based columns whose squared A-norm was positive but below
    /// `1e2 · u · ‖z‖ ‖Az‖`.
    pub tiny_pivots: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct QrResult {
    pub q: Matrix,
    /// Upper triangular; entries below the diagonal are exactly `0.0`.
    pub r: Matrix,
    pub cost: CostReport,
    pub diagnostics: Diagnostics,
}

/// Runs `method` on `Z`.
pub fn factor(method: Method, z: &Matrix, op: &SpdOperator) -> Result<QrResult> {
    match method {
        Method::Gs {
            family,
            variant,
            orientation,
        } => gram_schmidt(z, op, family, variant, orientation),
        Method::CholeskyQr => cholesky_qr(z, op),
    }
}

pub(crate) fn check_shapes(z: &Matrix, op: &SpdOperator) -> Result<()> {
    use crate::error::{dim_err, Error};
    let (m, n) = z.shape();
    if n == 0 || m < n {
        return Err(Error::InvalidArgument(format!(
            "need m >= n >= 1, got {m}x{n}"
        )));
    }
    if op.dim() != m {
        return Err(dim_err(format!("operator of dimension {m}"), op.dim()));
    }
    if !z.is_finite() {
        return Err(Error::InvalidArgument("Z has non-finite entries".into()));
    }
    Ok(())
}
