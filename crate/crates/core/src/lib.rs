//! Thin QR factorization in an spd-weighted inner product.
//!
//! Given an spd operator `A` and a full-rank `Z`, compute `Z = QR` with
//! `QᵀAQ = I`. Modified and classical Gram-Schmidt are provided in three
//! flavours each (naive with `2n` operator applications, and two `n`
//! application variants), alongside Cholesky QR. The crate also carries the
//! measurement side: loss of A-orthogonality, representation error,
//! weighted condition numbers, problem generators, sweeps and timing.
//!
//! ```
//! use weighted_qr::{factor, Matrix, Method, SpdOperator};
//!
//! let a = SpdOperator::diagonal(&[1.0, 4.0]);
//! let z = Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
//! let qr = factor(Method::MGS_HA, &z, &a).unwrap();
//! assert_eq!(qr.r, Matrix::from_rows(&[&[1.0, 1.0], &[0.0, 2.0]]));
//! assert_eq!(qr.cost.mv_count, 2);
//! ```

pub mod bench;
pub mod check;
pub mod decomp;
pub mod error;
pub mod matrix;
pub mod metrics;
pub mod mm;
pub mod operator;
pub mod ortho;
pub mod rng;
pub mod sweep;
pub mod testbed;

pub use error::{Error, Result};
pub use matrix::{dot, Matrix};
pub use operator::{CsrMatrix, SpdOperator};
pub use ortho::{
    cgs, cholesky_qr, factor, gram_schmidt, mgs_ha, mgs_hp, mgs_naive, CostReport, Diagnostics,
    Family, Method, Orientation, QrResult, Variant,
};
pub use rng::Rng;
