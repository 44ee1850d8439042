//! Problem generators: spd matrices with prescribed spectrum, test matrices
//! `Z` with prescribed weighted condition number, and sparse stand-ins.

use std::fmt;
use std::str::FromStr;

use crate::decomp::haar_orthogonal;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::operator::{CsrMatrix, SpdOperator};
use crate::rng::Rng;

/// Eigen-decomposition `A = V diag(d) Vᵀ` of a generated operator.
#[derive(Clone, Debug)]
pub struct SpdFactors {
    /// Orthogonal eigenvector matrix.
    pub v: Matrix,
    /// Eigenvalues in ascending order, `d_i = 10^{α i}`.
    pub d: Vec<f64>,
    pub kappa_target: f64,
}

impl SpdFactors {
    /// `d_max / d_min`.
    pub fn kappa(&self) -> f64 {
        self.d[self.d.len() - 1] / self.d[0]
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }
}

/// Which eigenvectors span `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// Eigenvectors of the `n` largest eigenvalues (best case).
    Largest,
    /// Eigenvectors of the `n` smallest eigenvalues (worst case).
    Smallest,
}

impl Case {
    pub fn number(self) -> u8 {
        match self {
            Case::Largest => 1,
            Case::Smallest => 2,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Case::Largest),
            2 => Ok(Case::Smallest),
            _ => Err(Error::InvalidArgument(format!(
                "case must be 1 or 2, got {n}"
            ))),
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n: u8 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("case must be 1 or 2, got `{s}`")))?;
        Case::from_number(n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CaseSpec {
    pub case: Case,
    pub m: usize,
    pub n: usize,
    pub kappa_a_target: f64,
    pub kappa_az_target: f64,
    pub seed: u64,
}

/// Dense spd operator `V diag(d) Vᵀ` with Haar `V` and `log10 d_i` evenly
/// spaced between `0` and `log10 κ`.
pub fn build_spd(m: usize, kappa_target: f64, rng: &mut Rng) -> Result<(SpdFactors, SpdOperator)> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "build_spd needs m >= 2, got {m}"
        )));
    }
    if !(kappa_target >= 1.0) || !kappa_target.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "condition number must be finite and >= 1, got {kappa_target}"
        )));
    }
    let alpha = kappa_target.log10() / (m - 1) as f64;
    let mut d: Vec<f64> = (0..m).map(|i| 10f64.powf(alpha * i as f64)).collect();
    d[m - 1] = kappa_target;

    let v = haar_orthogonal(rng, m);
    let mut vd = v.clone();
    for (j, &dj) in d.iter().enumerate() {
        for x in vd.col_mut(j) {
            *x *= dj;
        }
    }
    let a = vd.matmul(&v.transpose())?.symmetrized();
    let factors = SpdFactors { v, d, kappa_target };
    Ok((factors, SpdOperator::dense(a)?))
}

/// `Z = U E Wᵀ` where `U` holds `n` eigenvectors of `A` (ascending
/// eigenvalue order), `E = diag(10^{β i})` and `W` is Haar.
///
/// `A^{1/2} Z` has singular values `√λ_i e_i`, so `β` is solved in closed
/// form for the requested `κ(A^{1/2} Z)`. Targets below the floor set by the
/// selected eigenvalues (`β < 0`) are infeasible.
pub fn build_z(spec: &CaseSpec, factors: &SpdFactors, rng: &mut Rng) -> Result<Matrix> {
    let CaseSpec {
        case,
        m,
        n,
        kappa_az_target,
        ..
    } = *spec;
    if factors.dim() != m {
        return Err(crate::error::dim_err(m, factors.dim()));
    }
    if n == 0 || n > m {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n <= m, got n = {n}, m = {m}"
        )));
    }
    if !(kappa_az_target >= 1.0) || !kappa_az_target.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "condition number must be finite and >= 1, got {kappa_az_target}"
        )));
    }
    let first = match case {
        Case::Largest => m - n,
        Case::Smallest => 0,
    };
    let log_floor = 0.5 * (factors.d[first + n - 1] / factors.d[first]).log10();
    let log_target = kappa_az_target.log10();
    let beta = if n == 1 {
        0.0
    } else {
        (log_target - log_floor) / (n - 1) as f64
    };
    let infeasible = if n == 1 {
        log_target > 1e-12
    } else {
        beta < -1e-12
    };
    if infeasible {
        return Err(Error::InfeasibleTarget {
            target: kappa_az_target,
            floor: 10f64.powf(log_floor),
        });
    }
    let beta = beta.max(0.0);

    let mut ue = factors.v.columns(first..first + n);
    for i in 0..n {
        let e = 10f64.powf(beta * i as f64);
        for x in ue.col_mut(i) {
            *x *= e;
        }
    }
    let w = haar_orthogonal(rng, n);
    ue.matmul(&w.transpose())
}

/// Analytic `κ(A^{1/2} Z)` of [`build_z`] output for a given `β`-solve,
/// i.e. the target itself when feasible. Exposed for tests.
pub fn analytic_kappa_az(factors: &SpdFactors, case: Case, n: usize, beta: f64) -> f64 {
    let m = factors.dim();
    let first = match case {
        Case::Largest => m - n,
        Case::Smallest => 0,
    };
    let sv: Vec<f64> = (0..n)
        .map(|i| factors.d[first + i].sqrt() * 10f64.powf(beta * i as f64))
        .collect();
    let max = sv.iter().cloned().fold(f64::MIN, f64::max);
    let min = sv.iter().cloned().fold(f64::MAX, f64::min);
    max / min
}

/// 5-point Laplacian on an `nx x ny` grid with Dirichlet boundary; node
/// `(ix, iy)` has index `ix + nx·iy`.
pub fn laplacian_spd(nx: usize, ny: usize) -> Result<SpdOperator> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidArgument(format!(
            "laplacian grid must be at least 2x2, got {nx}x{ny}"
        )));
    }
    let n = nx * ny;
    let mut trip = Vec::with_capacity(5 * n);
    for iy in 0..ny {
        for ix in 0..nx {
            let k = ix + nx * iy;
            if iy > 0 {
                trip.push((k, k - nx, -1.0));
            }
            if ix > 0 {
                trip.push((k, k - 1, -1.0));
            }
            trip.push((k, k, 4.0));
            if ix + 1 < nx {
                trip.push((k, k + 1, -1.0));
            }
            if iy + 1 < ny {
                trip.push((k, k + nx, -1.0));
            }
        }
    }
    SpdOperator::sparse(CsrMatrix::from_triplets(n, n, &trip)?)
}

/// Random dense spd matrix `(M + Mᵀ)/2 + m I` with `M` uniform on `[0,1)`.
/// Strict diagonal dominance makes it spd; generation is `O(m²)`, which
/// keeps large benchmark operators cheap.
pub fn random_dense_spd(m: usize, rng: &mut Rng) -> SpdOperator {
    let mut a = Matrix::zeros(m, m);
    for v in a.as_mut_slice() {
        *v = rng.uniform();
    }
    let mut a = a.symmetrized();
    for i in 0..m {
        a[(i, i)] += m as f64;
    }
    SpdOperator::dense(a).expect("square")
}
