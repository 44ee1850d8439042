//! Dense factorizations: Householder-based Haar sampling, cyclic Jacobi for
//! symmetric eigenproblems and singular values, Cholesky, triangular solves.

use crate::error::{dim_err, Error, Result};
use crate::matrix::{dot_unchecked, norm2, Matrix};
use crate::rng::Rng;

/// Sweep cap shared by both Jacobi routines.
pub const MAX_JACOBI_SWEEPS: usize = 100;

/// Off-diagonal threshold of the symmetric Jacobi iteration, relative to
/// `‖S‖_F`.
pub const SYM_EIG_TOL: f64 = 1e-15;

/// Haar-distributed `k x k` orthogonal matrix: the Q factor of a standard
/// Gaussian matrix with columns sign-fixed so that `diag(R) > 0`.
pub fn haar_orthogonal(rng: &mut Rng, k: usize) -> Matrix {
    assert!(k >= 1, "haar_orthogonal needs k >= 1");
    loop {
        let g = rng.normal_matrix(k, k);
        if let Some(q) = householder_q_positive(g) {
            return q;
        }
    }
}

/// Q factor of a square matrix by Householder reflections, with column signs
/// chosen so the implied R has a positive diagonal. `None` on exact rank loss.
fn householder_q_positive(mut a: Matrix) -> Option<Matrix> {
    let k = a.rows();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut diag_sign = vec![1.0; k];
    for j in 0..k {
        let x = &a.col(j)[j..];
        let nx = norm2(x);
        if nx == 0.0 || !nx.is_finite() {
            return None;
        }
        let alpha = if x[0] >= 0.0 { -nx } else { nx };
        diag_sign[j] = alpha.signum();
        let mut v = x.to_vec();
        v[0] -= alpha;
        let nv = norm2(&v);
        if nv > 0.0 {
            for vi in &mut v {
                *vi /= nv;
            }
        }
        for c in j..k {
            let col = &mut a.col_mut(c)[j..];
            let s = 2.0 * dot_unchecked(&v, col);
            for (ci, vi) in col.iter_mut().zip(&v) {
                *ci -= s * vi;
            }
        }
        reflectors.push(v);
    }
    let mut q = Matrix::identity(k);
    for (j, v) in reflectors.iter().enumerate().rev() {
        for c in 0..k {
            let col = &mut q.col_mut(c)[j..];
            let s = 2.0 * dot_unchecked(v, col);
            for (ci, vi) in col.iter_mut().zip(v) {
                *ci -= s * vi;
            }
        }
    }
    for (c, &sgn) in diag_sign.iter().enumerate() {
        if sgn < 0.0 {
            for v in q.col_mut(c) {
                *v = -*v;
            }
        }
    }
    Some(q)
}

/// Eigen-decomposition of a symmetric matrix by the cyclic Jacobi method.
///
/// Returns eigenvalues in ascending order with matching eigenvector columns.
/// Input asymmetry beyond `1e-12 ‖S‖_F` is rejected; callers symmetrize first.
pub fn sym_eig(s: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = s.rows();
    if n != s.cols() {
        return Err(dim_err(
            "square matrix",
            format!("{}x{}", s.rows(), s.cols()),
        ));
    }
    let fro = s.frobenius_norm();
    if !fro.is_finite() {
        return Err(Error::InvalidArgument(
            "non-finite entries in sym_eig input".into(),
        ));
    }
    let asym = s.sub(&s.transpose())?.frobenius_norm();
    if asym > 1e-12 * fro {
        return Err(Error::InvalidArgument(format!(
            "matrix is not symmetric (‖S - Sᵀ‖_F = {asym:e})"
        )));
    }
    let mut a = s.symmetrized();
    let mut v = Matrix::identity(n);
    let tol = SYM_EIG_TOL * fro;

    let mut converged = fro == 0.0 || n == 1;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_JACOBI_SWEEPS {
            return Err(Error::NoConvergence {
                routine: "sym_eig",
                sweeps: MAX_JACOBI_SWEEPS,
            });
        }
        sweep += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= tol {
                    continue;
                }
                rotated = true;
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let new_kp = c * akp - sn * akq;
                    let new_kq = sn * akp + c * akq;
                    a[(k, p)] = new_kp;
                    a[(p, k)] = new_kp;
                    a[(k, q)] = new_kq;
                    a[(q, k)] = new_kq;
                }
                a[(p, p)] -= t * apq;
                a[(q, q)] += t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
        converged = !rotated;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.col_mut(dst).copy_from_slice(v.col(src));
    }
    Ok((values, vectors))
}

/// Singular values (descending) of an `m x n` matrix with `m >= n` by
/// one-sided Jacobi rotations on the columns. The Gram matrix is never
/// formed, so small singular values keep their relative accuracy.
pub fn jacobi_svd_values(b: &Matrix) -> Result<Vec<f64>> {
    let (m, n) = b.shape();
    if m < n {
        return Err(dim_err(format!("at least {n} rows"), m));
    }
    if !b.is_finite() {
        return Err(Error::InvalidArgument(
            "non-finite entries in svd input".into(),
        ));
    }
    let mut u = b.clone();
    let tol = f64::EPSILON * (m as f64).sqrt();
    let mut norms: Vec<f64> = (0..n).map(|j| dot_unchecked(u.col(j), u.col(j))).collect();

    let mut sweep = 0;
    loop {
        if sweep == MAX_JACOBI_SWEEPS {
            return Err(Error::NoConvergence {
                routine: "jacobi_svd_values",
                sweeps: MAX_JACOBI_SWEEPS,
            });
        }
        sweep += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot_unchecked(u.col(p), u.col(q));
                if gamma.abs() <= tol * (alpha.sqrt() * beta.sqrt()) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (cp, cq) = col_pair_mut(&mut u, p, q);
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let xp = *x;
                    let yq = *y;
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
                norms[p] = dot_unchecked(cp, cp);
                norms[q] = dot_unchecked(cq, cq);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n).map(|j| norm2(u.col(j))).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

fn col_pair_mut(u: &mut Matrix, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
    debug_assert!(p < q);
    let m = u.rows();
    let (lo, hi) = u.as_mut_slice().split_at_mut(q * m);
    (&mut lo[p * m..(p + 1) * m], &mut hi[..m])
}

/// Largest singular value.
pub fn spectral_norm(b: &Matrix) -> Result<f64> {
    if b.rows() >= b.cols() {
        Ok(jacobi_svd_values(b)?.first().copied().unwrap_or(0.0))
    } else {
        spectral_norm(&b.transpose())
    }
}

/// Upper Cholesky factor `R` with `RᵀR = (G + Gᵀ)/2`.
///
/// A non-positive or non-finite pivot is reported as `NotPositiveDefinite`,
/// which is how Cholesky QR signals failure on ill-conditioned input.
pub fn cholesky_upper(g: &Matrix) -> Result<Matrix> {
    let n = g.rows();
    if n != g.cols() {
        return Err(dim_err(
            "square matrix",
            format!("{}x{}", g.rows(), g.cols()),
        ));
    }
    let g = g.symmetrized();
    let mut r = Matrix::zeros(n, n);
    for j in 0..n {
        let rj = r.col(j);
        let pivot = g[(j, j)] - dot_unchecked(&rj[..j], &rj[..j]);
        if !(pivot > 0.0) || !pivot.is_finite() {
            return Err(Error::NotPositiveDefinite {
                pivot: j,
                value: pivot,
            });
        }
        let rjj = pivot.sqrt();
        r[(j, j)] = rjj;
        for l in j + 1..n {
            let s = g[(j, l)] - dot_unchecked(&r.col(j)[..j], &r.col(l)[..j]);
            r[(j, l)] = s / rjj;
        }
    }
    Ok(r)
}

/// Solves `X R = Z` for `X` with `R` upper triangular, one column of `X` at a
/// time.
pub fn tri_solve_right(z: &Matrix, r: &Matrix) -> Result<Matrix> {
    let n = r.rows();
    if r.cols() != n || z.cols() != n {
        return Err(dim_err(
            format!("Z with {n} columns and square R"),
            format!("Z {:?}, R {:?}", z.shape(), r.shape()),
        ));
    }
    for i in 0..n {
        let d = r[(i, i)];
        if d == 0.0 || !d.is_finite() {
            return Err(Error::SingularMatrix { index: i });
        }
    }
    let mut x = z.clone();
    for j in 0..n {
        for k in 0..j {
            let rkj = r[(k, j)];
            if rkj != 0.0 {
                let (xk, xj) = x.col_pair(k, j);
                for (a, b) in xj.iter_mut().zip(xk) {
                    *a -= rkj * b;
                }
            }
        }
        let d = r[(j, j)];
        for v in x.col_mut(j) {
            *v /= d;
        }
    }
    Ok(x)
}
