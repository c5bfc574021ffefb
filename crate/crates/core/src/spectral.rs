//! Dense Hermitian eigensolver and singular values, both by Jacobi rotations.
//!
//! Matrices here are at most 64×64, so cyclic sweeps are cheap and give
//! eigenvalues with absolute error near machine epsilon times the norm.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::repr::{hermiticity_defect, HermitianOperator};
use crate::{CMatrix, RMatrix, C64, HERMITIAN_TOL};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues sorted descending, with optional eigenvectors as the columns
/// of `vectors` (same order).
#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    #[serde(skip)]
    pub vectors: Option<CMatrix>,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
    }
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let defect = hermiticity_defect(m);
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::Argument(format!("matrix is not Hermitian (defect {defect:e})")));
    }
    Ok(())
}

fn off_diagonal_norm2(a: &CMatrix) -> f64 {
    let d = a.nrows();
    let mut s = 0.0;
    for r in 0..d {
        for c in 0..d {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s
}

/// Cyclic Jacobi on the symmetrized input.
fn jacobi(m: &CMatrix, want_vectors: bool) -> (Vec<f64>, Option<CMatrix>) {
    let d = m.nrows();
    let mut a = (m + m.adjoint()) * C64::new(0.5, 0.0);
    for i in 0..d {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = want_vectors.then(|| CMatrix::identity(d, d));
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let threshold = (f64::EPSILON * f64::EPSILON) * total.max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm2(&a) <= threshold {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / g;
                let tau = (aqq - app) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on (p, q); A ← J† A J.
                let pc = phase.conj();
                for k in 0..d {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * pc * s;
                    a[(k, q)] = akp * s + akq * pc * c;
                }
                for k in 0..d {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * phase * s;
                    a[(q, k)] = apk * s + aqk * phase * c;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                if let Some(v) = v.as_mut() {
                    for k in 0..d {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c - vkq * pc * s;
                        v[(k, q)] = vkp * s + vkq * pc * c;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.map(|v| CMatrix::from_fn(d, d, |r, c| v[(r, order[c])]));
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn eigvalsh(m: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    Ok(jacobi(m, false).0)
}

/// Eigenvalues (descending) and orthonormal eigenvectors (columns).
pub fn eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    check_hermitian(m)?;
    let (values, vectors) = jacobi(m, true);
    Ok((values, vectors.expect("requested")))
}

pub fn eig_hermitian(h: &HermitianOperator, with_vectors: bool) -> Spectrum {
    let (values, vectors) = jacobi(h.matrix(), with_vectors);
    Spectrum { values, vectors }
}

/// Singular values of a complex matrix by one-sided (Hestenes) Jacobi,
/// descending.
pub fn svd_values_complex(m: &CMatrix) -> Vec<f64> {
    // Work on the orientation with fewer columns.
    let mut a = if m.ncols() > m.nrows() { m.adjoint() } else { m.clone() };
    let (rows, cols) = a.shape();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for k in 0..rows {
                    alpha += a[(k, p)].norm_sqr();
                    beta += a[(k, q)].norm_sqr();
                    gamma += a[(k, p)].conj() * a[(k, q)];
                }
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let pc = phase.conj();
                for k in 0..rows {
                    let ap = a[(k, p)];
                    let aq = a[(k, q)];
                    a[(k, p)] = ap * c - aq * pc * s;
                    a[(k, q)] = ap * s + aq * pc * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..cols)
        .map(|j| a.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Singular values of a real matrix, descending.
pub fn svd_values(m: &RMatrix) -> Vec<f64> {
    svd_values_complex(&m.map(|x| C64::new(x, 0.0)))
}

/// Trace norm (sum of singular values).
pub fn trace_norm(m: &CMatrix) -> f64 {
    svd_values_complex(m).iter().sum()
}

pub fn min_eig(m: &CMatrix) -> Result<f64> {
    Ok(*eigvalsh(m)?.last().expect("nonempty"))
}

pub fn max_eig(m: &CMatrix) -> Result<f64> {
    Ok(eigvalsh(m)?[0])
}

/// True when the smallest eigenvalue is at least `-tol`.
pub fn is_psd(m: &CMatrix, tol: f64) -> Result<bool> {
    Ok(min_eig(m)? >= -tol)
}

/// Number of eigenvalues with magnitude above `tol`.
pub fn rank(m: &CMatrix, tol: f64) -> Result<usize> {
    Ok(eigvalsh(m)?.iter().filter(|v| v.abs() > tol).count())
}

/// Principal square root of a PSD matrix; negative eigenvalues are clamped.
pub fn sqrt_psd(m: &CMatrix) -> Result<CMatrix> {
    let (values, v) = eigh(m)?;
    let d = m.nrows();
    let mut scaled = v.clone();
    for (j, &lam) in values.iter().enumerate() {
        let r = lam.max(0.0).sqrt();
        for i in 0..d {
            scaled[(i, j)] *= r;
        }
    }
    Ok(&scaled * v.adjoint())
}
