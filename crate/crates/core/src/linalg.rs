//! Dense generalized eigensolvers for pencils `H q = m M q`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Eigenvalues and eigenvectors of a pencil, in no particular order.
pub struct PencilEigen {
    pub values: Vec<Complex64>,
    vectors: Option<CMatrix>,
    /// Kept for inverse iteration when vectors were not computed directly.
    general: Option<(CMatrix, CMatrix)>,
}

impl PencilEigen {
    /// Eigenvector belonging to `values[idx]`.
    pub fn vector(&self, idx: usize) -> Result<CVector> {
        if let Some(v) = &self.vectors {
            return Ok(v.column(idx).into_owned());
        }
        let (h, m) = self.general.as_ref().expect("general pencil data");
        inverse_iteration(h, m, self.values[idx])
    }
}

pub fn is_hermitian(a: &CMatrix, tol: f64) -> bool {
    if !a.is_square() {
        return false;
    }
    let scale = a.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let n = a.nrows();
    (0..n).all(|i| (0..=i).all(|j| (a[(i, j)] - a[(j, i)].conj()).norm() <= tol * scale))
}

/// Hermitian `h` and Hermitian positive definite `m`: Cholesky reduction to a
/// standard Hermitian problem. Eigenvalues are returned with zero imaginary part.
pub fn hermitian_pencil(h: &CMatrix, m: &CMatrix) -> Result<PencilEigen> {
    let chol = m
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerical("dissipation matrix is not positive definite".into()))?;
    let l = chol.l();
    if l.diagonal().iter().any(|d| !(d.re > 0.0 && d.re.is_finite() && d.im.abs() <= 1e-12 * d.re)) {
        return Err(Error::Numerical("dissipation matrix is not positive definite".into()));
    }
    let y = l
        .solve_lower_triangular(h)
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let c = l
        .solve_lower_triangular(&y.adjoint())
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?
        .adjoint();
    let c = (&c + c.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = c.symmetric_eigen();
    let vectors = l
        .adjoint()
        .solve_upper_triangular(&eig.eigenvectors)
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    Ok(PencilEigen {
        values: eig.eigenvalues.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        vectors: Some(vectors),
        general: None,
    })
}

/// General pencil with invertible `m`: LU reduction of `m^-1 h` followed by a
/// complex Schur decomposition. Eigenvectors come from inverse iteration.
pub fn general_pencil(h: &CMatrix, m: &CMatrix) -> Result<PencilEigen> {
    let lu = m.clone().lu();
    let a = lu
        .solve(h)
        .ok_or_else(|| Error::Numerical("dissipation matrix is singular".into()))?;
    if a.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Numerical("non-finite entries in reduced pencil".into()));
    }
    let schur = nalgebra::linalg::Schur::try_new(a, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    let values = (0..t.nrows()).map(|i| t[(i, i)]).collect();
    Ok(PencilEigen {
        values,
        vectors: None,
        general: Some((h.clone(), m.clone())),
    })
}

fn inverse_iteration(h: &CMatrix, m: &CMatrix, lambda: Complex64) -> Result<CVector> {
    let n = h.nrows();
    let shift = lambda + Complex64::new(1e-12, 0.0) * lambda.norm().max(1e-300);
    let lu = (h - m * shift).lu();
    let mut x = CVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.1 * i as f64, 0.3));
    for _ in 0..4 {
        let rhs = m * &x;
        x = lu
            .solve(&rhs)
            .ok_or_else(|| Error::Numerical("inverse iteration hit a singular system".into()))?;
        let norm = x.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Numerical("inverse iteration diverged".into()));
        }
        x /= Complex64::new(norm, 0.0);
    }
    Ok(x)
}

/// Normwise backward error `|h q - lambda m q| / ((|h| + |lambda| |m|) |q|)`.
pub fn backward_error(h: &CMatrix, m: &CMatrix, lambda: Complex64, q: &CVector) -> f64 {
    let r = h * q - (m * q) * lambda;
    r.norm() / ((h.norm() + lambda.norm() * m.norm()) * q.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitian_and_general_agree_on_small_pencil() {
        let h = CMatrix::from_row_slice(
            3,
            3,
            &[c(2.0, 0.0), c(0.0, 1.0), c(0.5, 0.0), c(0.0, -1.0), c(1.0, 0.0), c(0.0, 0.2), c(0.5, 0.0), c(0.0, -0.2), c(-1.0, 0.0)],
        );
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[c(4.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(3.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(0.5, 0.0), c(2.0, 0.0)],
        );
        assert!(is_hermitian(&h, 1e-15));
        let herm = hermitian_pencil(&h, &m).unwrap();
        let gen = general_pencil(&h, &m).unwrap();
        let mut a: Vec<f64> = herm.values.iter().map(|v| v.re).collect();
        let mut b: Vec<f64> = gen.values.iter().map(|v| v.re).collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        for idx in 0..3 {
            let q = herm.vector(idx).unwrap();
            assert!(backward_error(&h, &m, herm.values[idx], &q) < 1e-14);
            let q = gen.vector(idx).unwrap();
            assert!(backward_error(&h, &m, gen.values[idx], &q) < 1e-12);
        }
    }

    #[test]
    fn indefinite_mass_is_rejected() {
        let h = CMatrix::identity(2, 2);
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        assert!(matches!(hermitian_pencil(&h, &m), Err(Error::Numerical(_))));
    }
}
