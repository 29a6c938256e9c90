//! Second-order finite-difference oracle for the largest energy eigenvalue.
//!
//! Uniform grid `z_j = -1 + j h`, `h = 2/(M+1)`, unknowns at the `M`
//! interior points. Clamped conditions come from ghost points
//! (`w_0 = 0`, `w_{-1} = w_1`), which turns the first diagonal entry of the
//! biharmonic stencil into 7. The advection operator `2U'D + U''` is
//! discretized as `U'D + DU'` with central differences, so it stays
//! skew-symmetric and the discrete pencil stays Hermitian.
//!
//! The pencil is solved by block subspace iteration on `M^{-1} H` with a
//! Rayleigh–Ritz step each sweep. Dissipation quadratic forms are evaluated
//! through first and second differences rather than the fourth-difference
//! stencil, which keeps them accurate at large `M`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::baseflow::BaseFlowSample;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::orr_evp::HA_FLOOR;
use crate::params::Params;

pub const MIN_FD_POINTS: usize = 200;

const BLOCK: usize = 12;
const MAX_SWEEPS: usize = 4000;
const SWEEP_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdOracle {
    pub points: usize,
    /// `m` on `M` interior points.
    pub m_coarse: f64,
    /// `m` on `2M` interior points.
    pub m_fine: f64,
    /// Richardson extrapolation of the two.
    pub m_extrapolated: f64,
}

impl FdOracle {
    pub fn re(&self) -> f64 {
        1.0 / self.m_extrapolated
    }
}

/// Largest `m` on `M` and `2M` points, extrapolated assuming an `h^2` error.
pub fn fd_oracle(params: &Params, a: f64, points: usize) -> Result<FdOracle> {
    if points < MIN_FD_POINTS {
        return Err(Error::Domain(format!(
            "finite-difference oracle needs at least {MIN_FD_POINTS} interior points, got {points}"
        )));
    }
    let m1 = fd_eigenvalue(params, a, points)?;
    let m2 = fd_eigenvalue(params, a, 2 * points)?;
    let h1 = 2.0 / (points as f64 + 1.0);
    let h2 = 2.0 / (2.0 * points as f64 + 1.0);
    let (s1, s2) = (h1 * h1, h2 * h2);
    Ok(FdOracle {
        points,
        m_coarse: m1,
        m_fine: m2,
        m_extrapolated: (s1 * m2 - s2 * m1) / (s1 - s2),
    })
}

/// Largest eigenvalue of the finite-difference pencil on `points` interior
/// points, without extrapolation.
pub fn fd_eigenvalue(params: &Params, a: f64, points: usize) -> Result<f64> {
    FdPencil::new(params, a, points)?.max_eigenvalue()
}

struct FdPencil {
    n: usize,
    h: f64,
    a: f64,
    coupling: f64,
    ha: f64,
    hydro: bool,
    /// `(U'_j + U'_{j+1}) / 2h` between neighbouring interior points.
    adv: Vec<f64>,
    /// `B''` at the interior points.
    curv: Vec<f64>,
    chol: BandCholesky,
}

impl FdPencil {
    fn new(params: &Params, a: f64, n: usize) -> Result<Self> {
        if a == 0.0 || !a.is_finite() {
            return Err(Error::Domain(format!("wavenumber a = {a} must be finite and nonzero")));
        }
        if n < 4 {
            return Err(Error::Domain("finite-difference grid is too small".into()));
        }
        let h = 2.0 / (n as f64 + 1.0);
        // z_j and -z_j computed identically, so the grid is exactly symmetric.
        let z: Vec<f64> = (1..=n)
            .map(|j| {
                let k = j as f64 - (n as f64 + 1.0) / 2.0;
                k * h
            })
            .collect();
        let sample = BaseFlowSample::for_params(params, &z)?;
        let adv = (0..n - 1)
            .map(|j| (sample.du[j] + sample.du[j + 1]) / (2.0 * h))
            .collect();
        let h4 = h.powi(4);
        let h2 = h * h;
        let a2 = a * a;
        let mut diag = vec![6.0 / h4 + 4.0 * a2 / h2 + a2 * a2; n];
        diag[0] += 1.0 / h4;
        diag[n - 1] += 1.0 / h4;
        let chol = BandCholesky::new(&diag, -4.0 / h4 - 2.0 * a2 / h2, 1.0 / h4)?;
        Ok(Self {
            n,
            h,
            a,
            coupling: params.coupling(),
            ha: params.ha,
            hydro: params.ha < HA_FLOOR,
            adv,
            curv: sample.d2b,
            chol,
        })
    }

    fn blocks(&self) -> usize {
        if self.hydro {
            1
        } else {
            2
        }
    }

    fn dim(&self) -> usize {
        self.blocks() * self.n
    }

    /// `(K x)_j` with `K` the skew central-difference advection operator.
    fn advect(&self, x: &[Complex64], out: &mut [Complex64]) {
        let n = self.n;
        for j in 0..n {
            let mut v = Complex64::new(0.0, 0.0);
            if j + 1 < n {
                v += x[j + 1] * self.adv[j];
            }
            if j > 0 {
                v -= x[j - 1] * self.adv[j - 1];
            }
            out[j] = v;
        }
    }

    /// `H x = -L x / 2`.
    fn apply_h(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let half_ia = Complex64::new(0.0, -0.5 * self.a);
        let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
        let mut kx = vec![Complex64::new(0.0, 0.0); n];
        self.advect(&x[..n], &mut kx);
        for j in 0..n {
            out[j] = half_ia * kx[j];
        }
        if self.hydro {
            return out;
        }
        let (xw, xl) = x.split_at(n);
        let mut kl = vec![Complex64::new(0.0, 0.0); n];
        self.advect(xl, &mut kl);
        let big_a = self.coupling;
        for j in 0..n {
            out[j] -= half_ia * big_a * self.curv[j] * xl[j];
            out[n + j] = half_ia * big_a * (self.curv[j] * xw[j] - kl[j]);
        }
        out
    }

    fn solve_m(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut out = self.chol.solve(&x[..n]);
        if !self.hydro {
            let scale = 1.0 / (self.ha * self.ha);
            out.extend(self.chol.solve(&x[n..]).into_iter().map(|v| v * scale));
        }
        out
    }

    /// Rows `F x` with `x^H M x = |F x|^2`, built from second differences
    /// (trapezoid-weighted, with ghost rows at the walls), first differences
    /// and the identity.
    fn dissipation_rows(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let (h, a) = (self.h, self.a);
        let mut rows = Vec::with_capacity(self.blocks() * (3 * n + 3));
        for (b, xb) in x.chunks(n).enumerate() {
            let s = if b == 0 { 1.0 } else { self.ha };
            let at = |j: isize| -> Complex64 {
                if j < 1 || j > n as isize {
                    Complex64::new(0.0, 0.0)
                } else {
                    xb[j as usize - 1]
                }
            };
            let wall = s * std::f64::consts::SQRT_2 / (h * h);
            rows.push(xb[0] * wall);
            rows.push(xb[n - 1] * wall);
            for j in 1..=n as isize {
                rows.push((at(j - 1) - at(j) * 2.0 + at(j + 1)) * (s / (h * h)));
            }
            let c = s * std::f64::consts::SQRT_2 * a.abs() / h;
            for j in 0..=n as isize {
                rows.push((at(j + 1) - at(j)) * c);
            }
            for v in xb {
                rows.push(v * (s * a * a));
            }
        }
        rows
    }

    fn max_eigenvalue(&self) -> Result<f64> {
        let dim = self.dim();
        let p = BLOCK.min(dim);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut v = CMatrix::from_fn(dim, p, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        });
        v = v.qr().q();
        let mut prev = f64::NAN;
        let mut settled = 0;
        for _ in 0..MAX_SWEEPS {
            let hv = columns(&v, |c| self.apply_h(c));
            let fv = columns(&v, |c| self.dissipation_rows(c));
            let hs = v.adjoint() * &hv;
            let hs = (&hs + hs.adjoint()) * Complex64::new(0.5, 0.0);
            let ms = fv.adjoint() * &fv;
            let eig = linalg::hermitian_pencil(&hs, &ms)?;
            let theta = eig.values.iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
            if (theta - prev).abs() <= SWEEP_TOL * theta.abs() {
                settled += 1;
                if settled >= 3 {
                    return if theta > 0.0 {
                        Ok(theta)
                    } else {
                        Err(Error::Numerical(format!("largest FD eigenvalue {theta} is not positive")))
                    };
                }
            } else {
                settled = 0;
            }
            prev = theta;
            let y = CMatrix::from_fn(p, p, |r, c| eig.vector(c).map(|v| v[r]).unwrap_or_default());
            let hx = hv * y;
            v = columns(&hx, |c| self.solve_m(c)).qr().q();
        }
        Err(Error::Numerical(format!(
            "finite-difference subspace iteration did not settle in {MAX_SWEEPS} sweeps"
        )))
    }
}

fn columns<F: Fn(&[Complex64]) -> Vec<Complex64>>(m: &CMatrix, f: F) -> CMatrix {
    let cols: Vec<Vec<Complex64>> = m.column_iter().map(|c| f(c.as_slice())).collect();
    let rows = cols[0].len();
    DMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r])
}

/// Cholesky factor of a symmetric positive definite pentadiagonal matrix
/// with constant off-diagonals.
struct BandCholesky {
    /// `(L_ii, L_i,i-1, L_i,i-2)`.
    rows: Vec<[f64; 3]>,
}

impl BandCholesky {
    fn new(diag: &[f64], off1: f64, off2: f64) -> Result<Self> {
        let n = diag.len();
        let mut rows = vec![[0.0; 3]; n];
        for i in 0..n {
            let l2 = if i >= 2 { off2 / rows[i - 2][0] } else { 0.0 };
            let l1 = if i >= 1 {
                let cross = if i >= 2 { l2 * rows[i - 1][1] } else { 0.0 };
                (off1 - cross) / rows[i - 1][0]
            } else {
                0.0
            };
            let d = diag[i] - l1 * l1 - l2 * l2;
            if !(d > 0.0) {
                return Err(Error::Numerical("finite-difference dissipation is not positive definite".into()));
            }
            rows[i] = [d.sqrt(), l1, l2];
        }
        Ok(Self { rows })
    }

    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = b.len();
        let r = &self.rows;
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut v = b[i];
            if i >= 1 {
                v -= y[i - 1] * r[i][1];
            }
            if i >= 2 {
                v -= y[i - 2] * r[i][2];
            }
            y[i] = v / r[i][0];
        }
        for i in (0..n).rev() {
            let mut v = y[i];
            if i + 1 < n {
                v -= y[i + 1] * r[i + 1][1];
            }
            if i + 2 < n {
                v -= y[i + 2] * r[i + 2][2];
            }
            y[i] = v / r[i][0];
        }
        y
    }
}
