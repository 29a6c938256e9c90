//! The magnetohydrodynamic Orr eigenvalue problem at a fixed wavenumber.
//!
//! For a single Fourier mode `f(z) e^{iax}` the Euler–Lagrange system of the
//! energy ratio reads
//!
//! ```text
//!  ia(2U'D + U'') w - ia A B'' l + 2m (D^2 - a^2)^2 w = 0
//! -ia A (2U'D + U'') l + ia A B'' w + 2m Ha^2 (D^2 - a^2)^2 l = 0
//! ```
//!
//! with `w = Dw = l = Dl = 0` at `z = ±1`. We write it as the pencil
//! `L q + 2m M q = 0` on the clamped interior unknowns `q = (w, l)`.
//!
//! Two assemblies are available. [`PencilForm::Weak`] builds `L` and `M` from
//! the Clenshaw–Curtis-weighted quadratic forms of production and
//! dissipation, so `-L/2` is Hermitian, `M` is Hermitian positive definite,
//! and the returned eigenpair is an exact stationary point of the discrete
//! energy ratio. [`PencilForm::Collocation`] enforces the equations pointwise
//! at the interior nodes; it converges to the same `m` and is kept as a
//! cross-check.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baseflow::BaseFlowSample;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::params::Params;
use crate::spectral::{ClampedMaps, SpectralOperator};

/// Below this Hartmann number the magnetic block of `M` is numerically
/// singular and the problem is solved in its decoupled hydrodynamic form.
pub const HA_FLOOR: f64 = 1e-4;

/// Maximum relative imaginary part accepted for a physical eigenvalue.
pub const REALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PencilForm {
    #[default]
    Weak,
    Collocation,
}

/// Everything about one `(params, N)` configuration that does not depend on
/// the wavenumber. Reused across a whole `Re(a)` curve.
#[derive(Debug, Clone)]
pub struct OrrProblem {
    params: Params,
    op: SpectralOperator,
    maps: ClampedMaps,
    sample: BaseFlowSample,
    coupling: f64,
    // Weak-form pieces, all (N-3) x (N-3).
    mass: DMatrix<f64>,
    stiff1: DMatrix<f64>,
    stiff2: DMatrix<f64>,
    adv_u: DMatrix<f64>,
    adv_b: DMatrix<f64>,
}

impl OrrProblem {
    pub fn new(params: Params, n: usize) -> Result<Self> {
        let op = SpectralOperator::new(n)?;
        let sample = base_sample(&params, op.nodes())?;
        Self::from_parts(params, op, sample)
    }

    pub fn from_parts(params: Params, op: SpectralOperator, sample: BaseFlowSample) -> Result<Self> {
        let coupling = params.coupling();
        Self::with_coupling(params, op, sample, coupling)
    }

    /// Same as [`OrrProblem::from_parts`] but with the coupling parameter `A`
    /// supplied directly instead of `Ha^2 Pm`. Only meant for probing the
    /// structure of the pencil.
    pub fn with_coupling(
        params: Params,
        op: SpectralOperator,
        sample: BaseFlowSample,
        coupling: f64,
    ) -> Result<Self> {
        if sample.z.len() != op.len() || sample.z.iter().zip(op.nodes()).any(|(a, b)| a != b) {
            return Err(Error::Consistency(
                "base-flow sample nodes differ from the collocation nodes".into(),
            ));
        }
        if sample.flow != params.flow {
            return Err(Error::Consistency(format!(
                "base-flow sample is {} but params are {}",
                sample.flow, params.flow
            )));
        }
        let maps = op.clamped();
        let e = maps.injection();
        let de1 = op.d1() * e;
        let de2 = op.d2() * e;
        let w = op.weights();
        let weighted = |m: &DMatrix<f64>, f: &dyn Fn(usize) -> f64| {
            let mut out = m.clone();
            for (r, mut row) in out.row_iter_mut().enumerate() {
                row *= w[r] * f(r);
            }
            out
        };
        let one = |_: usize| 1.0;
        let mass = e.transpose() * weighted(e, &one);
        let stiff1 = de1.transpose() * weighted(&de1, &one);
        let stiff2 = de2.transpose() * weighted(&de2, &one);
        let du = sample.du.clone();
        let db = sample.db.clone();
        let adv_u = de1.transpose() * weighted(e, &|r| du[r]);
        let adv_b = de1.transpose() * weighted(e, &|r| db[r]);
        Ok(Self {
            params,
            op,
            maps,
            sample,
            coupling,
            mass,
            stiff1,
            stiff2,
            adv_u,
            adv_b,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn operator(&self) -> &SpectralOperator {
        &self.op
    }

    pub fn clamped(&self) -> &ClampedMaps {
        &self.maps
    }

    pub fn sample(&self) -> &BaseFlowSample {
        &self.sample
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// Whether the magnetic field is dropped (`Ha < HA_FLOOR`).
    pub fn is_hydrodynamic(&self) -> bool {
        self.params.ha < HA_FLOOR
    }

    pub fn pencil(&self, a: f64) -> Result<EvpPencil> {
        self.pencil_with(a, PencilForm::Weak)
    }

    pub fn pencil_with(&self, a: f64, form: PencilForm) -> Result<EvpPencil> {
        check_wavenumber(a)?;
        let (lmat, mmat) = match form {
            PencilForm::Weak => self.weak_blocks(a),
            PencilForm::Collocation => self.collocation_blocks(a),
        };
        Ok(EvpPencil {
            a,
            params: self.params,
            n: self.op.degree(),
            form,
            hydrodynamic: self.is_hydrodynamic(),
            lmat,
            mmat,
            injection: self.maps.injection().clone(),
        })
    }

    pub fn solve(&self, a: f64) -> Result<EvpSolution> {
        solve_max_m(&self.pencil(a)?)
    }

    /// `(D^2 - a^2)^2` as the quadratic form `|D^2 f|^2 + 2a^2 |Df|^2 + a^4 |f|^2`.
    fn biharmonic_form(&self, a: f64) -> DMatrix<f64> {
        let a2 = a * a;
        &self.stiff2 + &self.stiff1 * (2.0 * a2) + &self.mass * (a2 * a2)
    }

    fn weak_blocks(&self, a: f64) -> (CMatrix, CMatrix) {
        let s = self.biharmonic_form(a);
        // ia (2U'D + U'') in weak form is -ia (X - X^T) with X_jk = (D e_j, U' e_k).
        let ia = Complex64::new(0.0, a);
        let adv = (&self.adv_u - self.adv_u.transpose()).map(|v| -ia * v);
        if self.is_hydrodynamic() {
            return (adv, s.map(|v| Complex64::new(v, 0.0)));
        }
        let big_a = self.coupling;
        // ia A B'' in weak form is -ia A (Y + Y^T) with Y_jk = (D e_j, B' e_k).
        let mag = (&self.adv_b + self.adv_b.transpose()).map(|v| -ia * big_a * v);
        let m = self.maps.len();
        let mut l = CMatrix::zeros(2 * m, 2 * m);
        l.view_mut((0, 0), (m, m)).copy_from(&adv);
        l.view_mut((0, m), (m, m)).copy_from(&(-&mag));
        l.view_mut((m, 0), (m, m)).copy_from(&mag);
        l.view_mut((m, m), (m, m)).copy_from(&(-&adv * Complex64::new(big_a, 0.0)));
        (l, block_diag(&s, self.params.ha2()))
    }

    fn collocation_blocks(&self, a: f64) -> (CMatrix, CMatrix) {
        let e = self.maps.injection();
        let dof = self.maps.dof_indices();
        let m = dof.len();
        let d1e = self.op.d1() * e;
        let a2 = a * a;
        let s = self.maps.d4() - self.maps.d2() * (2.0 * a2) + DMatrix::identity(m, m) * (a2 * a2);
        let s_ = &self.sample;
        let adv_real = DMatrix::from_fn(m, m, |r, c| {
            let k = dof[r];
            2.0 * s_.du[k] * d1e[(k, c)] + s_.d2u[k] * e[(k, c)]
        });
        let ia = Complex64::new(0.0, a);
        let adv = adv_real.map(|v| ia * v);
        if self.is_hydrodynamic() {
            return (adv, s.map(|v| Complex64::new(v, 0.0)));
        }
        let big_a = self.coupling;
        let mag = DMatrix::from_fn(m, m, |r, c| {
            let k = dof[r];
            s_.d2b[k] * e[(k, c)]
        })
        .map(|v| ia * big_a * v);
        let mut l = CMatrix::zeros(2 * m, 2 * m);
        l.view_mut((0, 0), (m, m)).copy_from(&adv);
        l.view_mut((0, m), (m, m)).copy_from(&(-&mag));
        l.view_mut((m, 0), (m, m)).copy_from(&mag);
        l.view_mut((m, m), (m, m)).copy_from(&(-&adv * Complex64::new(big_a, 0.0)));
        (l, block_diag(&s, self.params.ha2()))
    }
}

fn block_diag(s: &DMatrix<f64>, ha2: f64) -> CMatrix {
    let m = s.nrows();
    let mut out = CMatrix::zeros(2 * m, 2 * m);
    out.view_mut((0, 0), (m, m)).copy_from(&s.map(|v| Complex64::new(v, 0.0)));
    out.view_mut((m, m), (m, m))
        .copy_from(&s.map(|v| Complex64::new(ha2 * v, 0.0)));
    out
}

fn check_wavenumber(a: f64) -> Result<()> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::Domain(format!("wavenumber a = {a} must be finite and nonzero")));
    }
    Ok(())
}

/// Base flow on the given nodes; in the hydrodynamic branch the field is
/// still evaluated at the (tiny) supplied `Ha` but never used.
fn base_sample(params: &Params, z: &[f64]) -> Result<BaseFlowSample> {
    BaseFlowSample::for_params(params, z)
}

/// Assembled pencil `L q + 2m M q = 0` at one wavenumber.
#[derive(Debug, Clone)]
pub struct EvpPencil {
    pub a: f64,
    pub params: Params,
    pub n: usize,
    pub form: PencilForm,
    /// Single-field problem with `l = 0` (`Ha < HA_FLOOR`).
    pub hydrodynamic: bool,
    pub lmat: CMatrix,
    pub mmat: CMatrix,
    injection: DMatrix<f64>,
}

impl EvpPencil {
    /// Number of interior unknowns per field.
    pub fn field_len(&self) -> usize {
        self.injection.ncols()
    }

    /// `-L/2`, the matrix with `-L/2 q = m M q`.
    pub fn production(&self) -> CMatrix {
        self.lmat.map(|v| v * -0.5)
    }

    pub fn injection(&self) -> &DMatrix<f64> {
        &self.injection
    }
}

/// Free-function form of [`OrrProblem::pencil`].
pub fn assemble_pencil(
    params: &Params,
    a: f64,
    op: &SpectralOperator,
    sample: &BaseFlowSample,
) -> Result<EvpPencil> {
    check_wavenumber(a)?;
    OrrProblem::from_parts(*params, op.clone(), sample.clone())?.pencil(a)
}

/// Largest real eigenvalue `m = 1/Re_E(a)` and its eigenvector.
#[derive(Debug, Clone)]
pub struct EvpSolution {
    pub a: f64,
    pub m: f64,
    /// `1/m`.
    pub re_a: f64,
    /// Nodal `w` on all `N+1` nodes, clamped at the walls.
    pub w_hat: Vec<Complex64>,
    /// Nodal `l`; identically zero in the hydrodynamic branch.
    pub l_hat: Vec<Complex64>,
    /// Stacked interior unknowns `q`.
    pub q: CVector,
    /// Normwise backward error of the eigenpair.
    pub residual: f64,
    /// Candidates discarded by the reality filter.
    pub spurious_rejected: usize,
    /// `|Im m| / |m|` of the selected eigenvalue before it was made real.
    pub imag_ratio: f64,
}

/// Solves the pencil and returns the largest eigenvalue that passes the
/// reality filter.
pub fn solve_max_m(pencil: &EvpPencil) -> Result<EvpSolution> {
    let h = pencil.production();
    let eig = match pencil.form {
        PencilForm::Weak => linalg::hermitian_pencil(&h, &pencil.mmat)?,
        PencilForm::Collocation => linalg::general_pencil(&h, &pencil.mmat)?,
    };
    let selection = select_real_max(&eig.values)?;
    let lambda = eig.values[selection.index];
    let mut q = eig.vector(selection.index)?;
    let m = lambda.re;
    if !(m > 0.0) {
        return Err(Error::Numerical(format!("largest real eigenvalue m = {m} is not positive")));
    }
    normalize_phase(&mut q);
    let residual = linalg::backward_error(&h, &pencil.mmat, Complex64::new(m, 0.0), &q);

    let e = pencil.injection().map(|v| Complex64::new(v, 0.0));
    let k = pencil.field_len();
    let w_hat = &e * q.rows(0, k);
    let l_hat = if pencil.hydrodynamic {
        CVector::zeros(e.nrows())
    } else {
        &e * q.rows(k, k)
    };
    Ok(EvpSolution {
        a: pencil.a,
        m,
        re_a: 1.0 / m,
        w_hat: w_hat.iter().copied().collect(),
        l_hat: l_hat.iter().copied().collect(),
        q,
        residual,
        spurious_rejected: selection.rejected,
        imag_ratio: selection.imag_ratio,
    })
}

struct Selection {
    index: usize,
    rejected: usize,
    imag_ratio: f64,
}

/// Reality filter: keep `|Im m| / max(|m|, eps) <= REALITY_TOL` with
/// `eps = 1e-3 * median |m|`, then take the largest real part.
fn select_real_max(values: &[Complex64]) -> Result<Selection> {
    if values.is_empty() {
        return Err(Error::Numerical("empty spectrum".into()));
    }
    let mut mags: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    mags.sort_by(f64::total_cmp);
    let median = mags[mags.len() / 2];
    let floor = 1e-3 * median;
    let ratio = |v: &Complex64| v.im.abs() / v.norm().max(floor).max(f64::MIN_POSITIVE);

    let mut best: Option<usize> = None;
    let mut rejected = 0;
    for (i, v) in values.iter().enumerate() {
        if !(v.re.is_finite() && v.im.is_finite()) || ratio(v) > REALITY_TOL {
            rejected += 1;
            continue;
        }
        if best.map_or(true, |b| v.re > values[b].re) {
            best = Some(i);
        }
    }
    match best {
        Some(index) => Ok(Selection {
            index,
            rejected,
            imag_ratio: values[index].im.abs() / values[index].norm().max(f64::MIN_POSITIVE),
        }),
        None => {
            let mut c: Vec<Complex64> = values.to_vec();
            c.sort_by(|x, y| ratio(x).total_cmp(&ratio(y)));
            c.truncate(5);
            Err(Error::NoRealEigenvalue { candidates: c })
        }
    }
}

/// Scales `q` so its largest entry is real and equal to one.
fn normalize_phase(q: &mut CVector) {
    let (idx, _) = q
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, v)| if v.norm() > acc.1 { (i, v.norm()) } else { acc });
    let pivot = q[idx];
    if pivot.norm() > 0.0 {
        *q /= pivot;
    }
}

/// One point of an `Re(a)` curve. Failed solves keep their place with
/// `re = NaN` and the error message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub a: f64,
    pub re: f64,
    pub error: Option<String>,
}

impl CurvePoint {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// `Re(a) = 1/m(a)` over a strictly increasing grid of positive wavenumbers.
pub fn reynolds_curve(params: &Params, a_grid: &[f64], n: usize) -> Result<Vec<CurvePoint>> {
    validate_grid(a_grid)?;
    let problem = OrrProblem::new(*params, n)?;
    Ok(problem.curve(a_grid))
}

impl OrrProblem {
    /// Evaluates the curve on an already validated grid, in parallel, keeping
    /// grid order.
    pub fn curve(&self, a_grid: &[f64]) -> Vec<CurvePoint> {
        a_grid
            .par_iter()
            .map(|&a| match self.solve(a) {
                Ok(sol) => CurvePoint { a, re: sol.re_a, error: None },
                Err(e) => CurvePoint { a, re: f64::NAN, error: Some(e.to_string()) },
            })
            .collect()
    }
}

pub fn validate_grid(a_grid: &[f64]) -> Result<()> {
    if a_grid.is_empty() {
        return Err(Error::Domain("wavenumber grid is empty".into()));
    }
    if a_grid.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::Domain("wavenumbers must be finite and positive".into()));
    }
    if a_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("wavenumber grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Complex nodal vector from real and imaginary parts.
pub fn to_complex(v: &DVector<f64>) -> CVector {
    v.map(|x| Complex64::new(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::FlowKind;

    fn params(flow: FlowKind, ha: f64) -> Params {
        Params::new(flow, ha, 0.1).unwrap()
    }

    #[test]
    fn dissipation_matrix_is_hermitian_positive_definite() {
        let p = params(FlowKind::Couette, 1.0);
        let op = SpectralOperator::new(50).unwrap();
        let s = BaseFlowSample::for_params(&p, op.nodes()).unwrap();
        let pencil = assemble_pencil(&p, 1.0, &op, &s).unwrap();
        assert!(linalg::is_hermitian(&pencil.mmat, 1e-14));
        assert!(linalg::is_hermitian(&pencil.production(), 1e-14));
        let sym = (&pencil.mmat + pencil.mmat.adjoint()) * Complex64::new(0.5, 0.0);
        let min = sym.symmetric_eigenvalues().min();
        assert!(min > 0.0, "min eigenvalue {min}");
    }

    #[test]
    fn rejects_mismatched_nodes_and_zero_wavenumber() {
        let p = params(FlowKind::Couette, 1.0);
        let op = SpectralOperator::new(40).unwrap();
        let other = SpectralOperator::new(41).unwrap();
        let s = BaseFlowSample::for_params(&p, other.nodes()).unwrap();
        assert!(matches!(assemble_pencil(&p, 1.0, &op, &s), Err(Error::Consistency(_))));
        let s = BaseFlowSample::for_params(&p, op.nodes()).unwrap();
        assert!(matches!(assemble_pencil(&p, 0.0, &op, &s), Err(Error::Domain(_))));
    }

    #[test]
    fn zero_coupling_forces_zero_magnetic_field() {
        let p = params(FlowKind::Couette, 1.0);
        let op = SpectralOperator::new(40).unwrap();
        let s = BaseFlowSample::for_params(&p, op.nodes()).unwrap();
        let problem = OrrProblem::with_coupling(p, op, s, 0.0).unwrap();
        let pencil = problem.pencil(1.2).unwrap();
        let k = pencil.field_len();
        // Second block row of L vanishes, leaving 2m Ha^2 S l = 0.
        assert!(pencil.lmat.rows(k, k).iter().all(|v| v.norm() == 0.0));
        let sol = solve_max_m(&pencil).unwrap();
        let lmax = sol.l_hat.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(lmax <= 1e-10, "l not zero: {lmax:e}");
    }

    #[test]
    fn pencils_at_different_wavenumbers_differ_only_through_a() {
        let problem = OrrProblem::new(params(FlowKind::Hartmann, 10.0), 40).unwrap();
        let a = 0.8;
        let p1 = problem.pencil(a).unwrap();
        let p2 = problem.pencil(2.0 * a).unwrap();
        // L is linear in a.
        let diff = (&p2.lmat - &p1.lmat * Complex64::new(2.0, 0.0)).norm() / p2.lmat.norm();
        assert!(diff < 1e-14);
        // M is |D^2|^2 + 2a^2 |D|^2 + a^4, a polynomial in a^2.
        let rebuilt = problem.pencil(a).unwrap();
        assert_eq!(rebuilt.mmat, p1.mmat);
        assert_eq!(rebuilt.lmat, p1.lmat);
    }

    #[test]
    fn eigenpair_residual_and_reality() {
        for flow in [FlowKind::Couette, FlowKind::Hartmann] {
            let problem = OrrProblem::new(params(flow, 1.0), 50).unwrap();
            let sol = problem.solve(1.2).unwrap();
            assert!(sol.m > 0.0);
            assert!(sol.residual <= 1e-12, "{}", sol.residual);
            assert!(sol.imag_ratio <= REALITY_TOL);
            let n = sol.w_hat.len() - 1;
            assert_eq!(sol.w_hat[0].norm(), 0.0);
            assert_eq!(sol.w_hat[n].norm(), 0.0);
            assert_eq!(sol.l_hat[0].norm(), 0.0);
            assert_eq!(sol.l_hat[n].norm(), 0.0);
        }
    }

    #[test]
    fn wavenumber_sign_symmetry() {
        let problem = OrrProblem::new(params(FlowKind::Couette, 10.0), 50).unwrap();
        let plus = problem.solve(1.3).unwrap().m;
        let minus = problem.solve(-1.3).unwrap().m;
        assert!(((plus - minus) / plus).abs() <= 1e-10);
    }

    #[test]
    fn collocation_and_weak_forms_agree() {
        for (flow, ha) in [(FlowKind::Couette, 1e-6), (FlowKind::Couette, 1.0), (FlowKind::Hartmann, 10.0)] {
            let problem = OrrProblem::new(params(flow, ha), 60).unwrap();
            let weak = solve_max_m(&problem.pencil_with(1.2, PencilForm::Weak).unwrap()).unwrap();
            let coll = solve_max_m(&problem.pencil_with(1.2, PencilForm::Collocation).unwrap()).unwrap();
            let rel = ((weak.m - coll.m) / weak.m).abs();
            assert!(rel <= 1e-7, "{flow} Ha={ha}: weak {} collocation {} rel {rel:e}", weak.m, coll.m);
            assert!(coll.residual <= 1e-10);
        }
    }

    #[test]
    fn hydrodynamic_reduction() {
        let hydro = OrrProblem::new(params(FlowKind::Couette, 1e-6), 60).unwrap();
        assert!(hydro.is_hydrodynamic());
        let coupled = OrrProblem::new(params(FlowKind::Couette, 1e-3), 60).unwrap();
        assert!(!coupled.is_hydrodynamic());
        let mh = hydro.solve(1.2).unwrap().m;
        let mc = coupled.solve(1.2).unwrap().m;
        assert!(((mh - mc) / mh).abs() <= 1e-4, "{mh} {mc}");
    }

    #[test]
    fn curve_grid_validation() {
        let p = params(FlowKind::Couette, 0.1);
        assert!(reynolds_curve(&p, &[], 40).is_err());
        assert!(reynolds_curve(&p, &[1.0, 0.5], 40).is_err());
        assert!(reynolds_curve(&p, &[-1.0], 40).is_err());
    }

    #[test]
    fn curve_singleton_matches_direct_solve() {
        let p = params(FlowKind::Couette, 0.1);
        let curve = reynolds_curve(&p, &[1.21], 50).unwrap();
        let direct = OrrProblem::new(p, 50).unwrap().solve(1.21).unwrap();
        assert_eq!(curve.len(), 1);
        assert_eq!(curve[0].re, direct.re_a);
    }

    #[test]
    fn no_real_candidate_is_reported() {
        let values = vec![Complex64::new(1.0, 1.0), Complex64::new(2.0, -0.5), Complex64::new(0.1, 3.0)];
        match select_real_max(&values) {
            Err(Error::NoRealEigenvalue { candidates }) => {
                assert_eq!(candidates.len(), 3);
                assert_eq!(candidates[0], Complex64::new(2.0, -0.5));
            }
            _ => panic!("expected NoRealEigenvalue"),
        }
    }

    #[test]
    fn reality_filter_counts_rejections() {
        let values = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(3.0, 1.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.5, 1e-9),
        ];
        let s = select_real_max(&values).unwrap();
        assert_eq!(s.index, 0);
        assert_eq!(s.rejected, 1);
    }
}
