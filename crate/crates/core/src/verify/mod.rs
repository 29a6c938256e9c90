//! Energy functionals evaluated on explicit trial fields, and the checks built
//! on them.
//!
//! A trial field is a single Fourier mode `f(z) e^{iax}` with `v = k = 0`.
//! Its normal components `w`, `l` are clamped at the walls and the streamwise
//! components follow from solenoidality, `u = (i/a) Dw` and `h = (i/a) Dl`.
//! All integrals use the Clenshaw–Curtis weights of the spectral operator,
//! which makes `energy_ratio` the exact discrete quadratic-form ratio
//! maximized by the weak-form pencil.

mod fd;
mod trials;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::baseflow::BaseFlowSample;
use crate::error::{Error, Result};
use crate::orr_evp::{EvpSolution, HA_FLOOR};
use crate::params::Params;
use crate::spectral::SpectralOperator;

pub use fd::{fd_eigenvalue, fd_oracle, FdOracle, MIN_FD_POINTS};
pub use trials::{
    bound_check, evaluate_trials, random_trial_bound, random_trials, FieldCoefficients, Falsification, Trial,
    TrialReport, BOUND_TOLERANCE,
};

/// Best constant in `(pi^2/4) |f|^2 <= |f'|^2` for `f(±1) = 0`.
pub const POINCARE_CONSTANT: f64 = PI * PI / 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct TrialField {
    pub a: f64,
    pub w_hat: Vec<Complex64>,
    pub l_hat: Vec<Complex64>,
    pub u_hat: Vec<Complex64>,
    pub h_hat: Vec<Complex64>,
    // First and second derivatives of w and l; kept so the functionals use the
    // same discrete derivatives as the pencil.
    dw: Vec<Complex64>,
    d2w: Vec<Complex64>,
    dl: Vec<Complex64>,
    d2l: Vec<Complex64>,
}

impl TrialField {
    pub fn new(a: f64, w_hat: Vec<Complex64>, l_hat: Vec<Complex64>, op: &SpectralOperator) -> Result<Self> {
        if a == 0.0 || !a.is_finite() {
            return Err(Error::Domain(format!("wavenumber a = {a} must be finite and nonzero")));
        }
        if w_hat.len() != op.len() || l_hat.len() != op.len() {
            return Err(Error::Consistency(format!(
                "trial field has {} / {} nodes, operator has {}",
                w_hat.len(),
                l_hat.len(),
                op.len()
            )));
        }
        let dw = apply(op.d1(), &w_hat);
        let d2w = apply(op.d2(), &w_hat);
        let dl = apply(op.d1(), &l_hat);
        let d2l = apply(op.d2(), &l_hat);
        let s = Complex64::new(0.0, 1.0 / a);
        Ok(Self {
            a,
            u_hat: dw.iter().map(|v| s * v).collect(),
            h_hat: dl.iter().map(|v| s * v).collect(),
            w_hat,
            l_hat,
            dw,
            d2w,
            dl,
            d2l,
        })
    }

    pub fn from_solution(sol: &EvpSolution, op: &SpectralOperator) -> Result<Self> {
        Self::new(sol.a, sol.w_hat.clone(), sol.l_hat.clone(), op)
    }

    /// `c` times the field.
    pub fn scaled(&self, c: Complex64) -> Self {
        let m = |v: &[Complex64]| v.iter().map(|x| c * x).collect::<Vec<_>>();
        Self {
            a: self.a,
            w_hat: m(&self.w_hat),
            l_hat: m(&self.l_hat),
            u_hat: m(&self.u_hat),
            h_hat: m(&self.h_hat),
            dw: m(&self.dw),
            d2w: m(&self.d2w),
            dl: m(&self.dl),
            d2l: m(&self.d2l),
        }
    }

    /// Complex conjugate. Same dissipation, production of opposite sign.
    pub fn conjugate(&self) -> Self {
        let c = |v: &[Complex64]| v.iter().map(|x| x.conj()).collect::<Vec<_>>();
        let neg = |v: &[Complex64]| v.iter().map(|x| -x.conj()).collect::<Vec<_>>();
        // conj((i/a) Dw) = (i/a) D conj(w) only up to sign, so u and h flip.
        Self {
            a: self.a,
            w_hat: c(&self.w_hat),
            l_hat: c(&self.l_hat),
            u_hat: neg(&self.u_hat),
            h_hat: neg(&self.h_hat),
            dw: c(&self.dw),
            d2w: c(&self.d2w),
            dl: c(&self.dl),
            d2l: c(&self.d2l),
        }
    }

    /// Largest wall value of `w`, `Dw`, `l`, `Dl`.
    pub fn wall_defect(&self) -> f64 {
        let last = self.w_hat.len() - 1;
        [0, last]
            .iter()
            .flat_map(|&k| [self.w_hat[k], self.dw[k], self.l_hat[k], self.dl[k]])
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }
}

fn apply(d: &nalgebra::DMatrix<f64>, f: &[Complex64]) -> Vec<Complex64> {
    (0..d.nrows())
        .map(|r| d.row(r).iter().zip(f).map(|(a, b)| b * *a).sum())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    /// Production.
    pub i: f64,
    /// Reduced dissipation.
    pub d1: f64,
    /// Full dissipation; equal to `d1` for fields with `v = k = 0`.
    pub d: f64,
    pub ratio: f64,
    pub e: f64,
}

impl EnergyBreakdown {
    /// `dE/dt = I - D/Re`.
    pub fn de_dt(&self, re: f64) -> f64 {
        self.i - self.d / re
    }
}

struct Quadrature<'a> {
    w: &'a [f64],
}

impl Quadrature<'_> {
    /// `Re ∫ c f conj(g)`.
    fn inner(&self, c: &[f64], f: &[Complex64], g: &[Complex64]) -> f64 {
        self.w
            .iter()
            .zip(c)
            .zip(f.iter().zip(g))
            .map(|((w, c), (f, g))| w * c * (f * g.conj()).re)
            .sum()
    }

    fn norm2(&self, f: &[Complex64]) -> f64 {
        self.w.iter().zip(f).map(|(w, f)| w * f.norm_sqr()).sum()
    }

    fn grad2(&self, f: &[Complex64], df: &[Complex64], a: f64) -> f64 {
        self.norm2(df) + a * a * self.norm2(f)
    }
}

pub fn energy_ratio(
    field: &TrialField,
    params: &Params,
    sample: &BaseFlowSample,
    op: &SpectralOperator,
) -> Result<EnergyBreakdown> {
    if sample.flow != params.flow || sample.ha != params.ha {
        return Err(Error::Consistency(
            "base-flow sample does not belong to the given parameters".into(),
        ));
    }
    if sample.z.len() != op.len() || field.w_hat.len() != op.len() {
        return Err(Error::Consistency("field, sample and operator sizes differ".into()));
    }
    let q = Quadrature { w: op.weights() };
    let a = field.a;
    let s = Complex64::new(0.0, 1.0 / a);
    let du: Vec<Complex64> = field.d2w.iter().map(|v| s * v).collect();
    let dh: Vec<Complex64> = field.d2l.iter().map(|v| s * v).collect();
    let (u, w, h, l) = (&field.u_hat, &field.w_hat, &field.h_hat, &field.l_hat);

    let big_a = params.coupling();
    let i = -q.inner(&sample.du, w, u)
        + big_a
            * (q.inner(&sample.db, l, u) - q.inner(&sample.db, w, h) + q.inner(&sample.du, l, h));
    let d1 = q.grad2(u, &du, a)
        + q.grad2(w, &field.dw, a)
        + params.ha2() * (q.grad2(h, &dh, a) + q.grad2(l, &field.dl, a));
    if !(d1 > 0.0) {
        return Err(Error::ZeroDissipation);
    }
    let e = 0.5 * (q.norm2(u) + q.norm2(w) + big_a * (q.norm2(h) + q.norm2(l)));
    Ok(EnergyBreakdown { i, d1, d: d1, ratio: i / d1, e })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub re: f64,
    pub re_e: f64,
    pub de_dt: f64,
    pub dissipation: f64,
    /// `(1/Re_E - 1/Re) D + 1e-10 |D| - dE/dt`; nonnegative when the
    /// inequality holds.
    pub margin: f64,
    pub holds: bool,
}

/// Checks `dE/dt <= (1/Re_E - 1/Re) D` for one field.
pub fn decay_check(
    field: &TrialField,
    params: &Params,
    sample: &BaseFlowSample,
    op: &SpectralOperator,
    re: f64,
    re_e: f64,
) -> Result<DecayReport> {
    if !(re > 0.0 && re.is_finite() && re_e > 0.0 && re_e.is_finite()) {
        return Err(Error::Domain(format!("Re = {re} and Re_E = {re_e} must be positive")));
    }
    let en = energy_ratio(field, params, sample, op)?;
    Ok(decay_from(&en, re, re_e))
}

pub fn decay_from(en: &EnergyBreakdown, re: f64, re_e: f64) -> DecayReport {
    let de_dt = en.de_dt(re);
    let bound = (1.0 / re_e - 1.0 / re) * en.d;
    let margin = bound + 1e-10 * en.d.abs() - de_dt;
    DecayReport {
        re,
        re_e,
        de_dt,
        dissipation: en.d,
        margin,
        holds: margin >= 0.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincareComponent {
    pub name: String,
    pub norm2: f64,
    pub grad2: f64,
    /// `grad2 / norm2`; infinite for a vanishing component.
    pub ratio: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincareReport {
    pub components: Vec<PoincareComponent>,
    pub holds: bool,
}

/// `(pi^2/4) |f|^2 <= |grad f|^2 (1 + 1e-8)` for each of `u, w, h, l`.
pub fn poincare_check(field: &TrialField, op: &SpectralOperator) -> Result<PoincareReport> {
    if field.w_hat.len() != op.len() {
        return Err(Error::Consistency("field and operator sizes differ".into()));
    }
    let q = Quadrature { w: op.weights() };
    let a = field.a;
    let s = Complex64::new(0.0, 1.0 / a);
    let du: Vec<Complex64> = field.d2w.iter().map(|v| s * v).collect();
    let dh: Vec<Complex64> = field.d2l.iter().map(|v| s * v).collect();
    let parts: [(&str, &[Complex64], &[Complex64]); 4] = [
        ("u", &field.u_hat, &du),
        ("w", &field.w_hat, &field.dw),
        ("h", &field.h_hat, &dh),
        ("l", &field.l_hat, &field.dl),
    ];
    let components: Vec<PoincareComponent> = parts
        .iter()
        .map(|(name, f, df)| {
            let norm2 = q.norm2(f);
            let grad2 = q.grad2(f, df, a);
            PoincareComponent {
                name: name.to_string(),
                norm2,
                grad2,
                ratio: if norm2 > 0.0 { grad2 / norm2 } else { f64::INFINITY },
                holds: POINCARE_CONSTANT * norm2 <= grad2 * (1.0 + 1e-8),
            }
        })
        .collect();
    let holds = components.iter().all(|c| c.holds);
    Ok(PoincareReport { components, holds })
}

/// Whether the magnetic part of trial fields is dropped for these parameters,
/// matching the solver's hydrodynamic branch.
pub fn magnetic_field_dropped(params: &Params) -> bool {
    params.ha < HA_FLOOR
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orr_evp::OrrProblem;
    use crate::params::FlowKind;

    fn problem(flow: FlowKind, ha: f64) -> OrrProblem {
        OrrProblem::new(Params::new(flow, ha, 0.1).unwrap(), 40).unwrap()
    }

    #[test]
    fn eigenvector_attains_m() {
        for (flow, ha) in [(FlowKind::Couette, 1.0), (FlowKind::Hartmann, 10.0), (FlowKind::Couette, 1e-6)] {
            let p = problem(flow, ha);
            let sol = p.solve(1.7).unwrap();
            let f = TrialField::from_solution(&sol, p.operator()).unwrap();
            let en = energy_ratio(&f, p.params(), p.sample(), p.operator()).unwrap();
            assert!((en.ratio - sol.m).abs() <= 1e-10 * sol.m, "{flow} {ha}: {} vs {}", en.ratio, sol.m);
            assert!(f.wall_defect() < 1e-10);
        }
    }

    #[test]
    fn conjugate_flips_production() {
        let p = problem(FlowKind::Hartmann, 1.0);
        let sol = p.solve(2.0).unwrap();
        let f = TrialField::from_solution(&sol, p.operator()).unwrap();
        let a = energy_ratio(&f, p.params(), p.sample(), p.operator()).unwrap();
        let b = energy_ratio(&f.conjugate(), p.params(), p.sample(), p.operator()).unwrap();
        assert!((a.i + b.i).abs() <= 1e-12 * a.i.abs());
        assert!((a.d1 - b.d1).abs() <= 1e-12 * a.d1);
    }

    #[test]
    fn zero_field_has_no_dissipation() {
        let p = problem(FlowKind::Couette, 1.0);
        let z = vec![Complex64::new(0.0, 0.0); p.operator().len()];
        let f = TrialField::new(1.0, z.clone(), z, p.operator()).unwrap();
        assert!(matches!(
            energy_ratio(&f, p.params(), p.sample(), p.operator()),
            Err(Error::ZeroDissipation)
        ));
    }

    #[test]
    fn mismatched_sample_is_rejected() {
        let p = problem(FlowKind::Couette, 1.0);
        let other = Params::new(FlowKind::Couette, 2.0, 0.1).unwrap();
        let sol = p.solve(1.0).unwrap();
        let f = TrialField::from_solution(&sol, p.operator()).unwrap();
        assert!(matches!(
            energy_ratio(&f, &other, p.sample(), p.operator()),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn eigenvector_is_marginal_at_its_own_reynolds_number() {
        let p = problem(FlowKind::Couette, 1.0);
        let sol = p.solve(1.9).unwrap();
        let f = TrialField::from_solution(&sol, p.operator()).unwrap();
        let r = decay_check(&f, p.params(), p.sample(), p.operator(), sol.re_a, sol.re_a).unwrap();
        assert!(r.de_dt.abs() <= 1e-8 * r.dissipation);
        assert!(r.holds);
    }

    #[test]
    fn tapered_sine_is_near_poincare_optimal() {
        let op = SpectralOperator::new(64).unwrap();
        let p = 12;
        let w: Vec<Complex64> = op
            .nodes()
            .iter()
            .map(|&z| Complex64::new((PI * z / 2.0).cos() * (1.0 - z.powi(2 * p)), 0.0))
            .collect();
        let zero = vec![Complex64::new(0.0, 0.0); w.len()];
        let f = TrialField::new(1e-3, w, zero, &op).unwrap();
        let r = poincare_check(&f, &op).unwrap();
        assert!(r.holds);
        let ratio = r.components[1].ratio;
        assert!(ratio >= POINCARE_CONSTANT && ratio <= 1.05 * POINCARE_CONSTANT, "{ratio}");
    }

    #[test]
    fn negative_wavenumber_is_allowed_zero_is_not() {
        let op = SpectralOperator::new(16).unwrap();
        let z = vec![Complex64::new(0.0, 0.0); op.len()];
        assert!(TrialField::new(-1.0, z.clone(), z.clone(), &op).is_ok());
        assert!(TrialField::new(0.0, z.clone(), z, &op).is_err());
    }
}
