//! Closed-form laminar base flows and their first two derivatives.
//!
//! Everything is written in exp-scaled form (`e^{Ha(|z|-1)}` factors and
//! `expm1`) so nothing overflows for large `Ha` and nothing cancels
//! catastrophically as `Ha -> 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{FlowKind, Params};

/// Base flow `U` and induced field `B` sampled on a set of nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseFlowSample {
    pub flow: FlowKind,
    pub ha: f64,
    pub z: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    pub d2u: Vec<f64>,
    pub b: Vec<f64>,
    pub db: Vec<f64>,
    pub d2b: Vec<f64>,
}

impl BaseFlowSample {
    pub fn evaluate(flow: FlowKind, ha: f64, z: &[f64]) -> Result<Self> {
        match flow {
            FlowKind::Couette => couette_profile(ha, z),
            FlowKind::Hartmann => hartmann_profile(ha, z),
        }
    }

    pub fn for_params(params: &Params, z: &[f64]) -> Result<Self> {
        Self::evaluate(params.flow, params.ha, z)
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    fn check_finite(self) -> Result<Self> {
        let fields = [&self.u, &self.du, &self.d2u, &self.b, &self.db, &self.d2b];
        if fields.iter().all(|f| f.iter().all(|v| v.is_finite())) {
            Ok(self)
        } else {
            Err(Error::Overflow {
                what: match self.flow {
                    FlowKind::Couette => "Couette profile",
                    FlowKind::Hartmann => "Hartmann profile",
                },
                ha: self.ha,
            })
        }
    }
}

fn check_inputs(ha: f64, z: &[f64]) -> Result<()> {
    if !(ha > 0.0) || !ha.is_finite() {
        return Err(Error::Domain(format!("Ha = {ha} must be finite and > 0")));
    }
    if let Some(bad) = z.iter().find(|x| !(-1.0..=1.0).contains(*x)) {
        return Err(Error::Domain(format!("node z = {bad} outside [-1, 1]")));
    }
    Ok(())
}

/// Magnetic Couette flow:
/// `U = sinh(Ha z) / sinh(Ha)`,
/// `B = (cosh Ha - cosh(Ha z)) / (Ha sinh Ha)`.
pub fn couette_profile(ha: f64, z: &[f64]) -> Result<BaseFlowSample> {
    check_inputs(ha, z)?;
    let ha2 = ha * ha;
    // 1 - e^{-2 Ha}
    let den = -(-2.0 * ha).exp_m1();
    let mut s = BaseFlowSample::empty(FlowKind::Couette, ha, z);
    for &x in z {
        let ax = x.abs();
        let sign = if x < 0.0 { -1.0 } else { 1.0 };
        let decay = (ha * (ax - 1.0)).exp();
        let odd = -(-2.0 * ha * ax).exp_m1();
        let even = 1.0 + (-2.0 * ha * ax).exp();
        let u = sign * decay * odd / den;
        let du = ha * decay * even / den;
        let b = (-ha * (1.0 + x)).exp_m1() * (-ha * (1.0 - x)).exp_m1() / (ha * den);
        s.z.push(x);
        s.u.push(u);
        s.du.push(du);
        s.d2u.push(ha2 * u);
        s.b.push(b);
        s.db.push(-u);
        s.d2b.push(-du);
    }
    s.check_finite()
}

/// Hartmann flow:
/// `U = (cosh Ha - cosh(Ha z)) / (cosh Ha - 1)`,
/// `B = (sinh(Ha z) - z sinh Ha) / (Ha (cosh Ha - 1))`.
pub fn hartmann_profile(ha: f64, z: &[f64]) -> Result<BaseFlowSample> {
    check_inputs(ha, z)?;
    let ha2 = ha * ha;
    // (cosh Ha - 1) * 2 e^{-Ha}
    let em = (-ha).exp_m1();
    let den = em * em;
    let e2 = (-2.0 * ha).exp_m1();
    // U'' = Ha^2 (U - kappa), kappa = cosh Ha / (cosh Ha - 1)
    let kappa = (1.0 + (-2.0 * ha).exp()) / den;
    let shift = -ha2 * kappa;
    let mut s = BaseFlowSample::empty(FlowKind::Hartmann, ha, z);
    for &x in z {
        let ax = x.abs();
        let sign = if x < 0.0 { -1.0 } else { 1.0 };
        let decay = (ha * (ax - 1.0)).exp();
        let odd = -(-2.0 * ha * ax).exp_m1();
        let even = 1.0 + (-2.0 * ha * ax).exp();
        let u = (-ha * (1.0 + x)).exp_m1() * (-ha * (1.0 - x)).exp_m1() / den;
        let du = -ha * sign * decay * odd / den;
        let d2u = ha2.mul_add(u, shift);
        let (b, db) = if ha < SERIES_CUTOFF {
            hartmann_field_series(ha, x)
        } else {
            let b = (sign * decay * odd + x * e2) / (ha * den);
            let db = (ha * decay * even + e2) / (ha * den);
            (b, db)
        };
        s.z.push(x);
        s.u.push(u);
        s.du.push(du);
        s.d2u.push(d2u);
        s.b.push(b);
        s.db.push(db);
        s.d2b.push(-du);
    }
    s.check_finite()
}

const SERIES_CUTOFF: f64 = 0.5;

/// `B` and `B'` of the Hartmann flow for small `Ha`, where the closed form
/// loses digits to cancellation.
fn hartmann_field_series(ha: f64, z: f64) -> (f64, f64) {
    // sinh(Ha z) - z sinh Ha = sum_{k>=1} Ha^{2k+1} (z^{2k+1} - z) / (2k+1)!
    // Ha cosh(Ha z) - sinh Ha = sum_{k>=1} Ha^{2k+1} (z^{2k}/(2k)! - 1/(2k+1)!)
    let mut num_b = 0.0;
    let mut num_db = 0.0;
    let mut ha_pow = ha;
    let mut z_pow = 1.0;
    let mut fact = 1.0; // (2k)!
    for k in 1..40 {
        let kf = k as f64;
        ha_pow *= ha * ha;
        z_pow *= z * z;
        fact *= (2.0 * kf - 1.0) * (2.0 * kf);
        let fact_odd = fact * (2.0 * kf + 1.0);
        let tb = ha_pow * (z_pow * z - z) / fact_odd;
        let tdb = ha_pow * (z_pow / fact - 1.0 / fact_odd);
        num_b += tb;
        num_db += tdb;
        if ha_pow / fact < 1e-18 * ha.powi(3) {
            break;
        }
    }
    // Ha (cosh Ha - 1) = 2 Ha sinh^2(Ha/2)
    let sh = (0.5 * ha).sinh();
    let den = 2.0 * ha * sh * sh;
    (num_b / den, num_db / den)
}

impl BaseFlowSample {
    fn empty(flow: FlowKind, ha: f64, z: &[f64]) -> Self {
        let n = z.len();
        Self {
            flow,
            ha,
            z: Vec::with_capacity(n),
            u: Vec::with_capacity(n),
            du: Vec::with_capacity(n),
            d2u: Vec::with_capacity(n),
            b: Vec::with_capacity(n),
            db: Vec::with_capacity(n),
            d2b: Vec::with_capacity(n),
        }
    }
}

/// `Ha -> 0` limit of the base flows (classical Couette and Poiseuille).
pub fn hydrodynamic_limit(flow: FlowKind, z: &[f64]) -> BaseFlowSample {
    let mut s = BaseFlowSample::empty(flow, 0.0, z);
    for &x in z {
        let (u, du, d2u, b, db, d2b) = match flow {
            FlowKind::Couette => (x, 1.0, 0.0, 0.5 * (1.0 - x * x), -x, -1.0),
            FlowKind::Hartmann => (
                1.0 - x * x,
                -2.0 * x,
                -2.0,
                (x * x * x - x) / 3.0,
                x * x - 1.0 / 3.0,
                2.0 * x,
            ),
        };
        s.z.push(x);
        s.u.push(u);
        s.du.push(du);
        s.d2u.push(d2u);
        s.b.push(b);
        s.db.push(db);
        s.d2b.push(d2b);
    }
    s
}

/// Max-norm residuals of the steady equations `U'' - Ha^2 U = const` and
/// `B'' + U' = 0`. The first residual has its nodal mean removed, which is
/// zero for Couette and the pressure-like forcing for Hartmann.
pub fn baseflow_residual(sample: &BaseFlowSample, params: &Params) -> Result<(f64, f64)> {
    if sample.flow != params.flow {
        return Err(Error::Consistency(format!(
            "sample is {} but params are {}",
            sample.flow, params.flow
        )));
    }
    if sample.ha != params.ha {
        return Err(Error::Consistency(format!(
            "sample evaluated at Ha = {} but params have Ha = {}",
            sample.ha, params.ha
        )));
    }
    Ok(residual_with_ha(sample, params.ha))
}

/// Residuals evaluated with an arbitrary `Ha`, without the consistency check.
pub fn residual_with_ha(sample: &BaseFlowSample, ha: f64) -> (f64, f64) {
    let ha2 = ha * ha;
    let momentum: Vec<f64> = sample
        .d2u
        .iter()
        .zip(&sample.u)
        .map(|(d2u, u)| (-ha2).mul_add(*u, *d2u))
        .collect();
    let n = momentum.len().max(1) as f64;
    let mean = match (sample.flow, momentum.first()) {
        (FlowKind::Hartmann, Some(&m0)) => m0 + momentum.iter().map(|v| v - m0).sum::<f64>() / n,
        _ => 0.0,
    };
    let r1 = momentum.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    let r2 = sample
        .d2b
        .iter()
        .zip(&sample.du)
        .map(|(a, b)| (a + b).abs())
        .fold(0.0, f64::max);
    (r1, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::chebyshev_nodes;

    #[test]
    fn couette_centre_and_walls() {
        let s = couette_profile(1.0, &[1.0, 0.0, -1.0]).unwrap();
        assert_eq!(s.u[1], 0.0);
        assert!((s.b[1] - 0.462_117_157_260_010).abs() < 1e-14);
        assert!((s.u[0] - 1.0).abs() < 1e-15 && (s.u[2] + 1.0).abs() < 1e-15);
        assert_eq!(s.b[0], 0.0);
        assert_eq!(s.b[2], 0.0);
    }

    #[test]
    fn hartmann_centre_and_walls() {
        let s = hartmann_profile(2.0, &[1.0, 0.0, -1.0]).unwrap();
        assert!((s.u[1] - 1.0).abs() < 1e-15);
        assert_eq!(s.b[1], 0.0);
        for i in [0, 2] {
            assert!(s.u[i].abs() < 1e-15);
            assert!(s.b[i].abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(couette_profile(0.0, &[0.0]), Err(Error::Domain(_))));
        assert!(matches!(hartmann_profile(-1.0, &[0.0]), Err(Error::Domain(_))));
        assert!(matches!(couette_profile(1.0, &[1.5]), Err(Error::Domain(_))));
    }

    #[test]
    fn large_hartmann_number_stays_finite() {
        let z = chebyshev_nodes(64);
        for ha in [300.0, 800.0, 5000.0] {
            let c = couette_profile(ha, &z).unwrap();
            let h = hartmann_profile(ha, &z).unwrap();
            assert!((c.u[0] - 1.0).abs() < 1e-14);
            assert!(h.u[32] <= 1.0 + 1e-14);
        }
    }

    #[test]
    fn symmetry() {
        let z = chebyshev_nodes(41);
        for ha in [1e-6, 0.1, 1.0, 10.0, 50.0, 300.0] {
            let c = couette_profile(ha, &z).unwrap();
            let h = hartmann_profile(ha, &z).unwrap();
            let n = z.len() - 1;
            for k in 0..=n {
                assert_eq!(c.u[k], -c.u[n - k]);
                assert_eq!(c.b[k], c.b[n - k]);
                assert_eq!(h.u[k], h.u[n - k]);
                assert_eq!(h.b[k], -h.b[n - k]);
            }
        }
    }

    #[test]
    fn residuals_vanish() {
        let z = chebyshev_nodes(60);
        let p = Params::new(FlowKind::Couette, 1.0, 0.1).unwrap();
        let (r1, r2) = baseflow_residual(&couette_profile(1.0, &z).unwrap(), &p).unwrap();
        assert!(r1 <= 1e-12 && r2 <= 1e-12);
        let p = Params::new(FlowKind::Hartmann, 5.0, 0.1).unwrap();
        let (r1, r2) = baseflow_residual(&hartmann_profile(5.0, &z).unwrap(), &p).unwrap();
        assert!(r1 <= 1e-12 && r2 <= 1e-12, "{r1:e} {r2:e}");
    }

    #[test]
    fn wrong_hartmann_number_is_detected() {
        let z = chebyshev_nodes(60);
        let s = couette_profile(1.0, &z).unwrap();
        let p = Params::new(FlowKind::Couette, 2.0, 0.1).unwrap();
        assert!(matches!(baseflow_residual(&s, &p), Err(Error::Consistency(_))));
        let (r1, _) = residual_with_ha(&s, 2.0);
        assert!(r1 > 0.1);
    }

    #[test]
    fn small_ha_recovers_linear_couette() {
        let z = chebyshev_nodes(60);
        let s = couette_profile(1e-6, &z).unwrap();
        let lim = hydrodynamic_limit(FlowKind::Couette, &z);
        for k in 0..z.len() {
            assert!((s.u[k] - z[k]).abs() <= 1e-6);
            assert!((s.b[k] - lim.b[k]).abs() <= 1e-10);
        }
        let h = hartmann_profile(1e-6, &z).unwrap();
        let lim = hydrodynamic_limit(FlowKind::Hartmann, &z);
        for k in 0..z.len() {
            assert!((h.u[k] - lim.u[k]).abs() <= 1e-10);
            assert!((h.b[k] - lim.b[k]).abs() <= 1e-10);
            assert!((h.db[k] - lim.db[k]).abs() <= 1e-10);
        }
    }

    #[test]
    fn series_and_closed_form_agree_at_cutoff() {
        for &z in &[-0.9, -0.3, 0.2, 0.7, 1.0] {
            let (b, db) = hartmann_field_series(SERIES_CUTOFF, z);
            let s = hartmann_profile(SERIES_CUTOFF * (1.0 + 1e-12), &[z]).unwrap();
            assert!((b - s.b[0]).abs() < 1e-12, "{b} {}", s.b[0]);
            assert!((db - s.db[0]).abs() < 1e-12, "{db} {}", s.db[0]);
        }
    }

    #[test]
    fn analytic_derivatives_match_spectral_differentiation() {
        use crate::spectral::SpectralOperator;
        for n in [50, 70] {
            let op = SpectralOperator::new(n).unwrap();
            for ha in [0.1, 1.0, 10.0, 50.0] {
                for flow in [FlowKind::Couette, FlowKind::Hartmann] {
                    let s = BaseFlowSample::evaluate(flow, ha, op.nodes()).unwrap();
                    let du = op.d1() * nalgebra::DVector::from_column_slice(&s.u);
                    let err = du
                        .iter()
                        .zip(&s.du)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    assert!(err <= 1e-8, "N={n} Ha={ha} {flow} err={err:e}");
                }
            }
        }
    }

    #[test]
    fn hartmann_curvature_matches_hyperbolic_form() {
        let z = crate::spectral::chebyshev_nodes(64);
        for ha in [0.1, 1.0, 10.0, 50.0] {
            let s = hartmann_profile(ha, &z).unwrap();
            let scale = ha * ha * ha.cosh() / (ha.cosh() - 1.0);
            for (x, d2u) in z.iter().zip(&s.d2u) {
                let exact = -ha * ha * (ha * x).cosh() / (ha.cosh() - 1.0);
                assert!((d2u - exact).abs() <= 1e-13 * scale, "Ha={ha} z={x}: {d2u} vs {exact}");
            }
        }
    }
}
