//! Critical energy Reynolds number: minimum of `Re(a)` over the wavenumber.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orr_evp::{CurvePoint, OrrProblem};
use crate::params::{FlowKind, Params};

pub const DEFAULT_A_MIN: f64 = 0.2;
pub const DEFAULT_A_MAX: f64 = 40.0;
pub const DEFAULT_SCAN_POINTS: usize = 40;
/// Golden-section refinement stops once the bracket is this narrow.
pub const A_TOLERANCE: f64 = 1e-4;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeutralPoint {
    pub flow: FlowKind,
    pub ha: f64,
    pub pm: f64,
    pub a_crit: f64,
    pub re_e: f64,
    pub n: usize,
    /// False when the minimum sits on the edge of the search window or the
    /// point failed outright.
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchWindow {
    pub a_min: f64,
    pub a_max: f64,
    pub scan_points: usize,
}

impl Default for SearchWindow {
    fn default() -> Self {
        Self {
            a_min: DEFAULT_A_MIN,
            a_max: DEFAULT_A_MAX,
            scan_points: DEFAULT_SCAN_POINTS,
        }
    }
}

impl SearchWindow {
    pub fn new(a_min: f64, a_max: f64) -> Result<Self> {
        let w = Self { a_min, a_max, ..Self::default() };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a_min > 0.0 && self.a_min < self.a_max && self.a_max.is_finite()) {
            return Err(Error::Domain(format!(
                "search window [{}, {}] must satisfy 0 < a_min < a_max",
                self.a_min, self.a_max
            )));
        }
        if self.scan_points < 3 {
            return Err(Error::Domain("coarse scan needs at least 3 points".into()));
        }
        Ok(())
    }

    /// Log-spaced coarse grid including both ends.
    pub fn grid(&self) -> Vec<f64> {
        log_grid(self.a_min, self.a_max, self.scan_points)
    }
}

pub fn log_grid(a_min: f64, a_max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![a_min];
    }
    let ratio = (a_max / a_min).ln();
    let last = (points - 1) as f64;
    (0..points)
        .map(|k| match k {
            0 => a_min,
            k if k == points - 1 => a_max,
            k => a_min * (ratio * k as f64 / last).exp(),
        })
        .collect()
}

pub fn minimize_over_a(params: &Params, a_min: f64, a_max: f64, n: usize) -> Result<NeutralPoint> {
    let window = SearchWindow::new(a_min, a_max)?;
    let problem = OrrProblem::new(*params, n)?;
    minimize(&problem, &window)
}

/// Coarse scan, then golden-section refinement on the bracketing triple.
pub fn minimize(problem: &OrrProblem, window: &SearchWindow) -> Result<NeutralPoint> {
    window.validate()?;
    let grid = window.grid();
    let scan = problem.curve(&grid);
    let (idx, coarse) = scan
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_ok() && p.re.is_finite())
        .min_by(|a, b| a.1.re.total_cmp(&b.1.re))
        .ok_or_else(|| {
            let first = scan.iter().find_map(|p| p.error.clone()).unwrap_or_default();
            Error::Numerical(format!("every point of the coarse scan failed: {first}"))
        })?;

    let params = problem.params();
    let mut point = NeutralPoint {
        flow: params.flow,
        ha: params.ha,
        pm: params.pm,
        a_crit: coarse.a,
        re_e: coarse.re,
        n: problem.operator().degree(),
        converged: false,
        error: None,
    };
    if idx == 0 || idx == grid.len() - 1 {
        return Ok(point);
    }

    let objective = |a: f64| match problem.solve(a) {
        Ok(sol) => sol.re_a,
        Err(_) => f64::INFINITY,
    };
    let (a_best, re_best) = golden_section(objective, grid[idx - 1], grid[idx + 1], A_TOLERANCE);
    if re_best < point.re_e {
        point.a_crit = a_best;
        point.re_e = re_best;
    }
    point.converged = true;
    Ok(point)
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`. Returns the
/// best point evaluated.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
            if f1 < best.1 {
                best = (x1, f1);
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}

/// One neutral point per Hartmann number, computed independently and
/// returned in input order. Failures are kept in place with `re_e = NaN`.
pub fn neutral_sweep(
    flow: FlowKind,
    ha_list: &[f64],
    pm: f64,
    window: &SearchWindow,
    n: usize,
) -> Result<Vec<NeutralPoint>> {
    if ha_list.is_empty() {
        return Err(Error::Domain("Hartmann-number list is empty".into()));
    }
    if let Some(bad) = ha_list.iter().find(|h| !(h.is_finite() && **h > 0.0)) {
        return Err(Error::Domain(format!("Hartmann number {bad} must be positive")));
    }
    window.validate()?;
    Ok(ha_list
        .par_iter()
        .map(|&ha| {
            let run = || -> Result<NeutralPoint> {
                let params = Params::new(flow, ha, pm)?;
                minimize(&OrrProblem::new(params, n)?, window)
            };
            run().unwrap_or_else(|e| NeutralPoint {
                flow,
                ha,
                pm,
                a_crit: f64::NAN,
                re_e: f64::NAN,
                n,
                converged: false,
                error: Some(e.to_string()),
            })
        })
        .collect())
}

/// Coarse-scan values, handy for checking that the refined minimum really is
/// below every sampled point.
pub fn scan(problem: &OrrProblem, window: &SearchWindow) -> Vec<CurvePoint> {
    problem.curve(&window.grid())
}
