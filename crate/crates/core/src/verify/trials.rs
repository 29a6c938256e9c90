//! Random admissible trial fields and the variational bound `I/D1 <= m`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{energy_ratio, magnetic_field_dropped, EnergyBreakdown, TrialField};
use crate::error::{Error, Result};
use crate::orr_evp::OrrProblem;
use crate::params::Params;

/// Relative slack allowed above the claimed maximum.
pub const BOUND_TOLERANCE: f64 = 1e-6;

/// How a trial field was specified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "basis", rename_all = "lowercase")]
pub enum FieldCoefficients {
    /// `w = (1-z^2)^2 sum_k c_k T_k(z)`, same for `l`.
    Chebyshev { w: Vec<Complex64>, l: Vec<Complex64> },
    /// Values of `w` and `l` at the collocation nodes.
    Nodal { w: Vec<Complex64>, l: Vec<Complex64> },
}

#[derive(Debug, Clone)]
pub struct Trial {
    pub index: usize,
    pub coefficients: FieldCoefficients,
    pub field: TrialField,
}

impl Trial {
    pub fn nodal(index: usize, field: TrialField) -> Self {
        Self {
            index,
            coefficients: FieldCoefficients::Nodal {
                w: field.w_hat.clone(),
                l: field.l_hat.clone(),
            },
            field,
        }
    }
}

/// The offending field of a failed bound check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Falsification {
    pub params: Params,
    pub a: f64,
    pub seed: u64,
    pub trial_index: usize,
    pub ratio: f64,
    pub m_claimed: f64,
    pub field_coefficients: FieldCoefficients,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub params: Params,
    pub a: f64,
    pub seed: u64,
    pub trials: usize,
    pub m_claimed: f64,
    pub max_ratio: f64,
    pub max_index: usize,
    /// `(m_claimed - max_ratio) / m_claimed`.
    pub gap: f64,
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub falsification: Option<Falsification>,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// `trials` fields `(1-z^2)^2 p(z)` with `p` of degree `N-4` and standard
/// complex Gaussian Chebyshev coefficients drawn from a ChaCha stream.
pub fn random_trials(problem: &OrrProblem, a: f64, trials: usize, seed: u64) -> Result<Vec<Trial>> {
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let op = problem.operator();
    let nodes = op.nodes();
    let degree = op.degree() - 4;
    let with_field = !magnetic_field_dropped(problem.params());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |count: usize| -> Vec<Complex64> {
        (0..count)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            })
            .collect()
    };
    let coeffs: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..trials)
        .map(|_| {
            let w = draw(degree + 1);
            let l = if with_field { draw(degree + 1) } else { vec![Complex64::new(0.0, 0.0); degree + 1] };
            (w, l)
        })
        .collect();

    // T_k at the nodes, shared by every trial.
    let cheb: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&z| {
            let mut t = vec![0.0; degree + 1];
            t[0] = 1.0;
            if degree >= 1 {
                t[1] = z;
            }
            for k in 2..=degree {
                t[k] = 2.0 * z * t[k - 1] - t[k - 2];
            }
            t
        })
        .collect();
    let bubble: Vec<f64> = nodes.iter().map(|z| (1.0 - z * z).powi(2)).collect();
    let eval = |c: &[Complex64]| -> Vec<Complex64> {
        cheb.iter()
            .zip(&bubble)
            .map(|(t, b)| t.iter().zip(c).map(|(t, c)| c * *t).sum::<Complex64>() * *b)
            .collect()
    };

    coeffs
        .into_par_iter()
        .enumerate()
        .map(|(index, (cw, cl))| {
            let field = TrialField::new(a, eval(&cw), eval(&cl), op)?;
            Ok(Trial {
                index,
                coefficients: FieldCoefficients::Chebyshev { w: cw, l: cl },
                field,
            })
        })
        .collect()
}

/// Energy breakdown of every trial, in input order.
pub fn evaluate_trials(problem: &OrrProblem, trials: &[Trial]) -> Result<Vec<EnergyBreakdown>> {
    trials
        .par_iter()
        .map(|t| energy_ratio(&t.field, problem.params(), problem.sample(), problem.operator()))
        .collect()
}

/// Checks `ratio <= m_claimed (1 + BOUND_TOLERANCE)` for each trial. The
/// first violating trial is reported as a falsification.
pub fn bound_check(problem: &OrrProblem, trials: &[Trial], m_claimed: f64, seed: u64) -> Result<TrialReport> {
    if !(m_claimed > 0.0 && m_claimed.is_finite()) {
        return Err(Error::Domain(format!("claimed maximum {m_claimed} must be positive")));
    }
    let first = trials
        .first()
        .ok_or_else(|| Error::Domain("at least one trial is required".into()))?;
    let energies = evaluate_trials(problem, trials)?;
    let limit = m_claimed * (1.0 + BOUND_TOLERANCE);
    let (max_index, max_ratio) = energies
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, e)| if e.ratio > acc.1 { (i, e.ratio) } else { acc });
    let violators: Vec<usize> = (0..trials.len()).filter(|&i| energies[i].ratio > limit).collect();
    let falsification = violators.first().map(|&i| Falsification {
        params: *problem.params(),
        a: trials[i].field.a,
        seed,
        trial_index: trials[i].index,
        ratio: energies[i].ratio,
        m_claimed,
        field_coefficients: trials[i].coefficients.clone(),
    });
    Ok(TrialReport {
        params: *problem.params(),
        a: first.field.a,
        seed,
        trials: trials.len(),
        m_claimed,
        max_ratio,
        max_index: trials[max_index].index,
        gap: (m_claimed - max_ratio) / m_claimed,
        violations: violators.len(),
        falsification,
    })
}

pub fn random_trial_bound(
    problem: &OrrProblem,
    a: f64,
    m_claimed: f64,
    trials: usize,
    seed: u64,
) -> Result<TrialReport> {
    let fields = random_trials(problem, a, trials, seed)?;
    bound_check(problem, &fields, m_claimed, seed)
}
