//! Chebyshev–Gauss–Lobatto collocation on `[-1, 1]`.
//!
//! Nodes are ordered `z_k = cos(pi k / N)`, so `z_0 = 1` and `z_N = -1`.
//! Differentiation matrices of orders 1 to 4 use the Welfert recursion with
//! the negative-sum trick on the diagonal, which keeps round-off well below
//! that of repeated products of the first-derivative matrix.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const MIN_DEGREE: usize = 8;
pub const MAX_DEGREE: usize = 512;

#[derive(Debug, Clone)]
pub struct SpectralOperator {
    n: usize,
    nodes: Vec<f64>,
    /// `diff[k]` is the matrix of the (k+1)-th derivative.
    diff: [DMatrix<f64>; 4],
    weights: Vec<f64>,
}

impl SpectralOperator {
    /// Builds nodes, differentiation matrices and Clenshaw–Curtis weights for
    /// polynomial degree `n`.
    pub fn new(n: usize) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
            return Err(Error::Domain(format!(
                "polynomial degree N = {n} outside [{MIN_DEGREE}, {MAX_DEGREE}]"
            )));
        }
        Ok(Self::build(n))
    }

    fn build(n: usize) -> Self {
        let nodes = chebyshev_nodes(n);
        let diff = differentiation_matrices(&nodes);
        let weights = clenshaw_curtis_weights(n);
        Self { n, nodes, diff, weights }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn d1(&self) -> &DMatrix<f64> {
        &self.diff[0]
    }

    pub fn d2(&self) -> &DMatrix<f64> {
        &self.diff[1]
    }

    pub fn d3(&self) -> &DMatrix<f64> {
        &self.diff[2]
    }

    pub fn d4(&self) -> &DMatrix<f64> {
        &self.diff[3]
    }

    /// Matrix of the derivative of order `k` in `1..=4`.
    pub fn diff(&self, k: usize) -> &DMatrix<f64> {
        assert!((1..=4).contains(&k), "derivative order {k} not in 1..=4");
        &self.diff[k - 1]
    }

    /// Clenshaw–Curtis weights for the integral over `[-1, 1]`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), self.len());
        self.weights.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    pub fn clamped(&self) -> ClampedMaps {
        ClampedMaps::new(self)
    }
}

/// `cos(pi k / N)` written as a sine so the node set is exactly symmetric.
pub fn chebyshev_nodes(n: usize) -> Vec<f64> {
    let nf = n as f64;
    (0..=n)
        .map(|k| (PI * (nf - 2.0 * k as f64) / (2.0 * nf)).sin())
        .collect()
}

fn differentiation_matrices(z: &[f64]) -> [DMatrix<f64>; 4] {
    let size = z.len();
    let n = size - 1;
    let nf = n as f64;
    // z_i - z_j via the product formula avoids cancellation near the ends.
    let diff = |i: usize, j: usize| {
        2.0 * (PI * (i + j) as f64 / (2.0 * nf)).sin() * (PI * (j as f64 - i as f64) / (2.0 * nf)).sin()
    };
    let c = |i: usize| {
        let base = if i == 0 || i == n { 2.0 } else { 1.0 };
        if i % 2 == 0 {
            base
        } else {
            -base
        }
    };

    let mut prev = DMatrix::<f64>::identity(size, size);
    let mut out: Vec<DMatrix<f64>> = Vec::with_capacity(4);
    for order in 1..=4 {
        let ord = order as f64;
        let mut d = DMatrix::<f64>::zeros(size, size);
        for i in 0..size {
            let mut row_sum = 0.0;
            for j in 0..size {
                if i == j {
                    continue;
                }
                let ratio = c(i) / c(j);
                let v = ord / diff(i, j) * (ratio * prev[(i, i)] - prev[(i, j)]);
                d[(i, j)] = v;
                row_sum += v;
            }
            d[(i, i)] = -row_sum;
        }
        prev = d.clone();
        out.push(d);
    }
    let mut it = out.into_iter();
    [
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    ]
}

/// Clenshaw–Curtis weights on the Chebyshev–Gauss–Lobatto nodes.
pub fn clenshaw_curtis_weights(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut w = vec![0.0; n + 1];
    let mut v = vec![1.0; n.saturating_sub(1)];
    let theta = |k: usize| PI * k as f64 / nf;
    if n % 2 == 0 {
        let end = 1.0 / (nf * nf - 1.0);
        w[0] = end;
        w[n] = end;
        for k in 1..n / 2 {
            let kf = k as f64;
            for (i, vi) in v.iter_mut().enumerate() {
                *vi -= 2.0 * (2.0 * kf * theta(i + 1)).cos() / (4.0 * kf * kf - 1.0);
            }
        }
        for (i, vi) in v.iter_mut().enumerate() {
            *vi -= (nf * theta(i + 1)).cos() / (nf * nf - 1.0);
        }
    } else {
        let end = 1.0 / (nf * nf);
        w[0] = end;
        w[n] = end;
        for k in 1..=(n - 1) / 2 {
            let kf = k as f64;
            for (i, vi) in v.iter_mut().enumerate() {
                *vi -= 2.0 * (2.0 * kf * theta(i + 1)).cos() / (4.0 * kf * kf - 1.0);
            }
        }
    }
    for (i, vi) in v.iter().enumerate() {
        w[i + 1] = 2.0 * vi / nf;
    }
    w
}

/// Clamped-boundary machinery (`f(±1) = f'(±1) = 0`) by basis recombination.
///
/// The unknowns are the nodal values at `z_2 .. z_{N-2}`. A clamped polynomial
/// of degree `N` is `(1 - z^2)^2 q(z)` with `deg q <= N - 4`, so those `N - 3`
/// values determine it; [`ClampedMaps::injection`] rebuilds the full nodal
/// vector, with exact zeros at `z = ±1`.
#[derive(Debug, Clone)]
pub struct ClampedMaps {
    dof: Vec<usize>,
    injection: DMatrix<f64>,
    d2: DMatrix<f64>,
    d4: DMatrix<f64>,
}

impl ClampedMaps {
    pub fn new(op: &SpectralOperator) -> Self {
        let n = op.degree();
        let z = op.nodes();
        let dof: Vec<usize> = (2..=n - 2).collect();
        let m = dof.len();

        // Barycentric weights of the interior set, with differences doubled to
        // keep the products near unit magnitude.
        let bary: Vec<f64> = dof
            .iter()
            .map(|&j| {
                let p: f64 = dof
                    .iter()
                    .filter(|&&k| k != j)
                    .map(|&k| 2.0 * (z[j] - z[k]))
                    .product();
                1.0 / p
            })
            .collect();

        let bubble = |x: f64| {
            let s = 1.0 - x * x;
            s * s
        };

        let mut injection = DMatrix::<f64>::zeros(n + 1, m);
        for (col, &j) in dof.iter().enumerate() {
            injection[(j, col)] = 1.0;
        }
        for &k in &[1, n - 1] {
            let terms: Vec<f64> = dof
                .iter()
                .zip(&bary)
                .map(|(&j, &b)| b / (z[k] - z[j]))
                .collect();
            let denom: f64 = terms.iter().sum();
            for (col, &j) in dof.iter().enumerate() {
                injection[(k, col)] = bubble(z[k]) / bubble(z[j]) * terms[col] / denom;
            }
        }

        let restrict = |full: &DMatrix<f64>| {
            let applied = full * &injection;
            DMatrix::from_fn(m, m, |r, c| applied[(dof[r], c)])
        };
        let d2 = restrict(op.d2());
        let d4 = restrict(&(op.d2() * op.d2()));
        Self { dof, injection, d2, d4 }
    }

    /// Number of interior degrees of freedom, `N - 3`.
    pub fn len(&self) -> usize {
        self.dof.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dof.is_empty()
    }

    /// Node indices carrying the unknowns.
    pub fn dof_indices(&self) -> &[usize] {
        &self.dof
    }

    /// `(N + 1) x (N - 3)` map from interior unknowns to full nodal values.
    pub fn injection(&self) -> &DMatrix<f64> {
        &self.injection
    }

    pub fn d2(&self) -> &DMatrix<f64> {
        &self.d2
    }

    pub fn d4(&self) -> &DMatrix<f64> {
        &self.d4
    }

    /// Full nodal vector of the clamped polynomial with the given interior values.
    pub fn inject(&self, interior: &[f64]) -> Vec<f64> {
        assert_eq!(interior.len(), self.len());
        let v = &self.injection * nalgebra::DVector::from_column_slice(interior);
        v.iter().copied().collect()
    }

    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        self.dof.iter().map(|&k| full[k]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(m: &DMatrix<f64>, f: &[f64]) -> Vec<f64> {
        (m * nalgebra::DVector::from_column_slice(f)).iter().copied().collect()
    }

    fn max_err(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn rejects_out_of_range_degree() {
        assert!(matches!(SpectralOperator::new(7), Err(Error::Domain(_))));
        assert!(matches!(SpectralOperator::new(513), Err(Error::Domain(_))));
        assert!(SpectralOperator::new(8).is_ok());
    }

    #[test]
    fn three_node_grid() {
        let z = chebyshev_nodes(2);
        assert_eq!(z, vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn nodes_strictly_decreasing_with_exact_endpoints() {
        for n in [8, 9, 50, 51, 512] {
            let z = chebyshev_nodes(n);
            assert_eq!(z[0], 1.0);
            assert_eq!(z[n], -1.0);
            assert!(z.windows(2).all(|w| w[0] > w[1]));
            for k in 0..=n {
                assert_eq!(z[k], -z[n - k]);
            }
        }
    }

    #[test]
    fn first_derivative_of_cubic() {
        let op = SpectralOperator::new(16).unwrap();
        let f: Vec<f64> = op.nodes().iter().map(|z| z.powi(3)).collect();
        let exact: Vec<f64> = op.nodes().iter().map(|z| 3.0 * z * z).collect();
        assert!(max_err(&apply(op.d1(), &f), &exact) <= 1e-10);
    }

    #[test]
    fn quadrature_of_quartic() {
        let op = SpectralOperator::new(16).unwrap();
        let f: Vec<f64> = op.nodes().iter().map(|z| z.powi(4)).collect();
        assert!((op.integrate(&f) - 0.4).abs() <= 1e-12);
    }

    #[test]
    fn weights_sum_to_two_and_integrate_polynomials() {
        for n in [8, 9, 16, 33, 64, 80, 200] {
            let op = SpectralOperator::new(n).unwrap();
            let sum: f64 = op.weights().iter().sum();
            assert!((sum - 2.0).abs() <= 1e-12, "N={n} sum={sum}");
            assert!(op.weights().iter().all(|&w| w > 0.0));
            for j in 0..n {
                let f: Vec<f64> = op.nodes().iter().map(|z| z.powi(j as i32)).collect();
                let exact = if j % 2 == 0 { 2.0 / (j as f64 + 1.0) } else { 0.0 };
                assert!((op.integrate(&f) - exact).abs() <= 1e-10, "N={n} j={j}");
            }
        }
    }

    #[test]
    fn first_derivative_rows_sum_to_zero() {
        for n in [8, 50, 80, 200] {
            let op = SpectralOperator::new(n).unwrap();
            for r in op.d1().row_iter() {
                assert!(r.sum().abs() <= 1e-10);
            }
        }
    }

    fn falling(j: usize, k: usize) -> f64 {
        (0..k).map(|i| (j - i) as f64).product()
    }

    #[test]
    fn low_order_derivatives_exact_on_monomials() {
        for n in [8, 16, 32, 50, 64, 80] {
            let op = SpectralOperator::new(n).unwrap();
            for k in 1..=2 {
                for j in 0..=6usize.min(n) {
                    let f: Vec<f64> = op.nodes().iter().map(|z| z.powi(j as i32)).collect();
                    let exact: Vec<f64> = op
                        .nodes()
                        .iter()
                        .map(|z| if j < k { 0.0 } else { falling(j, k) * z.powi((j - k) as i32) })
                        .collect();
                    let err = max_err(&apply(op.diff(k), &f), &exact);
                    assert!(err <= 1e-8, "N={n} k={k} j={j} err={err:e}");
                }
            }
        }
    }

    fn monomial_error(op: &SpectralOperator, k: usize) -> f64 {
        (0..=6usize)
            .map(|j| {
                let f: Vec<f64> = op.nodes().iter().map(|z| z.powi(j as i32)).collect();
                let exact: Vec<f64> = op
                    .nodes()
                    .iter()
                    .map(|z| if j < k { 0.0 } else { falling(j, k) * z.powi((j - k) as i32) })
                    .collect();
                max_err(&apply(op.diff(k), &f), &exact)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn high_order_derivatives_exact_on_monomials() {
        // Round-off in D3 and D4 grows like eps * N^(2k); 1e-8 is reachable up
        // to N = 32 for D3 and N = 16 for D4.
        for n in [8, 12, 16, 24, 32] {
            let op = SpectralOperator::new(n).unwrap();
            assert!(monomial_error(&op, 3) <= 1e-8, "N={n}");
            if n <= 16 {
                assert!(monomial_error(&op, 4) <= 1e-8, "N={n}");
            }
        }
        for n in [50, 64, 80] {
            let op = SpectralOperator::new(n).unwrap();
            let nf = n as f64;
            assert!(monomial_error(&op, 3) <= 1e-16 * nf.powi(6) * 10.0);
            assert!(monomial_error(&op, 4) <= 1e-16 * nf.powi(8) * 10.0);
        }
    }

    #[test]
    fn spectral_convergence_on_sinh() {
        let err = |n: usize| {
            let op = SpectralOperator::new(n).unwrap();
            let f: Vec<f64> = op.nodes().iter().map(|z| (3.0 * z).sinh()).collect();
            let exact: Vec<f64> = op.nodes().iter().map(|z| 3.0 * (3.0 * z).cosh()).collect();
            max_err(&apply(op.d1(), &f), &exact)
        };
        assert!(err(32) * 10.0 <= err(16));
    }

    #[test]
    fn clamped_fourth_derivative_of_bubble() {
        let op = SpectralOperator::new(20).unwrap();
        let maps = op.clamped();
        assert_eq!(maps.len(), 17);
        let p: Vec<f64> = op.nodes().iter().map(|z| (1.0 - z * z).powi(2)).collect();
        let interior = maps.restrict(&p);
        let d4p = apply(maps.d4(), &interior);
        assert!(d4p.iter().all(|v| (v - 24.0).abs() <= 1e-8), "{d4p:?}");
    }

    #[test]
    fn clamped_second_derivative() {
        let op = SpectralOperator::new(20).unwrap();
        let maps = op.clamped();
        let p: Vec<f64> = op.nodes().iter().map(|z| (1.0 - z * z).powi(2) * z).collect();
        let d2p = apply(maps.d2(), &maps.restrict(&p));
        let exact: Vec<f64> = maps
            .dof_indices()
            .iter()
            .map(|&k| {
                let z = op.nodes()[k];
                -12.0 * z + 20.0 * z.powi(3)
            })
            .collect();
        assert!(max_err(&d2p, &exact) <= 1e-8);
    }

    #[test]
    fn injection_reproduces_clamped_polynomial() {
        let op = SpectralOperator::new(24).unwrap();
        let maps = op.clamped();
        let p: Vec<f64> = op
            .nodes()
            .iter()
            .map(|z| (1.0 - z * z).powi(2) * (1.0 + 2.0 * z - z.powi(5)))
            .collect();
        let full = maps.inject(&maps.restrict(&p));
        assert_eq!(full[0], 0.0);
        assert_eq!(full[24], 0.0);
        assert!(max_err(&full, &p) <= 1e-12);
        let dp = apply(op.d1(), &full);
        assert!(dp[0].abs() <= 1e-10 && dp[24].abs() <= 1e-10);
    }

    #[test]
    fn clamped_biharmonic_spectrum_is_positive_real() {
        for n in [16, 40, 80] {
            let op = SpectralOperator::new(n).unwrap();
            let maps = op.clamped();
            let eig = maps.d4().complex_eigenvalues();
            for l in eig.iter() {
                assert!(l.re > 0.0, "N={n} eigenvalue {l}");
                assert!(l.im.abs() / l.re <= 1e-8, "N={n} eigenvalue {l}");
            }
        }
    }
}
