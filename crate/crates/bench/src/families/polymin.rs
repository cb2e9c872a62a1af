use exocone::interp::{build_interp, multi_indices, InterpParams};
use exocone::ConicProblem;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::assemble;
use crate::{block_rng, invalid, BenchError, Family};

/// A polynomial of degree `2k` in `m` variables given by its values at the
/// interpolation points, together with the interpolation data.
#[derive(Clone, Debug)]
pub struct PolyMinInstance {
    pub interp: InterpParams,
    /// Values of the polynomial at the interpolation points.
    pub values: DVector<f64>,
}

impl PolyMinInstance {
    /// Random instance with standard normal values at the points.
    pub fn random(m: usize, k: usize, seed: u64) -> Result<Self, BenchError> {
        let interp = build_interp(m, k)?;
        let mut rng = block_rng(Family::PolyMin, k, m, seed, 0);
        let values = DVector::from_fn(interp.u, |_, _| rng.sample(StandardNormal));
        Ok(PolyMinInstance { interp, values })
    }

    /// Instance interpolating `f` at the points of the `(m, k)` grid.
    pub fn from_fn(m: usize, k: usize, f: impl Fn(&[f64]) -> f64) -> Result<Self, BenchError> {
        let interp = build_interp(m, k)?;
        let values = DVector::from_fn(interp.u, |u, _| {
            let x: Vec<f64> = interp.points.row(u).iter().copied().collect();
            f(&x)
        });
        Ok(PolyMinInstance { interp, values })
    }

    /// Lower bound problem
    ///
    /// ```text
    /// min f'rho  s.t.  e'rho = 1,  rho in WSOS*
    /// ```
    ///
    /// whose optimal value is the largest `c` with `f - c` a weighted sum of
    /// squares on the box.
    pub fn problem(&self) -> Result<ConicProblem, BenchError> {
        polymin_problem(&self.interp, &self.values)
    }

    /// Chebyshev coefficients of the interpolating polynomial, in the graded
    /// basis order.
    pub fn coefficients(&self) -> Result<DVector<f64>, BenchError> {
        let idx = multi_indices(self.interp.m, 2 * self.interp.k);
        let u = self.interp.u;
        let vander = DMatrix::from_fn(u, u, |r, j| {
            let x: Vec<f64> = self.interp.points.row(r).iter().copied().collect();
            cheb_product(&idx[j], &x)
        });
        vander
            .lu()
            .solve(&self.values)
            .ok_or_else(|| invalid(Family::PolyMin, "singular interpolation system"))
    }

    /// Evaluates the interpolating polynomial at each of `points`.
    pub fn evaluate(&self, points: &[Vec<f64>]) -> Result<Vec<f64>, BenchError> {
        let coef = self.coefficients()?;
        let idx = multi_indices(self.interp.m, 2 * self.interp.k);
        Ok(points
            .iter()
            .map(|x| idx.iter().zip(coef.iter()).map(|(a, cj)| cj * cheb_product(a, x)).sum())
            .collect())
    }
}

fn cheb_product(alpha: &[usize], x: &[f64]) -> f64 {
    alpha.iter().zip(x).map(|(&a, &xi)| cheb(a, xi)).product()
}

fn cheb(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Random polynomial minimization instance over `[-1, 1]^m`.
pub fn gen_polymin(m: usize, k: usize, seed: u64) -> Result<ConicProblem, BenchError> {
    PolyMinInstance::random(m, k, seed)?.problem()
}

/// The lower-bound problem for the polynomial with the given point values.
pub fn polymin_problem(interp: &InterpParams, values: &DVector<f64>) -> Result<ConicProblem, BenchError> {
    let u = interp.u;
    if values.len() != u {
        return Err(invalid(Family::PolyMin, format!("expected {u} values, got {}", values.len())));
    }
    assemble(
        values.clone(),
        DMatrix::from_element(1, u, 1.0),
        DVector::from_element(1, 1.0),
        -DMatrix::identity(u, u),
        DVector::zeros(u),
        vec![interp.wsos_dual_kind()],
    )
}
