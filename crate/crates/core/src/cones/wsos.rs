//! Interpolant-basis weighted sum-of-squares cones. The barrier is
//! `-sum_l logdet(P_l' Diag(w) P_l)` on the dual cone; membership in the
//! primal cone is decided by minimizing `w'z + f(z)` over the dual cone.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{BarrierEval, ConeError, HessBlock};

/// Minimum Cholesky pivot, relative to the largest diagonal entry.
const MIN_PIVOT: f64 = 1e-12;
const MEMBERSHIP_MAX_ITERS: usize = 500;
/// Squared Newton decrement below which a minimizer is known to exist (the
/// theoretical bound is 1; the margin absorbs rounding).
const NEWTON_DECREMENT_SQ: f64 = 0.25;

/// The collection of interpolation matrices `P_l`, each `U x s_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterpMatrices(pub Vec<DMatrix<f64>>);

impl InterpMatrices {
    pub fn num_points(&self) -> usize {
        self.0.first().map_or(0, |p| p.nrows())
    }

    /// Barrier parameter `sum_l s_l`.
    pub fn nu(&self) -> usize {
        self.0.iter().map(|p| p.ncols()).sum()
    }

    pub fn validate(&self) -> Result<(), ConeError> {
        let u = self.num_points();
        if self.0.is_empty() || u == 0 {
            return Err(ConeError::InvalidParams("empty P collection".into()));
        }
        for (l, p) in self.0.iter().enumerate() {
            if p.nrows() != u {
                return Err(ConeError::InvalidParams(format!("P_{l} has {} rows, expected {u}", p.nrows())));
            }
            if p.ncols() == 0 || p.ncols() > u {
                return Err(ConeError::InvalidParams(format!(
                    "P_{l} has {} columns for {u} rows",
                    p.ncols()
                )));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(ConeError::InvalidParams(format!("P_{l} has non-finite entries")));
            }
        }
        Ok(())
    }
}

impl Serialize for InterpMatrices {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Vec<f64>>> = self
            .0
            .iter()
            .map(|p| p.row_iter().map(|r| r.iter().copied().collect()).collect())
            .collect();
        rows.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for InterpMatrices {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<Vec<f64>>> = Vec::deserialize(de)?;
        let mut mats = Vec::with_capacity(rows.len());
        for m in rows {
            let nrows = m.len();
            let ncols = m.first().map_or(0, Vec::len);
            if m.iter().any(|r| r.len() != ncols) {
                return Err(serde::de::Error::custom("ragged P matrix"));
            }
            mats.push(DMatrix::from_row_iterator(nrows, ncols, m.into_iter().flatten()));
        }
        Ok(InterpMatrices(mats))
    }
}

pub(super) fn barrier_point(p: &InterpMatrices) -> Vec<f64> {
    vec![1.0; p.num_points()]
}

fn factor(pl: &DMatrix<f64>, w: &[f64]) -> Option<Cholesky<f64, Dyn>> {
    let mut scaled = pl.clone();
    for (i, mut row) in scaled.row_iter_mut().enumerate() {
        row *= w[i];
    }
    let lam = pl.tr_mul(&scaled);
    let max_diag = lam.diagonal().iter().fold(0.0_f64, |m, v| m.max(*v));
    if !(max_diag > 0.0) {
        return None;
    }
    let ch = Cholesky::new(lam)?;
    let ok = ch.l_dirty().diagonal().iter().all(|v| v * v > MIN_PIVOT * max_diag);
    ok.then_some(ch)
}

pub(super) fn in_domain(p: &InterpMatrices, w: &[f64]) -> bool {
    p.0.iter().all(|pl| factor(pl, w).is_some())
}

pub(super) fn barrier(p: &InterpMatrices, w: &[f64], want_hess: bool) -> Option<BarrierEval> {
    let u = w.len();
    let mut value = 0.0;
    let mut grad = DVector::zeros(u);
    let mut hess = want_hess.then(|| DMatrix::zeros(u, u));
    for pl in &p.0 {
        let ch = factor(pl, w)?;
        value -= 2.0 * ch.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        // X = L^-1 P', Q = X'X = P (P' Diag(w) P)^-1 P'
        let x = ch.l().solve_lower_triangular(&pl.transpose())?;
        let q = x.tr_mul(&x);
        for i in 0..u {
            grad[i] -= q[(i, i)];
        }
        if let Some(h) = hess.as_mut() {
            *h += q.component_mul(&q);
        }
    }
    Some(BarrierEval { value, grad, hess: hess.map(HessBlock::Dense) })
}

/// Strict membership of `w` in the primal WSOS cone: the self-concordant
/// function `z -> w'z + f(z)` has a minimizer exactly when `w` is interior,
/// and a Newton decrement below one at any `z` certifies that it does.
/// Damped Newton from a scaled `e` searches for such a `z`.
pub(super) fn in_dual(p: &InterpMatrices, w: &[f64]) -> bool {
    let u = w.len();
    let nu = p.nu() as f64;
    let wv = DVector::from_column_slice(w);
    let total: f64 = w.iter().sum();
    if !(total > 0.0) {
        return false;
    }
    let mut z = DVector::from_element(u, nu / total);
    for _ in 0..MEMBERSHIP_MAX_ITERS {
        let Some(ev) = barrier(p, z.as_slice(), true) else {
            return false;
        };
        let g = &wv + &ev.grad;
        let Some(ch) = Cholesky::new(ev.hess.expect("hessian requested").to_dense()) else {
            return false;
        };
        let dir = -ch.solve(&g);
        let lambda2 = -g.dot(&dir);
        if !lambda2.is_finite() {
            return false;
        }
        if lambda2 < NEWTON_DECREMENT_SQ {
            return true;
        }
        // backtrack from a full step, never below the damped step, which
        // self-concordance guarantees to be feasible and decreasing
        let fz = wv.dot(&z) + ev.value;
        let damped = 1.0 / (1.0 + lambda2.sqrt());
        let mut t = 1.0;
        while t > damped {
            let cand = &z + &dir * t;
            if let Some(c) = barrier(p, cand.as_slice(), false) {
                if wv.dot(&cand) + c.value <= fz - 0.25 * t * lambda2 {
                    break;
                }
            }
            t *= 0.5;
        }
        z += dir * t.max(damped);
        if wv.dot(&z) <= 0.0 {
            return false;
        }
    }
    false
}
