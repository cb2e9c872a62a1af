//! Nonnegative orthant with `-sum log w`.

use nalgebra::DVector;

use super::{BarrierEval, HessBlock};

pub(super) fn barrier_point(d: usize) -> Vec<f64> {
    vec![1.0; d]
}

pub(super) fn in_domain(p: &[f64]) -> bool {
    p.iter().all(|&v| v > 0.0)
}

pub(super) fn barrier(p: &[f64], want_hess: bool) -> Option<BarrierEval> {
    if !in_domain(p) {
        return None;
    }
    let value = -p.iter().map(|v| v.ln()).sum::<f64>();
    let grad = DVector::from_iterator(p.len(), p.iter().map(|v| -1.0 / v));
    let hess = want_hess.then(|| HessBlock::Diagonal(grad.map(|g| g * g)));
    Some(BarrierEval { value, grad, hess })
}
