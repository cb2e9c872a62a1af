//! Second-order cone `u >= ||w||` and rotated cone `2uv >= ||w||^2`.

use nalgebra::{DMatrix, DVector};

use super::{neg_log_terms, BarrierEval, HessBlock};

pub(super) fn soc_barrier_point(d: usize) -> Vec<f64> {
    let mut p = vec![0.0; 1 + d];
    p[0] = 1.0;
    p
}

fn soc_gap(p: &[f64]) -> Option<f64> {
    let u = p[0];
    let nw = p[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
    let gap = (u - nw) * (u + nw);
    (u > 0.0 && u > nw && gap > 0.0).then_some(gap)
}

pub(super) fn soc_in_domain(p: &[f64]) -> bool {
    soc_gap(p).is_some()
}

pub(super) fn soc_barrier(p: &[f64], want_hess: bool) -> Option<BarrierEval> {
    let gap = soc_gap(p)?;
    let n = p.len();
    // zeta = u^2 - |w|^2
    let mut dz = DVector::from_column_slice(p) * -2.0;
    dz[0] = 2.0 * p[0];
    let value = -gap.ln();
    if !want_hess {
        return Some(BarrierEval { value, grad: -&dz / gap, hess: None });
    }
    let mut d2 = DMatrix::from_diagonal_element(n, n, -2.0);
    d2[(0, 0)] = 2.0;
    let (grad, hess) = neg_log_terms(gap, &dz, &d2);
    Some(BarrierEval { value, grad, hess: Some(HessBlock::Dense(hess)) })
}

pub(super) fn rsoc_barrier_point(d: usize) -> Vec<f64> {
    let mut p = vec![0.0; 2 + d];
    p[0] = 1.0;
    p[1] = 1.0;
    p
}

fn rsoc_gap(p: &[f64]) -> Option<f64> {
    let (u, v) = (p[0], p[1]);
    let ww = p[2..].iter().map(|x| x * x).sum::<f64>();
    let gap = 2.0 * u * v - ww;
    (u > 0.0 && v > 0.0 && gap > 0.0).then_some(gap)
}

pub(super) fn rsoc_in_domain(p: &[f64]) -> bool {
    rsoc_gap(p).is_some()
}

pub(super) fn rsoc_barrier(p: &[f64], want_hess: bool) -> Option<BarrierEval> {
    let gap = rsoc_gap(p)?;
    let n = p.len();
    let mut dz = DVector::from_column_slice(p) * -2.0;
    dz[0] = 2.0 * p[1];
    dz[1] = 2.0 * p[0];
    let value = -gap.ln();
    if !want_hess {
        return Some(BarrierEval { value, grad: -&dz / gap, hess: None });
    }
    let mut d2 = DMatrix::from_diagonal_element(n, n, -2.0);
    d2[(0, 0)] = 0.0;
    d2[(1, 1)] = 0.0;
    d2[(0, 1)] = 2.0;
    d2[(1, 0)] = 2.0;
    let (grad, hess) = neg_log_terms(gap, &dz, &d2);
    Some(BarrierEval { value, grad, hess: Some(HessBlock::Dense(hess)) })
}
