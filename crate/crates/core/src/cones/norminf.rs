//! Infinity-norm epigraph `u >= ||w||_inf` with
//! `-sum log(u^2 - w_i^2) + (d - 1) log u`. Its dual is the l1 epigraph.

use nalgebra::{DMatrix, DVector};

use super::{BarrierEval, HessBlock};

pub(super) fn barrier_point(d: usize) -> Vec<f64> {
    let mut p = vec![0.0; 1 + d];
    p[0] = 1.0;
    p
}

pub(super) fn in_domain(p: &[f64]) -> bool {
    let u = p[0];
    u > 0.0 && p[1..].iter().all(|w| u - w.abs() > 0.0)
}

pub(super) fn in_dual(p: &[f64]) -> bool {
    let u = p[0];
    u > 0.0 && u - p[1..].iter().map(|w| w.abs()).sum::<f64>() > 0.0
}

pub(super) fn barrier(p: &[f64], want_hess: bool) -> Option<BarrierEval> {
    if !in_domain(p) {
        return None;
    }
    let u = p[0];
    let w = &p[1..];
    let d = w.len();
    let gaps: Vec<f64> = w.iter().map(|wi| (u - wi) * (u + wi)).collect();
    let dm1 = (d - 1) as f64;
    let value = -gaps.iter().map(|g| g.ln()).sum::<f64>() + dm1 * u.ln();
    let mut grad = DVector::zeros(1 + d);
    grad[0] = -2.0 * u * gaps.iter().map(|g| 1.0 / g).sum::<f64>() + dm1 / u;
    for i in 0..d {
        grad[1 + i] = 2.0 * w[i] / gaps[i];
    }
    let hess = want_hess.then(|| {
        let mut h = DMatrix::zeros(1 + d, 1 + d);
        let mut huu = -dm1 / (u * u);
        for i in 0..d {
            let g = gaps[i];
            let g2 = g * g;
            huu += 2.0 * (u * u + w[i] * w[i]) / g2;
            let huw = -4.0 * u * w[i] / g2;
            h[(0, 1 + i)] = huw;
            h[(1 + i, 0)] = huw;
            h[(1 + i, 1 + i)] = 2.0 / g + 4.0 * w[i] * w[i] / g2;
        }
        h[(0, 0)] = huu;
        HessBlock::Dense(h)
    });
    Some(BarrierEval { value, grad, hess })
}
