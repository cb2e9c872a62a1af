//! Geometric-mean hypograph `u <= geomean(w)` with
//! `-log(geomean(w) - u) - sum log w`.

use nalgebra::{DMatrix, DVector};

use super::{neg_log_terms, BarrierEval, HessBlock};

pub(super) fn barrier_point(d: usize) -> Vec<f64> {
    let mut p = vec![1.0; 1 + d];
    p[0] = 0.5;
    p
}

fn geomean(w: &[f64]) -> f64 {
    (w.iter().map(|v| v.ln()).sum::<f64>() / w.len() as f64).exp()
}

pub(super) fn in_domain(p: &[f64]) -> bool {
    let w = &p[1..];
    w.iter().all(|&v| v > 0.0) && geomean(w) - p[0] > 0.0
}

/// Dual cone: `u < 0`, `w > 0`, `-u < d * geomean(w)`.
pub(super) fn in_dual(p: &[f64]) -> bool {
    let (u, w) = (p[0], &p[1..]);
    u < 0.0 && w.iter().all(|&v| v > 0.0) && w.len() as f64 * geomean(w) + u > 0.0
}

pub(super) fn barrier(p: &[f64], want_hess: bool) -> Option<BarrierEval> {
    if !in_domain(p) {
        return None;
    }
    let (u, w) = (p[0], &p[1..]);
    let d = w.len();
    let df = d as f64;
    let phi = geomean(w);
    let zeta = phi - u;
    let value = -zeta.ln() - w.iter().map(|v| v.ln()).sum::<f64>();
    let mut dz = DVector::zeros(1 + d);
    dz[0] = -1.0;
    for i in 0..d {
        dz[1 + i] = phi / (df * w[i]);
    }
    let mut d2 = DMatrix::zeros(1 + d, 1 + d);
    if want_hess {
        for i in 0..d {
            for j in 0..d {
                let mut v = phi / (df * df * w[i] * w[j]);
                if i == j {
                    v -= phi / (df * w[i] * w[i]);
                }
                d2[(1 + i, 1 + j)] = v;
            }
        }
    }
    let (mut grad, mut hess) = neg_log_terms(zeta, &dz, &d2);
    for i in 0..d {
        grad[1 + i] -= 1.0 / w[i];
        hess[(1 + i, 1 + i)] += 1.0 / (w[i] * w[i]);
    }
    Some(BarrierEval { value, grad, hess: want_hess.then_some(HessBlock::Dense(hess)) })
}
