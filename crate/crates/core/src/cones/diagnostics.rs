//! Numerical self-checks of barrier oracles at a given point.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{Cone, ConeError};

/// Deviations of one cone's oracles from the identities every logarithmically
/// homogeneous barrier satisfies, measured at one point. All errors are relative.
#[derive(Clone, Debug)]
pub struct OracleReport {
    /// `|p'g + nu| / nu`
    pub grad_homogeneity: f64,
    /// `||H p + g||_inf / ||g||_inf`
    pub hess_homogeneity: f64,
    /// `max_t |f(t p) - f(p) + nu log t| / max(1, |f(p)|)` over `t` in {0.5, 2, 10}
    pub scaling: f64,
    /// Central-difference gradient error, relative to `||g||_inf`.
    pub fd_grad: f64,
    /// Central-difference Hessian error, relative to the largest Hessian entry.
    pub fd_hess: f64,
    pub min_hess_eig: f64,
    /// Whether `-g` lies strictly inside the dual of the barrier's domain.
    pub neg_grad_in_dual: bool,
}

fn inf(v: &DVector<f64>) -> f64 {
    v.amax()
}

/// Central-difference step along coordinate `i`: a fixed fraction of the
/// Dikin radius `1 / sqrt(H_ii)`, which bounds the truncation error for a
/// self-concordant barrier, shrunk further if `p +/- h e_i` leaves the domain.
fn fd_step(cone: &Cone, p: &[f64], hii: f64, i: usize) -> f64 {
    let mut h = 1e-5 / hii.sqrt();
    for _ in 0..30 {
        let mut a = p.to_vec();
        let mut b = p.to_vec();
        a[i] += h;
        b[i] -= h;
        if cone.in_barrier_domain(&a) && cone.in_barrier_domain(&b) {
            return h;
        }
        h *= 0.5;
    }
    h
}

pub fn oracle_report(cone: &Cone, p: &[f64]) -> Result<OracleReport, ConeError> {
    let nu = cone.nu();
    let ev = cone.evaluate(p, true)?;
    let g = &ev.grad;
    let hm = ev.hess.as_ref().expect("hessian requested").to_dense();
    let pv = DVector::from_column_slice(p);

    let grad_homogeneity = (pv.dot(g) + nu).abs() / nu;
    let hess_homogeneity = inf(&(&hm * &pv + g)) / inf(g);
    let mut scaling = 0.0_f64;
    for t in [0.5, 2.0, 10.0] {
        let ft = cone.barrier_value((&pv * t).as_slice())?;
        scaling = scaling.max((ft - ev.value + nu * f64::ln(t)).abs() / ev.value.abs().max(1.0));
    }

    let n = p.len();
    let mut fd_g = DVector::zeros(n);
    let mut fd_h = DMatrix::zeros(n, n);
    for i in 0..n {
        let h = fd_step(cone, p, hm[(i, i)], i);
        let mut a = p.to_vec();
        let mut b = p.to_vec();
        a[i] += h;
        b[i] -= h;
        let ea = cone.evaluate(&a, false)?;
        let eb = cone.evaluate(&b, false)?;
        fd_g[i] = (ea.value - eb.value) / (2.0 * h);
        fd_h.set_column(i, &((&ea.grad - &eb.grad) / (2.0 * h)));
    }
    let fd_grad = inf(&(&fd_g - g)) / inf(g);
    let fd_hess = (&fd_h - &hm).amax() / hm.amax();
    let sym = (&hm + hm.transpose()) * 0.5;
    let min_hess_eig = SymmetricEigen::new(sym).eigenvalues.min();
    let neg = (-g).as_slice().to_vec();
    let neg_grad_in_dual = if cone.uses_dual_barrier() { cone.in_interior(&neg) } else { cone.in_dual_interior(&neg) };
    Ok(OracleReport { grad_homogeneity, hess_homogeneity, scaling, fd_grad, fd_hess, min_hess_eig, neg_grad_in_dual })
}

/// Point of the barrier domain obtained by moving from the cone's barrier
/// point along `noise` (halving the move until the point is inside) and
/// scaling the result by `scale > 0`. Used to draw random test points.
pub fn perturbed_point(cone: &Cone, noise: &[f64], spread: f64, scale: f64) -> DVector<f64> {
    let t = cone.barrier_point();
    let dir = DVector::from_column_slice(noise);
    let mut step = spread;
    for _ in 0..60 {
        let cand = &t + &dir * step;
        if cone.in_barrier_domain(cand.as_slice()) {
            return cand * scale;
        }
        step *= 0.5;
    }
    t * scale
}
