use nalgebra::DVector;

use super::{ConicProblem, ModelError, PrimalDualPoint};

/// Default classification tolerance.
pub const DEFAULT_CERT_TOL: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    Optimal,
    PrimalInfeasible,
    DualInfeasible,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub point: PrimalDualPoint,
    /// `residual_eps` for optimality, the normalized ray residual otherwise.
    pub residual: f64,
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Normalized convergence residual: the maximum of the relative dual
/// equality, primal equality, primal cone and duality-gap violations.
/// Returns `+inf` if any term is non-finite or the point has wrong sizes.
pub fn residual_eps(problem: &ConicProblem, point: &PrimalDualPoint) -> f64 {
    if point.check(problem).is_err() {
        return f64::INFINITY;
    }
    let PrimalDualPoint { x, y, z, s } = point;
    let (c, b, h) = (problem.c(), problem.b(), problem.h());
    let dual = problem.a().tr_mul(y) + problem.g().tr_mul(z) + c;
    let primal_eq = b - problem.a() * x;
    let primal_cone = h - problem.g() * x - s;
    let by_hz = b.dot(y) + h.dot(z);
    let terms = [
        inf_norm(&dual) / (1.0 + inf_norm(c)),
        inf_norm(&primal_eq) / (1.0 + inf_norm(b)),
        inf_norm(&primal_cone) / (1.0 + inf_norm(h)),
        (c.dot(x) + by_hz).abs() / (1.0 + by_hz.abs()),
    ];
    if terms.iter().any(|t| !t.is_finite()) {
        return f64::INFINITY;
    }
    terms.into_iter().fold(0.0, f64::max)
}

/// Relative difference `|g1 - g2| / (1 + max(|g1|, |g2|))`.
pub fn objective_rel_diff(g1: f64, g2: f64) -> f64 {
    (g1 - g2).abs() / (1.0 + g1.abs().max(g2.abs()))
}

fn blocks_in_closure(problem: &ConicProblem, v: &DVector<f64>, tol: f64, dual: bool) -> bool {
    problem.cones().iter().enumerate().all(|(k, cone)| {
        let block = &v.as_slice()[problem.block_range(k)];
        if dual {
            cone.in_dual_closure(block, tol)
        } else {
            cone.in_closure(block, tol)
        }
    })
}

/// Decides which certificate, if any, the point provides. Optimality is
/// tested first, then primal infeasibility, then dual infeasibility, so at
/// most one kind is returned. Rays are normalized so the strict inequality
/// equals one before the tolerance tests.
pub fn classify_certificate(
    problem: &ConicProblem,
    point: &PrimalDualPoint,
    tol: f64,
) -> Result<Certificate, ModelError> {
    point.check(problem)?;
    let eps = residual_eps(problem, point);
    if eps < tol
        && blocks_in_closure(problem, &point.s, tol, false)
        && blocks_in_closure(problem, &point.z, tol, true)
    {
        return Ok(Certificate { kind: CertificateKind::Optimal, point: point.clone(), residual: eps });
    }

    let dual_obj = -problem.b().dot(&point.y) - problem.h().dot(&point.z);
    if dual_obj > 0.0 && dual_obj.is_finite() {
        let y = &point.y / dual_obj;
        let z = &point.z / dual_obj;
        let res = inf_norm(&(problem.a().tr_mul(&y) + problem.g().tr_mul(&z)));
        if res <= tol && blocks_in_closure(problem, &z, tol, true) {
            return Ok(Certificate {
                kind: CertificateKind::PrimalInfeasible,
                point: point.clone(),
                residual: res,
            });
        }
    }

    let cx = problem.c().dot(&point.x);
    if cx < 0.0 && cx.is_finite() {
        let x = &point.x / -cx;
        let res = inf_norm(&(problem.a() * &x));
        let ray = -(problem.g() * &x);
        if res <= tol && blocks_in_closure(problem, &ray, tol, false) {
            return Ok(Certificate {
                kind: CertificateKind::DualInfeasible,
                point: point.clone(),
                residual: res,
            });
        }
    }
    Err(ModelError::AmbiguousCertificate)
}
