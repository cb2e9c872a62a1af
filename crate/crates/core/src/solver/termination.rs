use super::iterate::Iterate;
use super::{inf_norm, SolveOptions, Status};
use crate::model::ConicProblem;

/// Terminal status reached at `it`, if any. Optimality is tested on the
/// point scaled by `1/tau` and requires `tau > 1e-6 max(1, kappa)`;
/// infeasibility rays are normalized by their objective before testing.
pub fn check_termination(problem: &ConicProblem, it: &Iterate, options: &SolveOptions) -> Option<Status> {
    let (a, g, c, b, h) = (problem.a(), problem.g(), problem.c(), problem.b(), problem.h());

    if it.tau > 1e-6 * it.kappa.max(1.0) {
        let t = it.tau;
        let (x, y, z, s) = (&it.x / t, &it.y / t, &it.z / t, &it.s / t);
        let dual = inf_norm(&(a.tr_mul(&y) + g.tr_mul(&z) + c)) / (1.0 + inf_norm(c));
        let primal = inf_norm(&(b - a * &x)) / (1.0 + inf_norm(b));
        let cone = inf_norm(&(h - g * &x - &s)) / (1.0 + inf_norm(h));
        let by_hz = b.dot(&y) + h.dot(&z);
        let gap = (c.dot(&x) + by_hz).abs() / (1.0 + by_hz.abs());
        if dual.max(primal).max(cone) <= options.tol_feas && gap <= options.tol_gap {
            return Some(Status::Optimal);
        }
    }

    let dual_obj = -b.dot(&it.y) - h.dot(&it.z);
    if dual_obj > 0.0 && inf_norm(&(a.tr_mul(&it.y) + g.tr_mul(&it.z))) / dual_obj <= options.tol_infeas {
        return Some(Status::PrimalInfeasible);
    }

    let cx = c.dot(&it.x);
    if cx < 0.0 {
        let ax = inf_norm(&(a * &it.x)) / -cx;
        let gxs = inf_norm(&(g * &it.x + &it.s)) / -cx;
        if ax <= options.tol_infeas && gxs <= options.tol_infeas {
            return Some(Status::DualInfeasible);
        }
    }
    None
}
