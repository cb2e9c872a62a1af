use nalgebra::{Cholesky, DVector};

use super::iterate::Iterate;
use super::kkt::{build_rhs, spd_inverse, Direction, DirectionTarget, Factor, KktSystem};
use super::SolveOptions;
use crate::cones::{BarrierEval, Cone, ConeKind, HessBlock};
use crate::model::ConicProblem;

/// Barrier evaluations (with Hessians) on the barrier side of every block.
pub(crate) fn evaluate_blocks(problem: &ConicProblem, it: &Iterate) -> Option<Vec<BarrierEval>> {
    problem
        .cones()
        .iter()
        .enumerate()
        .map(|(k, cone)| cone.evaluate(it.barrier_side(problem, k), true).ok())
        .collect()
}

/// Local norm `|| other / mu + grad ||` in the inverse Hessian; for the
/// orthant the largest componentwise value.
pub fn block_proximity(ev: &BarrierEval, other: &[f64], mu: f64) -> f64 {
    let psi = DVector::from_column_slice(other) / mu + &ev.grad;
    match ev.hess.as_ref() {
        Some(HessBlock::Diagonal(h)) => {
            psi.iter().zip(h.iter()).fold(0.0_f64, |m, (p, hh)| m.max(p.abs() / hh.sqrt()))
        }
        Some(HessBlock::Dense(h)) => match Cholesky::new(h.clone()) {
            Some(c) => psi.dot(&c.solve(&psi)).max(0.0).sqrt(),
            None => match spd_inverse(h) {
                Some(hi) => psi.dot(&(hi * &psi)).max(0.0).sqrt(),
                None => f64::INFINITY,
            },
        },
        None => f64::INFINITY,
    }
}

/// Largest blockwise proximity, including the `tau kappa` pair.
pub(crate) fn proximity(problem: &ConicProblem, it: &Iterate, evals: &[BarrierEval]) -> f64 {
    let mu = it.mu(problem.nu());
    let mut prox = (it.tau * it.kappa / mu - 1.0).abs();
    for (k, ev) in evals.iter().enumerate() {
        prox = prox.max(block_proximity(ev, it.other_side(problem, k), mu));
    }
    if prox.is_nan() {
        f64::INFINITY
    } else {
        prox
    }
}

pub(crate) fn direction(
    problem: &ConicProblem,
    kkt: &KktSystem,
    it: &Iterate,
    evals: &[BarrierEval],
    target: DirectionTarget,
) -> Option<Direction> {
    let factor = Factor::new(problem, kkt, it, evals)?;
    factor.solve(&build_rhs(problem, it, evals, target))
}

/// Newton direction of the embedding at `it` for the given target. Returns
/// `None` when the iterate is not interior or the system is singular.
pub fn compute_directions(problem: &ConicProblem, it: &Iterate, target: DirectionTarget) -> Option<Direction> {
    let kkt = KktSystem::new(problem).ok()?;
    let evals = evaluate_blocks(problem, it)?;
    direction(problem, &kkt, it, &evals, target)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepMode {
    /// Accept the longest step staying within the predictor neighborhood.
    Predict,
    /// Accept the longest step that lowers the proximity below `current`
    /// or below the centering threshold.
    Center { current: f64 },
}

/// Accepted step with cached evaluations at the new point.
pub struct AcceptedStep {
    pub alpha: f64,
    pub iterate: Iterate,
    pub evals: Vec<BarrierEval>,
    pub proximity: f64,
}

fn in_beta_neighborhood(problem: &ConicProblem, it: &Iterate, mu: f64, beta: f64) -> bool {
    let ok = |v: f64| v >= beta && v <= 1.0 / beta;
    if !ok(it.tau * it.kappa / mu) {
        return false;
    }
    for (k, cone) in problem.cones().iter().enumerate() {
        let r = problem.block_range(k);
        let s = &it.s.as_slice()[r.clone()];
        let z = &it.z.as_slice()[r];
        if matches!(cone.kind(), ConeKind::Nonneg { .. }) {
            if !s.iter().zip(z).all(|(a, b)| ok(a * b / mu)) {
                return false;
            }
        } else {
            let sz: f64 = s.iter().zip(z).map(|(a, b)| a * b).sum();
            if !ok(sz / (Cone::nu(cone) * mu)) {
                return false;
            }
        }
    }
    true
}

fn advance(it: &Iterate, d: &Direction, alpha: f64) -> Iterate {
    Iterate {
        x: &it.x + &d.x * alpha,
        y: &it.y + &d.y * alpha,
        z: &it.z + &d.z * alpha,
        s: &it.s + &d.s * alpha,
        tau: it.tau + alpha * d.tau,
        kappa: it.kappa + alpha * d.kappa,
    }
}

/// Backtracking line search from a unit step. Every accepted point has
/// positive `tau` and `kappa`, all blocks strictly inside their barrier
/// domains, blockwise complementarity within the `beta` neighborhood, and
/// a proximity satisfying `mode`.
pub fn line_search(
    problem: &ConicProblem,
    it: &Iterate,
    d: &Direction,
    options: &SolveOptions,
    mode: StepMode,
) -> Option<AcceptedStep> {
    let nu = problem.nu();
    let mut alpha = 1.0;
    for _ in 0..=options.max_backtracks {
        if alpha < options.min_step {
            break;
        }
        let cand = advance(it, d, alpha);
        if let Some(step) = try_point(problem, cand, nu, options, mode, alpha) {
            return Some(step);
        }
        alpha *= options.step_backtrack;
    }
    None
}

fn try_point(
    problem: &ConicProblem,
    cand: Iterate,
    nu: f64,
    options: &SolveOptions,
    mode: StepMode,
    alpha: f64,
) -> Option<AcceptedStep> {
    if !(cand.tau > 0.0 && cand.kappa > 0.0) {
        return None;
    }
    let mu = cand.mu(nu);
    if !(mu > 0.0 && mu.is_finite()) {
        return None;
    }
    if !in_beta_neighborhood(problem, &cand, mu, options.neighborhood_beta) {
        return None;
    }
    let evals = evaluate_blocks(problem, &cand)?;
    let prox = proximity(problem, &cand, &evals);
    let ok = match mode {
        StepMode::Predict => prox <= options.eta_predict,
        StepMode::Center { current } => prox < current || prox <= options.eta_center,
    };
    ok.then_some(AcceptedStep { alpha, iterate: cand, evals, proximity: prox })
}
