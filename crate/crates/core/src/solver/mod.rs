//! Predictor-corrector interior-point method on the homogeneous self-dual
//! embedding. Each iteration takes one predictor step followed by centering
//! steps, keeping all iterates in a neighborhood of the central path.
//!
//! Cones whose barrier belongs to the dual cone are handled by swapping the
//! roles of `s` and `z` within their block.

mod iterate;
mod kkt;
mod step;
mod termination;

use std::time::Instant;

use nalgebra::DVector;
use thiserror::Error;

use crate::model::{ConicProblem, PrimalDualPoint};

pub use iterate::{hsde_init, hsde_residuals, HsdeResiduals, Iterate};
pub use kkt::{Direction, DirectionTarget};
pub use step::{block_proximity, compute_directions, line_search, AcceptedStep, StepMode};
pub use termination::check_termination;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid solver option: {0}")]
    InvalidOptions(String),
    #[error("KKT factorization failed: {0}")]
    Factorization(String),
}

/// Solver settings.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub tol_feas: f64,
    pub tol_gap: f64,
    /// Tolerance on normalized improving-ray residuals.
    pub tol_infeas: f64,
    pub max_iters: usize,
    /// Wall-clock limit in seconds, checked between iterations.
    pub time_limit: f64,
    /// Blockwise complementarity products must lie in `[beta, 1/beta]` times `mu`.
    pub neighborhood_beta: f64,
    pub step_backtrack: f64,
    pub max_backtracks: usize,
    pub min_step: f64,
    /// Largest central-path proximity accepted after a predictor step.
    pub eta_predict: f64,
    /// Centering stops once the proximity is below this value.
    pub eta_center: f64,
    pub max_correctors: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol_feas: 1e-7,
            tol_gap: 1e-7,
            tol_infeas: 1e-7,
            max_iters: 500,
            time_limit: 1800.0,
            neighborhood_beta: 0.1,
            step_backtrack: 0.8,
            max_backtracks: 40,
            min_step: 1e-10,
            eta_predict: 0.9,
            eta_center: 0.5,
            max_correctors: 8,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<(), SolverError> {
        let positive = [
            ("tol_feas", self.tol_feas),
            ("tol_gap", self.tol_gap),
            ("tol_infeas", self.tol_infeas),
            ("time_limit", self.time_limit),
            ("min_step", self.min_step),
            ("eta_predict", self.eta_predict),
            ("eta_center", self.eta_center),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(SolverError::InvalidOptions(format!("{name} must be positive, got {v}")));
            }
        }
        let unit = [("neighborhood_beta", self.neighborhood_beta), ("step_backtrack", self.step_backtrack)];
        for (name, v) in unit {
            if !(v > 0.0 && v < 1.0) {
                return Err(SolverError::InvalidOptions(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if self.max_iters == 0 {
            return Err(SolverError::InvalidOptions("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Optimal,
    PrimalInfeasible,
    DualInfeasible,
    SlowProgress,
    IterationLimit,
    TimeLimit,
    NumericalError,
}

impl Status {
    /// Short code used in benchmark tables.
    pub fn code(self) -> &'static str {
        match self {
            Status::Optimal | Status::PrimalInfeasible | Status::DualInfeasible => "co",
            Status::SlowProgress => "sp",
            Status::IterationLimit => "il",
            Status::TimeLimit => "tl",
            Status::NumericalError => "er",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: Status,
    /// `(x, y, z, s) / tau` for optimal and limit statuses; the normalized
    /// improving ray for infeasibility statuses.
    pub point: PrimalDualPoint,
    pub tau: f64,
    pub kappa: f64,
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub iterations: usize,
    pub solve_seconds: f64,
    /// Complementarity measure after initialization and after each iteration.
    pub mu_history: Vec<f64>,
}

/// Snapshot handed to an observer after each iteration.
pub struct IterationInfo<'a> {
    pub iteration: usize,
    pub iterate: &'a Iterate,
    pub mu: f64,
    pub predictor_step: f64,
    pub correctors: usize,
}

pub fn solve(problem: &ConicProblem, options: &SolveOptions) -> Result<SolveResult, SolverError> {
    solve_with_observer(problem, options, |_| {})
}

pub fn solve_with_observer<F>(
    problem: &ConicProblem,
    options: &SolveOptions,
    mut observer: F,
) -> Result<SolveResult, SolverError>
where
    F: FnMut(&IterationInfo<'_>),
{
    options.validate()?;
    let start = Instant::now();
    let nu = problem.nu();
    let mut it = hsde_init(problem);
    let mut mu_history = vec![it.mu(nu)];
    let finish = |it: &Iterate, status: Status, iterations: usize, mu_history: Vec<f64>| {
        build_result(problem, it, status, iterations, start.elapsed().as_secs_f64(), mu_history)
    };

    let kkt = match kkt::KktSystem::new(problem) {
        Ok(k) => k,
        Err(_) => return Ok(finish(&it, Status::NumericalError, 0, mu_history)),
    };
    let mut evals = match step::evaluate_blocks(problem, &it) {
        Some(e) => e,
        None => return Ok(finish(&it, Status::NumericalError, 0, mu_history)),
    };
    let mut prox = step::proximity(problem, &it, &evals);
    let mut iterations = 0;

    loop {
        if let Some(status) = check_termination(problem, &it, options) {
            return Ok(finish(&it, status, iterations, mu_history));
        }
        if iterations >= options.max_iters {
            return Ok(finish(&it, Status::IterationLimit, iterations, mu_history));
        }
        if start.elapsed().as_secs_f64() > options.time_limit {
            return Ok(finish(&it, Status::TimeLimit, iterations, mu_history));
        }

        let mut progressed = false;
        let mut predictor_step = 0.0;
        let Some(dir) = step::direction(problem, &kkt, &it, &evals, DirectionTarget::Predict) else {
            return Ok(finish(&it, Status::NumericalError, iterations, mu_history));
        };
        if let Some(acc) = line_search(problem, &it, &dir, options, StepMode::Predict) {
            predictor_step = acc.alpha;
            it = acc.iterate;
            evals = acc.evals;
            prox = acc.proximity;
            progressed = true;
        }

        let mut correctors = 0;
        while correctors < options.max_correctors && prox > options.eta_center {
            let Some(dir) = step::direction(problem, &kkt, &it, &evals, DirectionTarget::Center) else {
                return Ok(finish(&it, Status::NumericalError, iterations, mu_history));
            };
            match line_search(problem, &it, &dir, options, StepMode::Center { current: prox }) {
                Some(acc) => {
                    it = acc.iterate;
                    evals = acc.evals;
                    prox = acc.proximity;
                    correctors += 1;
                    progressed = true;
                }
                None => break,
            }
        }
        if !progressed {
            return Ok(finish(&it, Status::NumericalError, iterations, mu_history));
        }

        iterations += 1;
        let mu = it.mu(nu);
        mu_history.push(mu);
        observer(&IterationInfo { iteration: iterations, iterate: &it, mu, predictor_step, correctors });
        if !mu.is_finite() {
            return Ok(finish(&it, Status::NumericalError, iterations, mu_history));
        }
        if mu_history.len() > 20 {
            let old = mu_history[mu_history.len() - 21];
            if mu > 0.999 * old {
                if let Some(status) = check_termination(problem, &it, options) {
                    return Ok(finish(&it, status, iterations, mu_history));
                }
                return Ok(finish(&it, Status::SlowProgress, iterations, mu_history));
            }
        }
    }
}

fn build_result(
    problem: &ConicProblem,
    it: &Iterate,
    status: Status,
    iterations: usize,
    solve_seconds: f64,
    mu_history: Vec<f64>,
) -> SolveResult {
    let raw = PrimalDualPoint { x: it.x.clone(), y: it.y.clone(), z: it.z.clone(), s: it.s.clone() };
    let point = match status {
        Status::PrimalInfeasible => {
            let scale = -problem.b().dot(&it.y) - problem.h().dot(&it.z);
            raw.scaled(1.0 / scale)
        }
        Status::DualInfeasible => raw.scaled(1.0 / -problem.c().dot(&it.x)),
        _ => raw.scaled(1.0 / it.tau),
    };
    let primal_obj = problem.c().dot(&point.x);
    let dual_obj = -problem.b().dot(&point.y) - problem.h().dot(&point.z);
    SolveResult {
        status,
        point,
        tau: it.tau,
        kappa: it.kappa,
        primal_obj,
        dual_obj,
        iterations,
        solve_seconds,
        mu_history,
    }
}

pub(crate) fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}
