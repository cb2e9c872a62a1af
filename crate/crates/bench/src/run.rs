use std::collections::HashMap;

use exocone::model::{objective_rel_diff, residual_eps};
use exocone::{extend, map_back, solve, ConicProblem, EFMapping, EFOptions, L1Mode, PrimalDualPoint, SolveOptions, Status};
use rayon::prelude::*;

use crate::families::{gen_expdesign, gen_matcompletion, gen_matregression, gen_polymin, gen_portfolio};
use crate::{BenchError, Family, Form, InstanceSpec};

/// Records with `eps` below this are flagged as converged.
pub const CONVERGED_EPS: f64 = 1e-5;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub solve: SolveOptions,
}

impl RunOptions {
    pub fn new(tol: f64, time_limit: f64) -> Self {
        let solve = SolveOptions { tol_feas: tol, tol_gap: tol, tol_infeas: tol, time_limit, ..SolveOptions::default() };
        RunOptions { solve }
    }
}

/// The problem to solve for a spec, with the mapping back to the natural
/// formulation when it was extended.
pub struct BuiltProblem {
    pub problem: ConicProblem,
    pub mapping: Option<EFMapping>,
}

/// Options for the extended formulations of a family. Portfolio rewrites
/// its l1 constraint with epigraph variables.
pub fn ef_options(family: Family, form: Form) -> Option<EFOptions> {
    let base = match form {
        Form::Nf => return None,
        Form::EfExp => EFOptions::exp(),
        Form::EfSec => EFOptions::sec(),
    };
    Some(match family {
        Family::Portfolio => base.with_l1(L1Mode::Epigraph),
        _ => base,
    })
}

pub fn build_natural(spec: &InstanceSpec) -> Result<ConicProblem, BenchError> {
    match spec.family {
        Family::Portfolio => gen_portfolio(spec.k, spec.seed),
        Family::MatCompletion => gen_matcompletion(spec.k, spec.m, spec.seed),
        Family::MatRegression => gen_matregression(spec.k, spec.m, spec.seed),
        Family::ExpDesign => gen_expdesign(spec.k, spec.variant, spec.seed),
        Family::PolyMin => gen_polymin(spec.m, spec.k, spec.seed),
    }
}

pub fn build_problem(spec: &InstanceSpec) -> Result<BuiltProblem, BenchError> {
    let natural = build_natural(spec)?;
    match ef_options(spec.family, spec.form) {
        None => Ok(BuiltProblem { problem: natural, mapping: None }),
        Some(opts) => {
            let (problem, mapping) = extend(&natural, &opts)?;
            Ok(BuiltProblem { problem, mapping: Some(mapping) })
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunRecord {
    pub spec: InstanceSpec,
    pub nu: Option<f64>,
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    /// `None` when the problem could not be built.
    pub status: Option<Status>,
    pub converged: bool,
    pub iterations: Option<usize>,
    pub solve_seconds: Option<f64>,
    pub primal_obj: Option<f64>,
    /// Residual of the final point on the formulation that was solved.
    pub eps: Option<f64>,
    /// Relative objective difference to the natural formulation, set on
    /// extended rows whose pair both converged to optimality.
    pub eps_tilde: Option<f64>,
    /// Final point expressed in the natural formulation's variables.
    pub natural_point: Option<PrimalDualPoint>,
    pub error: Option<String>,
}

impl RunRecord {
    fn failed(spec: InstanceSpec, err: BenchError) -> Self {
        RunRecord {
            spec,
            nu: None,
            n: None,
            p: None,
            q: None,
            status: None,
            converged: false,
            iterations: None,
            solve_seconds: None,
            primal_obj: None,
            eps: None,
            eps_tilde: None,
            natural_point: None,
            error: Some(err.to_string()),
        }
    }

    /// Table code: `co`, `tl`, `sp`, `il`, or `er` (also for build failures).
    pub fn status_code(&self) -> &'static str {
        self.status.map_or("er", Status::code)
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Some(Status::Optimal) && self.converged
    }
}

/// Builds and solves one spec. Failures become records with status `er`.
pub fn run_spec(spec: &InstanceSpec, options: &RunOptions) -> RunRecord {
    match try_run(spec, options) {
        Ok(rec) => rec,
        Err(err) => RunRecord::failed(*spec, err),
    }
}

fn try_run(spec: &InstanceSpec, options: &RunOptions) -> Result<RunRecord, BenchError> {
    let built = build_problem(spec)?;
    let problem = &built.problem;
    let result = solve(problem, &options.solve)?;
    let eps = residual_eps(problem, &result.point);
    let natural_point = match &built.mapping {
        None => Some(result.point.clone()),
        Some(mapping) => map_back(mapping, &result.point).ok(),
    };
    Ok(RunRecord {
        spec: *spec,
        nu: Some(problem.nu()),
        n: Some(problem.n()),
        p: Some(problem.p()),
        q: Some(problem.q()),
        status: Some(result.status),
        converged: eps < CONVERGED_EPS,
        iterations: Some(result.iterations),
        solve_seconds: Some(result.solve_seconds),
        primal_obj: Some(result.primal_obj),
        eps: Some(eps),
        eps_tilde: None,
        natural_point,
        error: None,
    })
}

/// Runs every spec (in parallel) and returns records in spec order, with
/// `eps_tilde` filled for extended rows paired with a natural row.
pub fn run_matrix(specs: &[InstanceSpec], options: &RunOptions) -> Vec<RunRecord> {
    let mut records: Vec<RunRecord> = specs.par_iter().map(|s| run_spec(s, options)).collect();
    let natural: HashMap<_, f64> = records
        .iter()
        .filter(|r| r.spec.form == Form::Nf && r.is_optimal())
        .filter_map(|r| Some((r.spec.instance_key(), r.primal_obj?)))
        .collect();
    for rec in records.iter_mut().filter(|r| r.spec.form != Form::Nf && r.is_optimal()) {
        if let (Some(&g1), Some(g2)) = (natural.get(&rec.spec.instance_key()), rec.primal_obj) {
            rec.eps_tilde = Some(objective_rel_diff(g1, g2));
        }
    }
    records
}
