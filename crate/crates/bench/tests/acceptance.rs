//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.

use std::time::{Duration, Instant};

use exocone::cones::diagnostics::{oracle_report, perturbed_point};
use exocone::interp::build_interp;
use exocone::model::{classify_certificate, residual_eps, sdim, CertificateKind, DEFAULT_CERT_TOL};
use exocone::{
    ef_cone_dims, extend, make_cone, solve, ConeKind, ConicProblem, EFOptions, SolveOptions, Status,
};
use exocone_bench::families::{
    gen_expdesign, gen_matcompletion, gen_matregression, gen_polymin, gen_portfolio, PolyMinInstance,
    REFERENCE_SEEDS,
};
use exocone_bench::run::ef_options;
use exocone_bench::{run_matrix, Family, Form, InstanceSpec, RunOptions, RunRecord, Variant};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn report(criterion: u32, failures: &[String], elapsed: Duration, limit: Duration) {
    let slow = elapsed > limit;
    let ok = failures.is_empty() && !slow;
    println!(
        "criterion {criterion}: {} ({} failures, {:.1}s of {}s)",
        if ok { "PASS" } else { "FAIL" },
        failures.len(),
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    for f in failures.iter().take(20) {
        println!("  {f}");
    }
    assert!(!slow, "criterion {criterion} exceeded its time budget");
    assert!(failures.is_empty(), "criterion {criterion}: {} failures", failures.len());
}

fn dims(p: &ConicProblem) -> [usize; 4] {
    [p.nu().round() as usize, p.n(), p.p(), p.q()]
}

/// Reference sizes `(q, nu, q_ef, nu_ef, n_ef, p_ef)` of the exponential-
/// cone extended formulations.
fn reference_sizes(kind: &ConeKind) -> [usize; 6] {
    match *kind {
        ConeKind::EpiNormInf { d } => [1 + d, 1 + d, 2 * d, 2 * d, 0, 0],
        ConeKind::EpiNormInfDual { d } => [1 + d, 1 + d, 1 + 2 * d, 1 + 2 * d, 2 * d, d],
        ConeKind::EpiNormSpectral { r, s } => [1 + r * s, 1 + r, sdim(r + s), r + s, 0, 0],
        ConeKind::EpiNormSpectralDual { r, s } => {
            [1 + r * s, 1 + r, 1 + sdim(r + s), 1 + r + s, sdim(r) + sdim(s), 0]
        }
        ConeKind::HypoGeomean { d } => [1 + d, 1 + d, 2 + 3 * d, 2 + 3 * d, 1 + d, 0],
        ConeKind::HypoRootDet { side: d } => {
            [1 + sdim(d), 1 + d, 2 + 3 * d + sdim(2 * d), 2 + 5 * d, 1 + d + sdim(d), 0]
        }
        ConeKind::HypoPerLog { d } => [2 + d, 2 + d, 1 + 3 * d, 1 + 3 * d, d, 0],
        ConeKind::HypoPerLogDet { side: d } => {
            [2 + sdim(d), 2 + d, 1 + 3 * d + sdim(2 * d), 1 + 5 * d, 1 + d + sdim(d), 0]
        }
        ConeKind::Wsos { ref p } => {
            let t: Vec<usize> = p.0.iter().map(|m| m.ncols()).collect();
            let q: usize = t.iter().map(|&v| sdim(v)).sum();
            let d = p.num_points();
            [d, t.iter().sum(), q, t.iter().sum(), q, d]
        }
        ConeKind::WsosDual { ref p } => {
            let s: Vec<usize> = p.0.iter().map(|m| m.ncols()).collect();
            let d = p.num_points();
            [d, s.iter().sum(), s.iter().map(|&v| sdim(v)).sum(), s.iter().sum(), 0, 0]
        }
        _ => unreachable!("not an exotic cone"),
    }
}

fn table_kinds() -> Vec<ConeKind> {
    let mut kinds = Vec::new();
    for d in 2..=8 {
        kinds.push(ConeKind::EpiNormInf { d });
        kinds.push(ConeKind::EpiNormInfDual { d });
        kinds.push(ConeKind::HypoGeomean { d });
        kinds.push(ConeKind::HypoRootDet { side: d });
        kinds.push(ConeKind::HypoPerLog { d });
        kinds.push(ConeKind::HypoPerLogDet { side: d });
        for s in 2..=8 {
            kinds.push(ConeKind::EpiNormSpectral { r: d.min(s), s: d.max(s) });
            kinds.push(ConeKind::EpiNormSpectralDual { r: d.min(s), s: d.max(s) });
        }
    }
    for m in 1..=2 {
        for k in 1..=3 {
            let ip = build_interp(m, k).unwrap();
            kinds.push(ip.wsos_kind());
            kinds.push(ip.wsos_dual_kind());
        }
    }
    kinds
}

fn membership_problem(kind: ConeKind) -> ConicProblem {
    let c = make_cone(kind).unwrap();
    let q = c.dim();
    ConicProblem::new(
        DVector::zeros(q),
        DMatrix::zeros(0, q),
        DVector::zeros(0),
        -DMatrix::identity(q, q),
        DVector::zeros(q),
        vec![c],
    )
    .unwrap()
}

#[test]
fn criterion_1_extended_formulation_sizes() {
    let start = Instant::now();
    let opts = EFOptions::exp();
    let mut failures = Vec::new();
    for kind in table_kinds() {
        let want = reference_sizes(&kind);
        let nf = membership_problem(kind.clone());
        let (ef, _) = extend(&nf, &opts).unwrap();
        let (q, nu) = (nf.q(), nf.nu().round() as usize);
        let built = [q, nu, ef.q(), ef.nu().round() as usize, ef.n() - nf.n(), ef.p() - nf.p()];
        let (q_ef, nu_ef, n_ef, p_ef) = ef_cone_dims(&kind, &opts).unwrap();
        let predicted = [q, nu, q_ef, nu_ef, n_ef, p_ef];
        if built != want || predicted != want {
            failures.push(format!("{kind:?}: reference {want:?}, extend {built:?}, ef_cone_dims {predicted:?}"));
        }
    }
    report(1, &failures, start.elapsed(), Duration::from_secs(10));
}

fn check_dims(failures: &mut Vec<String>, what: &str, got: [usize; 4], want: [Option<usize>; 4]) {
    let ok = got.iter().zip(&want).all(|(g, w)| w.is_none_or(|w| *g == w));
    if !ok {
        failures.push(format!("{what}: built (nu, n, p, q) = {got:?}, expected {want:?}"));
    }
}

fn ef(family: Family, form: Form, p: &ConicProblem) -> ConicProblem {
    extend(p, &ef_options(family, form).unwrap()).unwrap().0
}

#[test]
fn criterion_2_benchmark_sizes() {
    let start = Instant::now();
    let mut f = Vec::new();
    let k = 1000;
    let port = gen_portfolio(k, 0).unwrap();
    check_dims(&mut f, "portfolio nf", dims(&port), [Some(2 * k + 2), Some(k), Some(k / 2 + 1), Some(2 * k + 2)]);
    let port_ef = ef(Family::Portfolio, Form::EfExp, &port);
    check_dims(&mut f, "portfolio ef", dims(&port_ef), [Some(4 * k + 1), Some(2 * k), Some(k / 2 + 1), Some(4 * k + 1)]);

    let [(k5, m5, s5, p5), (k10, m10, s10, p10)] = REFERENCE_SEEDS;
    let mc = gen_matcompletion(k5, m5, s5).unwrap();
    check_dims(&mut f, "matcompletion k=5", dims(&mc), [Some(57), Some(251), Some(p5), Some(302)]);
    check_dims(&mut f, "matcompletion k=5 ef-exp", dims(&ef(Family::MatCompletion, Form::EfExp, &mc)), [
        None,
        Some(302),
        None,
        Some(1692),
    ]);
    check_dims(&mut f, "matcompletion k=5 ef-sec", dims(&ef(Family::MatCompletion, Form::EfSec, &mc)), [
        Some(182),
        Some(314),
        None,
        Some(1730),
    ]);
    let mc = gen_matcompletion(k10, m10, s10).unwrap();
    check_dims(&mut f, "matcompletion k=10", dims(&mc), [Some(218), Some(1001), Some(p10), Some(1208)]);
    if (p5, p10) != (200, 794) {
        f.push(format!("reference pattern counts {p5}, {p10}"));
    }

    let reg = gen_matregression(50, 15, 0).unwrap();
    check_dims(&mut f, "matregression nf", dims(&reg), [None, None, None, Some(977)]);
    check_dims(&mut f, "matregression ef", dims(&ef(Family::MatRegression, Form::EfExp, &reg)), [
        None,
        Some(1622),
        None,
        Some(2372),
    ]);

    let ed = gen_expdesign(50, Variant::Log, 0).unwrap();
    check_dims(&mut f, "expdesign log nf", dims(&ed), [None, None, None, Some(1378)]);
    check_dims(&mut f, "expdesign log ef", dims(&ef(Family::ExpDesign, Form::EfExp, &ed)), [
        None,
        Some(1426),
        None,
        Some(5401),
    ]);

    for (m, k, nu, n, q_ef) in [(1, 100, 201, 201, 10201), (3, 6, 252, 455, 8358)] {
        let pm = gen_polymin(m, k, 0).unwrap();
        check_dims(&mut f, &format!("polymin m={m} k={k}"), dims(&pm), [Some(nu), Some(n), Some(1), Some(n)]);
        check_dims(&mut f, &format!("polymin m={m} k={k} ef"), dims(&ef(Family::PolyMin, Form::EfExp, &pm)), [
            None,
            None,
            None,
            Some(q_ef),
        ]);
    }
    report(2, &f, start.elapsed(), Duration::from_secs(60));
}

fn catalog() -> Vec<ConeKind> {
    vec![
        ConeKind::Nonneg { d: 4 },
        ConeKind::EpiNorm2 { d: 3 },
        ConeKind::EpiPerSquare { d: 3 },
        ConeKind::PosSemidef { side: 3 },
        ConeKind::EpiNormInf { d: 4 },
        ConeKind::EpiNormInfDual { d: 4 },
        ConeKind::EpiNormSpectral { r: 2, s: 3 },
        ConeKind::EpiNormSpectralDual { r: 2, s: 3 },
        ConeKind::HypoGeomean { d: 4 },
        ConeKind::HypoRootDet { side: 3 },
        ConeKind::HypoPerLog { d: 3 },
        ConeKind::HypoPerLogDet { side: 3 },
        build_interp(1, 2).unwrap().wsos_dual_kind(),
        build_interp(2, 1).unwrap().wsos_kind(),
    ]
}

#[test]
fn criterion_3_barrier_oracles() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = Vec::new();
    for kind in catalog() {
        let cone = make_cone(kind.clone()).unwrap();
        for trial in 0..100 {
            let noise: Vec<f64> = (0..cone.dim()).map(|_| rng.sample(StandardNormal)).collect();
            let spread = rng.random_range(0.05..0.8);
            let scale = f64::exp(rng.random_range(-1.0..1.0));
            let p = perturbed_point(&cone, &noise, spread, scale);
            let r = oracle_report(&cone, p.as_slice()).unwrap();
            let ok = r.grad_homogeneity <= 1e-7
                && r.hess_homogeneity <= 1e-7
                && r.fd_grad <= 1e-5
                && r.fd_hess <= 1e-4
                && r.min_hess_eig > 0.0;
            if !ok {
                failures.push(format!("{} point {trial}: {r:?}", kind.tag()));
            }
        }
    }
    report(3, &failures, start.elapsed(), Duration::from_secs(120));
}

fn single_var(c: f64, g: &[f64], h: &[f64], kind: ConeKind) -> ConicProblem {
    ConicProblem::new(
        DVector::from_vec(vec![c]),
        DMatrix::zeros(0, 1),
        DVector::zeros(0),
        DMatrix::from_column_slice(g.len(), 1, g),
        DVector::from_column_slice(h),
        vec![make_cone(kind).unwrap()],
    )
    .unwrap()
}

#[test]
fn criterion_4_analytic_instances() {
    let start = Instant::now();
    let cases = [
        ("bounded lp", single_var(-1.0, &[1.0], &[1.0], ConeKind::Nonneg { d: 1 }), Some(1.0), Some(-1.0)),
        ("second-order cone", single_var(1.0, &[-1.0, 0.0, 0.0], &[0.0, 3.0, 4.0], ConeKind::EpiNorm2 { d: 2 }), None, Some(5.0)),
        ("geometric mean", single_var(-1.0, &[-1.0, 0.0, 0.0], &[0.0, 2.0, 8.0], ConeKind::HypoGeomean { d: 2 }), None, Some(-4.0)),
        ("infeasible lp", single_var(0.0, &[-1.0, 1.0], &[-1.0, 0.0], ConeKind::Nonneg { d: 2 }), None, None),
    ];
    let mut failures = Vec::new();
    for (name, prob, want_x, want_obj) in cases {
        let t = Instant::now();
        let res = solve(&prob, &SolveOptions::default()).unwrap();
        let secs = t.elapsed().as_secs_f64();
        let sound = match want_obj {
            Some(obj) => {
                res.status == Status::Optimal
                    && residual_eps(&prob, &res.point) <= 1e-5
                    && (res.primal_obj - obj).abs() <= 1e-6
                    && want_x.is_none_or(|x| (res.point.x[0] - x).abs() <= 1e-6)
            }
            None => {
                res.status == Status::PrimalInfeasible
                    && classify_certificate(&prob, &res.point, DEFAULT_CERT_TOL)
                        .is_ok_and(|c| c.kind == CertificateKind::PrimalInfeasible)
            }
        };
        if !sound || res.iterations >= 50 || secs >= 1.0 {
            failures.push(format!("{name}: {:?} in {} iterations, {secs:.3}s, obj {}", res.status, res.iterations, res.primal_obj));
        }
    }
    report(4, &failures, start.elapsed(), Duration::from_secs(4));
}

fn grid_specs() -> Vec<InstanceSpec> {
    let mut cells: Vec<(Family, usize, usize, Variant)> = Vec::new();
    for k in [4, 16, 64] {
        cells.push((Family::Portfolio, k, 0, Variant::Rt));
    }
    for k in [2, 3] {
        cells.push((Family::MatCompletion, k, 10, Variant::Rt));
    }
    for k in [15, 20] {
        cells.push((Family::MatRegression, k, 15, Variant::Rt));
    }
    for variant in [Variant::Rt, Variant::Log] {
        for k in [3, 5, 8] {
            cells.push((Family::ExpDesign, k, 0, variant));
        }
    }
    for (m, k) in [(1, 2), (1, 5), (2, 2), (2, 3)] {
        cells.push((Family::PolyMin, k, m, Variant::Rt));
    }
    let mut specs = Vec::new();
    for (family, k, m, variant) in cells {
        for form in Form::ALL {
            specs.push(InstanceSpec::new(family, k, m, 0, form).with_variant(variant));
        }
    }
    specs
}

fn label(r: &RunRecord) -> String {
    let s = &r.spec;
    format!("{} k={} m={} {} {}", s.family, s.k, s.m, s.variant.name(), s.form)
}

#[test]
fn criterion_5_natural_and_extended_objectives_agree() {
    let start = Instant::now();
    let records = run_matrix(&grid_specs(), &RunOptions::default());
    let mut failures = Vec::new();
    for r in &records {
        println!(
            "  {:<40} {} conv={} iters={:?} eps={:.2e} eps_tilde={:?} t={:.2}s",
            label(r),
            r.status_code(),
            r.converged,
            r.iterations,
            r.eps.unwrap_or(f64::NAN),
            r.eps_tilde,
            r.solve_seconds.unwrap_or(f64::NAN)
        );
    }
    for chunk in records.chunks(3) {
        let [nf, exp, sec] = chunk else { unreachable!() };
        if let Some(et) = exp.eps_tilde.filter(|&et| et >= 1e-5) {
            failures.push(format!("{}: eps_tilde {et:.2e}", label(exp)));
        }
        if exp.is_optimal() && sec.is_optimal() {
            let d = exocone::model::objective_rel_diff(exp.primal_obj.unwrap(), sec.primal_obj.unwrap());
            if d >= 1e-5 {
                failures.push(format!("{} vs ef-sec: {d:.2e}", label(exp)));
            }
        }
        if nf.is_optimal() && exp.is_optimal() && exp.eps_tilde.is_none() {
            failures.push(format!("{}: converged pair without eps_tilde", label(exp)));
        }
    }
    let unconverged = records.iter().filter(|r| !r.converged).count();
    println!("  {unconverged} of {} records did not converge", records.len());
    report(5, &failures, start.elapsed(), Duration::from_secs(20 * 60));
}

#[test]
fn criterion_6_polynomial_lower_bounds_are_tight() {
    let start = Instant::now();
    let grid: Vec<Vec<f64>> = (0..100_000).map(|i| vec![-1.0 + 2.0 * i as f64 / 99_999.0]).collect();
    let mut failures = Vec::new();
    for seed in 0..20u64 {
        let k = 1 + (seed as usize % 5);
        let inst = PolyMinInstance::random(1, k, seed).unwrap();
        let res = solve(&inst.problem().unwrap(), &SolveOptions::default()).unwrap();
        let min = inst.evaluate(&grid).unwrap().into_iter().fold(f64::INFINITY, f64::min);
        let value = res.primal_obj;
        if res.status != Status::Optimal || value > min + 1e-6 || (value - min).abs() > 1e-4 {
            failures.push(format!("seed {seed} k={k}: {:?} value {value:.8} grid minimum {min:.8}", res.status));
        }
    }
    report(6, &failures, start.elapsed(), Duration::from_secs(120));
}

#[test]
fn criterion_7_design_variants_share_optimal_trials() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for k in [3, 5] {
        let mut mus = Vec::new();
        for variant in [Variant::Rt, Variant::Log] {
            let res = solve(&gen_expdesign(k, variant, 0).unwrap(), &SolveOptions::default()).unwrap();
            if res.status != Status::Optimal {
                failures.push(format!("k={k} {}: {:?}", variant.name(), res.status));
            }
            mus.push(res.point.x.rows(1, 2 * k).into_owned());
        }
        let diff = (&mus[0] - &mus[1]).amax();
        println!("  k={k}: max |mu_rt - mu_log| = {diff:.2e}");
        if diff > 1e-4 {
            failures.push(format!("k={k}: trial allocations differ by {diff:.2e}"));
        }
    }
    report(7, &failures, start.elapsed(), Duration::from_secs(120));
}
