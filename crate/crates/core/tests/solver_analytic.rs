use exocone::model::{classify_certificate, residual_eps, CertificateKind, DEFAULT_CERT_TOL};
use exocone::{make_cone, solve, ConeKind, ConicProblem, SolveOptions, Status};
use nalgebra::{DMatrix, DVector};

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

fn check_optimal(prob: &ConicProblem, want_x: f64) {
    let res = solve(prob, &SolveOptions::default()).unwrap();
    println!("status {:?} iters {} x {:?} mu {:?}", res.status, res.iterations, res.point.x, res.mu_history.last());
    assert_eq!(res.status, Status::Optimal);
    assert!((res.point.x[0] - want_x).abs() < 1e-6, "x = {}", res.point.x[0]);
    assert!(residual_eps(prob, &res.point) <= 1e-5);
    assert!(res.iterations < 50);
}

#[test]
fn bounded_lp() {
    check_optimal(&single_var(-1.0, &[1.0], &[1.0], ConeKind::Nonneg { d: 1 }), 1.0);
}

#[test]
fn second_order_cone_value() {
    check_optimal(&single_var(1.0, &[-1.0, 0.0, 0.0], &[0.0, 3.0, 4.0], ConeKind::EpiNorm2 { d: 2 }), 5.0);
}

#[test]
fn geomean_value() {
    check_optimal(&single_var(-1.0, &[-1.0, 0.0, 0.0], &[0.0, 2.0, 8.0], ConeKind::HypoGeomean { d: 2 }), 4.0);
}

#[test]
fn infeasible_lp() {
    let prob = single_var(0.0, &[-1.0, 1.0], &[-1.0, 0.0], ConeKind::Nonneg { d: 2 });
    let res = solve(&prob, &SolveOptions::default()).unwrap();
    println!("status {:?} iters {}", res.status, res.iterations);
    assert_eq!(res.status, Status::PrimalInfeasible);
    let cert = classify_certificate(&prob, &res.point, DEFAULT_CERT_TOL).unwrap();
    assert_eq!(cert.kind, CertificateKind::PrimalInfeasible);
    assert!(res.iterations < 50);
}
