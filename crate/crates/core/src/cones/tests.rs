use super::*;
use crate::model::svec_upper;

fn cone(kind: ConeKind) -> Cone {
    make_cone(kind).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn table_dims_and_nu() {
    let c = cone(ConeKind::EpiNormInf { d: 5 });
    assert_eq!((c.dim(), c.nu()), (6, 6.0));
    let c = cone(ConeKind::EpiNormSpectral { r: 2, s: 3 });
    assert_eq!((c.dim(), c.nu()), (7, 3.0));
    let c = cone(ConeKind::HypoRootDet { side: 3 });
    assert_eq!((c.dim(), c.nu()), (7, 4.0));
    let c = cone(ConeKind::HypoPerLogDet { side: 3 });
    assert_eq!((c.dim(), c.nu()), (8, 5.0));
    let p = InterpMatrices(vec![DMatrix::from_element(5, 3, 1.0), DMatrix::from_element(5, 2, 1.0)]);
    let c = cone(ConeKind::WsosDual { p });
    assert_eq!((c.dim(), c.nu()), (5, 5.0));
}

#[test]
fn invalid_params() {
    assert!(make_cone(ConeKind::EpiNormSpectral { r: 3, s: 2 }).is_err());
    assert!(make_cone(ConeKind::Nonneg { d: 0 }).is_err());
    assert!(make_cone(ConeKind::Wsos { p: InterpMatrices(vec![]) }).is_err());
    let wide = InterpMatrices(vec![DMatrix::from_element(2, 3, 1.0)]);
    assert!(make_cone(ConeKind::WsosDual { p: wide }).is_err());
}

#[test]
fn initial_points() {
    assert_eq!(cone(ConeKind::Nonneg { d: 3 }).initial_point().as_slice(), &[1.0, 1.0, 1.0]);
    assert_eq!(cone(ConeKind::EpiNorm2 { d: 2 }).initial_point().as_slice(), &[1.0, 0.0, 0.0]);
    let g = cone(ConeKind::HypoGeomean { d: 4 });
    assert!(g.in_interior(g.initial_point().as_slice()));
    // dual-flagged: -grad of the l-inf barrier at (1, 0)
    let l1 = cone(ConeKind::EpiNormInfDual { d: 3 });
    let t = l1.initial_point();
    assert!(close(t[0], 4.0, 1e-14) && t.iter().skip(1).all(|v| *v == 0.0));
    assert!(l1.in_interior(t.as_slice()));
}

#[test]
fn interior_examples() {
    let c = cone(ConeKind::EpiNormInf { d: 2 });
    assert!(c.in_interior(&[1.0, 0.5, -0.5]));
    assert!(!c.in_interior(&[1.0, 1.0, 0.0]));
    assert!(c.in_dual_interior(&[1.0, 0.4, 0.4]));
    assert!(!c.in_dual_interior(&[1.0, 0.5, 0.5]));
    let l1 = cone(ConeKind::EpiNormInfDual { d: 2 });
    assert!(l1.in_interior(&[1.0, 0.4, 0.4]));
    assert!(!l1.in_interior(&[1.0, 0.5, 0.6]));
    assert!(l1.in_dual_interior(&[1.0, 0.9, -0.9]));

    let rt = cone(ConeKind::HypoRootDet { side: 2 });
    let mut s = vec![0.5];
    s.extend(svec_upper(&DMatrix::identity(2, 2)));
    assert!(rt.in_interior(&s));

    let lg = cone(ConeKind::HypoPerLog { d: 2 });
    assert!(lg.in_interior(&[-3.0, 1.0, 1.0, 1.0]));
    assert!(!lg.in_interior(&[0.1, 1.0, 1.0, 1.0]));
    assert!(cone(ConeKind::Nonneg { d: 1 }).in_dual_interior(&[1.0]));
}

#[test]
fn gradient_examples() {
    let c = cone(ConeKind::Nonneg { d: 1 });
    assert_eq!(c.barrier_grad(&[2.0]).unwrap().as_slice(), &[-0.5]);
    assert_eq!(c.barrier_hess(&[2.0]).unwrap()[(0, 0)], 0.25);
    let c = cone(ConeKind::EpiNorm2 { d: 2 });
    let g = c.barrier_grad(&[1.0, 0.0, 0.0]).unwrap();
    assert_eq!(g.as_slice(), &[-2.0, 0.0, 0.0]);
    for d in 1..6 {
        let c = cone(ConeKind::EpiNormInf { d });
        let mut s = vec![0.0; 1 + d];
        s[0] = 1.0;
        let g = c.barrier_grad(&s).unwrap();
        assert!(close(g[0], -((d + 1) as f64), 1e-12));
    }
    assert!(matches!(c.barrier_grad(&[0.0, 1.0, 0.0]), Err(ConeError::NotInterior)));
    assert!(matches!(c.barrier_grad(&[1.0]), Err(ConeError::DimensionMismatch { .. })));
}

#[test]
fn psd_hessian_at_identity() {
    let c = cone(ConeKind::PosSemidef { side: 2 });
    let h = c.barrier_hess(&[1.0, 0.0, 1.0]).unwrap();
    assert!((h - DMatrix::identity(3, 3)).amax() < 1e-14);
}

#[test]
fn wsos_membership_in_one_dimension() {
    // P = [1 x] at points -1, 0, 1: dual-cone interior means the 2x2 moment
    // matrix is PD; primal interior means a strictly positive SOS of degree 2.
    let pts = [-1.0, 0.0, 1.0];
    let p = DMatrix::from_fn(3, 2, |i, j| if j == 0 { 1.0 } else { pts[i] });
    let ws = cone(ConeKind::Wsos { p: InterpMatrices(vec![p.clone()]) });
    assert!(ws.uses_dual_barrier());
    // x^2 + 0.1 at the points
    assert!(ws.in_interior(&[1.1, 0.1, 1.1]));
    // x^2 touches zero
    assert!(!ws.in_interior(&[1.0, 0.0, 1.0]));
    assert!(!ws.in_interior(&[1.0, -0.1, 1.0]));
    let wd = cone(ConeKind::WsosDual { p: InterpMatrices(vec![p]) });
    assert!(wd.in_interior(&[1.0, 1.0, 1.0]));
    assert!(!wd.in_interior(&[0.0, 1.0, 0.0]));
    assert!(wd.in_dual_interior(&[1.1, 0.1, 1.1]));
}

#[test]
fn closure_tests() {
    let c = cone(ConeKind::Nonneg { d: 2 });
    assert!(c.in_closure(&[0.0, 1.0], 1e-8));
    assert!(!c.in_closure(&[-1e-3, 1.0], 1e-8));
    let c = cone(ConeKind::EpiNorm2 { d: 2 });
    assert!(c.in_closure(&[5.0, 3.0, 4.0], 1e-8));
    assert!(c.in_dual_closure(&[5.0, -3.0, 4.0], 1e-8));
    assert!(!c.in_closure(&[4.99, 3.0, 4.0], 1e-8));
}

#[test]
fn serde_round_trip() {
    let kinds = vec![
        ConeKind::Nonneg { d: 3 },
        ConeKind::EpiNormSpectral { r: 2, s: 3 },
        ConeKind::WsosDual { p: InterpMatrices(vec![DMatrix::from_row_slice(2, 1, &[1.0, 2.0])]) },
    ];
    let text = serde_json::to_string(&kinds).unwrap();
    assert!(text.contains(r#""kind":"EpiNormSpectral","r":2,"s":3"#));
    assert!(text.contains(r#""P":[[[1.0],[2.0]]]"#));
    let back: Vec<ConeKind> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, kinds);
}
