use super::*;
use crate::cones::make_cone;

fn block_problem(kind: ConeKind) -> ConicProblem {
    let cone = make_cone(kind).unwrap();
    let q = cone.dim();
    ConicProblem::new(
        DVector::from_element(q, 1.0),
        DMatrix::zeros(0, q),
        DVector::zeros(0),
        -DMatrix::identity(q, q),
        DVector::zeros(q),
        vec![cone],
    )
    .unwrap()
}

fn added(kind: ConeKind, opts: EFOptions) -> (usize, usize, usize, usize) {
    let prob = block_problem(kind);
    let (ef, _) = extend(&prob, &opts).unwrap();
    (ef.q(), ef.nu() as usize, ef.n() - prob.n(), ef.p() - prob.p())
}

#[test]
fn norm_inf_rows() {
    let (q, nu, n, p) = added(ConeKind::EpiNormInf { d: 5 }, EFOptions::exp());
    assert_eq!((q, nu, n, p), (10, 10, 0, 0));
}

#[test]
fn geomean_and_rootdet_exp_sizes() {
    for d in 2..6 {
        assert_eq!(added(ConeKind::HypoGeomean { d }, EFOptions::exp()), (2 + 3 * d, 2 + 3 * d, 1 + d, 0));
        let rt = added(ConeKind::HypoRootDet { side: d }, EFOptions::exp());
        assert_eq!(rt.2, 1 + d + sdim(d));
        assert_eq!(rt.0, 2 + 3 * d + sdim(2 * d));
    }
}

#[test]
fn standard_problem_unchanged() {
    let prob = block_problem(ConeKind::EpiPerSquare { d: 3 });
    let (ef, map) = extend(&prob, &EFOptions::exp()).unwrap();
    assert_eq!(ef.to_data(), prob.to_data());
    assert!(map.blocks.iter().all(|b| b.tag == RewriteTag::PassThrough));
    let exp = block_problem(ConeKind::HypoPerLog { d: 1 });
    let (ef, _) = extend(&exp, &EFOptions::sec()).unwrap();
    assert_eq!(ef.to_data(), exp.to_data());
}

#[test]
fn identity_map_back() {
    let prob = block_problem(ConeKind::Nonneg { d: 3 });
    let (_, map) = extend(&prob, &EFOptions::exp()).unwrap();
    let pt = PrimalDualPoint {
        x: DVector::from_vec(vec![1.0, 2.0, 3.0]),
        y: DVector::zeros(0),
        z: DVector::from_vec(vec![0.5, 0.25, 0.125]),
        s: DVector::from_vec(vec![1.0, 2.0, 3.0]),
    };
    let back = map_back(&map, &pt).unwrap();
    assert!((back.s - &pt.s).amax() < 1e-12);
    assert_eq!(back.z, pt.z);
    assert_eq!(back.x, pt.x);
}

#[test]
fn norm_inf_map_back_is_member() {
    let prob = block_problem(ConeKind::EpiNormInf { d: 3 });
    let (ef, map) = extend(&prob, &EFOptions::exp()).unwrap();
    let s_ef = DVector::from_vec(vec![0.0, 1.0, 2.0, 3.0, 0.5, 0.0]);
    let pt = PrimalDualPoint {
        x: DVector::zeros(ef.n()),
        y: DVector::zeros(0),
        z: DVector::zeros(ef.q()),
        s: s_ef,
    };
    let back = map_back(&map, &pt).unwrap();
    let u = back.s[0];
    let wmax = back.s.iter().skip(1).fold(0.0_f64, |m, v| m.max(v.abs()));
    assert!(u >= wmax);
    assert!((back.s[1] - 1.5).abs() < 1e-15);
}

#[test]
fn map_back_rejects_wrong_sizes() {
    let prob = block_problem(ConeKind::EpiNormInf { d: 2 });
    let (_, map) = extend(&prob, &EFOptions::exp()).unwrap();
    assert!(matches!(map_back(&map, &PrimalDualPoint::zeros(1, 0, 1)), Err(BridgeError::Mismatch(_))));
}
