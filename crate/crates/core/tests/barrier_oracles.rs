mod common;

use common::{cone, random_point, sized_kind, small_catalog};
use exocone::cones::diagnostics::oracle_report;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn catalog_identities_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for kind in small_catalog() {
        let c = cone(kind.clone());
        assert!(c.in_interior(c.initial_point().as_slice()), "{}", kind.tag());
        for _ in 0..20 {
            let p = random_point(&c, &mut rng);
            let r = oracle_report(&c, p.as_slice()).unwrap();
            let tag = kind.tag();
            assert!(r.grad_homogeneity <= 1e-7, "{tag} {r:?}");
            assert!(r.hess_homogeneity <= 1e-7, "{tag} {r:?}");
            assert!(r.scaling <= 1e-8, "{tag} {r:?}");
            assert!(r.fd_grad <= 1e-5, "{tag} {r:?}");
            assert!(r.fd_hess <= 1e-4, "{tag} {r:?}");
            assert!(r.min_hess_eig > 0.0, "{tag} {r:?}");
            assert!(r.neg_grad_in_dual, "{tag} {r:?}");
        }
    }
}

#[test]
fn boundary_points_are_not_interior() {
    let c = cone(exocone::ConeKind::EpiNorm2 { d: 2 });
    assert!(!c.in_interior(&[5.0, 3.0, 4.0]));
    let c = cone(exocone::ConeKind::HypoGeomean { d: 2 });
    assert!(!c.in_interior(&[4.0, 2.0, 8.0]));
    assert!(c.in_interior(&[3.99, 2.0, 8.0]));
    let c = cone(exocone::ConeKind::EpiNormSpectral { r: 1, s: 2 });
    assert!(!c.in_interior(&[5.0, 3.0, 4.0]));
    let c = cone(exocone::ConeKind::EpiNormSpectralDual { r: 2, s: 2 });
    assert!(!c.in_interior(&[2.0, 1.0, 0.0, 0.0, 1.0]));
    assert!(c.in_interior(&[2.01, 1.0, 0.0, 0.0, 1.0]));
    let c = cone(exocone::ConeKind::HypoPerLog { d: 2 });
    assert!(!c.in_interior(&[0.0, 1.0, 1.0, 1.0]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn barrier_identities_hold(idx in 0usize..14, n in 1usize..7, seed in any::<u64>()) {
        let c = cone(sized_kind(idx, n));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_point(&c, &mut rng);
        prop_assert!(c.in_barrier_domain(p.as_slice()));
        let r = oracle_report(&c, p.as_slice()).unwrap();
        prop_assert!(r.grad_homogeneity <= 1e-7, "{:?}", r);
        prop_assert!(r.hess_homogeneity <= 1e-7, "{:?}", r);
        prop_assert!(r.scaling <= 1e-8, "{:?}", r);
        prop_assert!(r.fd_grad <= 1e-5, "{:?}", r);
        prop_assert!(r.fd_hess <= 1e-4, "{:?}", r);
        prop_assert!(r.min_hess_eig > 0.0, "{:?}", r);
        prop_assert!(r.neg_grad_in_dual, "{:?}", r);
    }

    #[test]
    fn interior_scales_onto_boundary(idx in 0usize..12, n in 1usize..6, seed in any::<u64>()) {
        // the non-WSOS kinds are pointed, so -p is outside the domain
        let c = cone(sized_kind(idx, n));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_point(&c, &mut rng);
        let neg: Vec<f64> = p.iter().map(|v| -v).collect();
        prop_assert!(!c.in_barrier_domain(&neg));
    }
}
