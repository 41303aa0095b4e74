use std::sync::LazyLock;

use proptest::prelude::*;
use qlinset::criteria::{check_e_relations, power_sums_all_equal};
use qlinset::imageset::{image_of_ratio, images_equal, power_sum};
use qlinset::linset::{linear_set, pgammal_equivalent};
use qlinset::moebius::{
    find_set_equivalence, is_admissible, moebius_image, transform_poly, SemilinearMap,
};
use qlinset::{FieldCtx, FieldElem, QPoly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

static FIELDS: LazyLock<Vec<FieldCtx>> = LazyLock::new(|| {
    [
        (2, 1, 3),
        (2, 1, 4),
        (2, 1, 5),
        (3, 1, 3),
        (3, 1, 5),
        (2, 2, 3),
        (2, 2, 5),
        (5, 1, 2),
    ]
    .into_iter()
    .map(|(p, h, n)| FieldCtx::new(p, h, n).unwrap())
    .collect()
});

static Q3N5: LazyLock<FieldCtx> = LazyLock::new(|| FieldCtx::new(3, 1, 5).unwrap());
static Q2N5: LazyLock<FieldCtx> = LazyLock::new(|| FieldCtx::new(2, 1, 5).unwrap());

fn elem(ctx: &FieldCtx, raw: u32) -> FieldElem {
    FieldElem::from_raw(raw % ctx.order() as u32)
}

fn nonzero(ctx: &FieldCtx, raw: u32) -> FieldElem {
    FieldElem::from_raw(1 + raw % (ctx.order() as u32 - 1))
}

fn poly<'f>(ctx: &'f FieldCtx, raw: &[u32]) -> QPoly<'f> {
    QPoly::new(ctx, raw[..ctx.n()].iter().map(|&r| elem(ctx, r)).collect()).unwrap()
}

fn field() -> impl Strategy<Value = &'static FieldCtx> {
    (0..FIELDS.len()).prop_map(|i| &FIELDS[i])
}

fn raw() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(any::<u32>(), 5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn frobenius_is_a_ring_automorphism(ctx in field(), a in any::<u32>(), b in any::<u32>(), e in 0usize..10) {
        let (a, b) = (elem(ctx, a), elem(ctx, b));
        prop_assert_eq!(ctx.frobenius(ctx.add(a, b), e), ctx.add(ctx.frobenius(a, e), ctx.frobenius(b, e)));
        prop_assert_eq!(ctx.frobenius(ctx.mul(a, b), e), ctx.mul(ctx.frobenius(a, e), ctx.frobenius(b, e)));
    }

    #[test]
    fn relative_trace_and_norm_are_orbit_sum_and_product(ctx in field(), x in any::<u32>()) {
        let x = elem(ctx, x);
        let n = ctx.n();
        for s in (1..=n).filter(|s| n % s == 0) {
            let orbit: Vec<FieldElem> = (0..n / s).map(|k| ctx.frob_q(x, s * k)).collect();
            prop_assert_eq!(ctx.trace_rel(x, s).unwrap(), ctx.sum(orbit.iter().copied()));
            prop_assert_eq!(ctx.norm_rel(x, s).unwrap(), ctx.product(orbit.iter().copied()));
            prop_assert!(ctx.in_subfield(ctx.trace_rel(x, s).unwrap(), s));
        }
    }

    #[test]
    fn adjoint_is_an_involution_reversing_composition(ctx in field(), a in raw(), b in raw()) {
        let (f, g) = (poly(ctx, &a), poly(ctx, &b));
        prop_assert_eq!(f.adjoint().adjoint(), f.clone());
        prop_assert_eq!(f.compose(&g).adjoint(), g.adjoint().compose(&f.adjoint()));
    }

    #[test]
    fn composition_is_associative_and_matches_evaluation(ctx in field(), a in raw(), b in raw(), c in raw(), x in any::<u32>()) {
        let (f, g, h) = (poly(ctx, &a), poly(ctx, &b), poly(ctx, &c));
        prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
        let x = elem(ctx, x);
        prop_assert_eq!(f.compose(&g).eval(x), f.eval(g.eval(x)));
    }

    #[test]
    fn bilinear_identity(ctx in field(), a in raw(), x in any::<u32>(), y in any::<u32>()) {
        let f = poly(ctx, &a);
        let (x, y) = (elem(ctx, x), elem(ctx, y));
        prop_assert_eq!(ctx.trace(ctx.mul(x, f.eval(y))), ctx.trace(ctx.mul(y, f.adjoint().eval(x))));
    }

    #[test]
    fn inverse_inverts_the_map(ctx in field(), a in raw(), x in any::<u32>()) {
        let f = poly(ctx, &a);
        let x = elem(ctx, x);
        match f.inverse() {
            Ok(g) => {
                prop_assert!(f.is_invertible());
                prop_assert_eq!(f.eval(g.eval(x)), x);
                prop_assert_eq!(g.compose(&f), QPoly::identity(ctx));
            }
            Err(_) => prop_assert!(f.kernel_dim() > 0),
        }
    }

    #[test]
    fn conjugates_and_adjoint_share_the_image(ctx in field(), a in raw(), l in any::<u32>()) {
        let f = poly(ctx, &a);
        let lambda = nonzero(ctx, l);
        let im = image_of_ratio(&f);
        prop_assert!(im == image_of_ratio(&f.adjoint()));
        prop_assert!(im == image_of_ratio(&f.scale_conjugate(lambda).unwrap()));
        prop_assert!(im == image_of_ratio(&f.adjoint().scale_conjugate(lambda).unwrap()));
    }

    #[test]
    fn equal_images_force_equal_power_sums(ctx in field(), a in raw(), l in any::<u32>(), d in any::<u64>()) {
        let f = poly(ctx, &a);
        let g = f.adjoint().scale_conjugate(nonzero(ctx, l)).unwrap();
        let d = 1 + d % (ctx.order() - 1);
        prop_assert_eq!(power_sum(&f, d).unwrap(), power_sum(&g, d).unwrap());
        prop_assert!(power_sums_all_equal(&f, &g));
    }

    #[test]
    fn semilinear_maps_form_a_group(ctx in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (SemilinearMap::random(ctx, &mut rng), SemilinearMap::random(ctx, &mut rng));
        let v = (ctx.random(&mut rng), ctx.random(&mut rng));
        prop_assert_eq!(b.compose(ctx, &a).apply_vec(ctx, v), b.apply_vec(ctx, a.apply_vec(ctx, v)));
        prop_assert_eq!(a.inverse(ctx).apply_vec(ctx, a.apply_vec(ctx, v)), v);
        prop_assert_eq!(SemilinearMap::parse(ctx, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn transport_preserves_image_size_and_matches_moebius_image(ctx in field(), a in raw(), seed in any::<u64>()) {
        let f = poly(ctx, &a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = SemilinearMap::random_admissible(&f, &mut rng);
        prop_assert!(is_admissible(&f, &phi));
        let fp = transform_poly(&f, &phi).unwrap();
        let im = image_of_ratio(&f);
        let moved = moebius_image(&im, &phi);
        prop_assert!(!moved.has_inf);
        prop_assert_eq!(image_of_ratio(&fp).len(), im.len());
        prop_assert!(moved.finite == image_of_ratio(&fp));
    }

    #[test]
    fn equal_images_stay_equal_under_transport(ctx in field(), a in raw(), l in any::<u32>(), seed in any::<u64>()) {
        let f = poly(ctx, &a);
        let g = f.adjoint().scale_conjugate(nonzero(ctx, l)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = SemilinearMap::random_admissible(&f, &mut rng);
        prop_assert!(images_equal(&transform_poly(&f, &phi).unwrap(), &transform_poly(&g, &phi).unwrap()));
    }

    #[test]
    fn group_action_composes(ctx in field(), a in raw(), seed in any::<u64>()) {
        let f = poly(ctx, &a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p1 = SemilinearMap::random_admissible(&f, &mut rng);
        let f1 = transform_poly(&f, &p1).unwrap();
        let p2 = SemilinearMap::random_admissible(&f1, &mut rng);
        prop_assert_eq!(transform_poly(&f1, &p2).unwrap(), transform_poly(&f, &p2.compose(ctx, &p1)).unwrap());
    }

    #[test]
    fn scalar_matrices_fix_every_image(ctx in field(), a in raw(), l in any::<u32>()) {
        let f = poly(ctx, &a);
        let lambda = nonzero(ctx, l);
        let phi = SemilinearMap::new(ctx, [[lambda, FieldElem::ZERO], [FieldElem::ZERO, lambda]], 0).unwrap();
        let im = image_of_ratio(&f);
        let moved = moebius_image(&im, &phi);
        prop_assert!(!moved.has_inf && moved.finite == im);
    }

    #[test]
    fn linear_set_size_and_invariance(ctx in field(), a in raw(), l in any::<u32>()) {
        let f = poly(ctx, &a);
        prop_assume!(!f.is_zero());
        let lf = linear_set(&f);
        prop_assert_eq!(lf.len(), image_of_ratio(&f).len());
        let lambda = nonzero(ctx, l);
        prop_assert!(lf == linear_set(&f.adjoint()));
        prop_assert!(lf == linear_set(&f.scale_conjugate(lambda).unwrap()));
    }

    #[test]
    fn polynomial_text_round_trips(ctx in field(), a in raw()) {
        let f = poly(ctx, &a);
        prop_assert_eq!(QPoly::parse(ctx, &f.to_string()).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn same_image_pairs_share_field_of_linearity(seed in any::<u64>()) {
        let ctx = &FIELDS[6];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = [1usize, 5][(seed % 2) as usize];
        let f = loop {
            let c = (0..5).map(|i| if i % s == 0 { ctx.random(&mut rng) } else { FieldElem::ZERO }).collect();
            let f = QPoly::new(ctx, c).unwrap();
            if !f.is_zero() { break f; }
        };
        let phi = SemilinearMap::random_admissible(&f, &mut rng);
        let lambda = ctx.random_nonzero(&mut rng);
        let g = f.adjoint().scale_conjugate(lambda).unwrap();
        let (fp, gp) = (transform_poly(&f, &phi).unwrap(), transform_poly(&g, &phi).unwrap());
        prop_assert!(images_equal(&fp, &gp));
        prop_assert_eq!(fp.max_field_of_linearity().unwrap(), gp.max_field_of_linearity().unwrap());
        prop_assert_eq!(f.max_field_of_linearity().unwrap(), g.max_field_of_linearity().unwrap());
    }

    #[test]
    fn e_relations_hold_for_conjugate_pairs(a in raw(), l in any::<u32>(), adj in any::<bool>()) {
        let ctx = &*Q3N5;
        let f = poly(ctx, &a);
        let lambda = nonzero(ctx, l);
        let base = if adj { f.adjoint() } else { f.clone() };
        let g = base.scale_conjugate(lambda).unwrap();
        let report = check_e_relations(&f, &g).unwrap();
        prop_assert!(report.all_hold(), "failing {:?}", report.failures());
    }

    #[test]
    fn set_search_recovers_transported_images(a in raw(), seed in any::<u64>()) {
        let ctx = &*Q2N5;
        let f = poly(ctx, &a);
        prop_assume!(f.is_strictly_fq_linear());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = SemilinearMap::random_admissible(&f, &mut rng);
        let g = transform_poly(&f, &phi).unwrap();
        let found = find_set_equivalence(&image_of_ratio(&f), &image_of_ratio(&g)).unwrap();
        let psi = found.expect("an equivalence exists");
        prop_assert!(image_of_ratio(&transform_poly(&f, &psi).unwrap()) == image_of_ratio(&g));
        prop_assert!(pgammal_equivalent(&f, &g).unwrap().is_some());
    }
}
