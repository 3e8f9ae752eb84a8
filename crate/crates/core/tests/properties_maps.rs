mod common;

use common::{q, random_invertible, random_sl, rng, triangular_map, Q};
use cremona::{
    det_class, sl_decompose, CremonaMap, Derivative, Evaluation, Field, ProjMatrix, ProjPoint,
};
use proptest::prelude::*;
use rand::Rng;

fn origin(n: usize) -> ProjPoint {
    ProjPoint::coordinate(Q, n, 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn compose_is_associative(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let f = triangular_map(&mut r, n, 2);
        let g = triangular_map(&mut r, n, 2);
        let h = CremonaMap::linear(&ProjMatrix::new(random_invertible(&mut r, n + 1)).unwrap());
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left.components(), right.components());
        prop_assert!(left.verify_certificate().unwrap());
    }

    #[test]
    fn certificates_collapse(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let f = triangular_map(&mut r, n, 2);
        prop_assert!(f.verify_certificate().unwrap());
        let id = f.inverse().unwrap().compose(&f).unwrap();
        prop_assert!(id.is_identity());
        prop_assert_eq!(id.degree(), 1);
    }

    #[test]
    fn evaluation_commutes_with_composition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = triangular_map(&mut r, 2, 2);
        let g = triangular_map(&mut r, 2, 2)
            .compose(&CremonaMap::linear(&ProjMatrix::new(random_invertible(&mut r, 3)).unwrap()))
            .unwrap();
        let coords: Vec<i64> = (0..3).map(|_| r.gen_range(-5..=5)).collect();
        prop_assume!(coords.iter().any(|&c| c != 0));
        let p = ProjPoint::from_i64(Q, &coords).unwrap();
        let Evaluation::Point(gp) = g.evaluate(&p).unwrap() else { return Ok(()) };
        let Evaluation::Point(fgp) = f.evaluate(&gp).unwrap() else { return Ok(()) };
        prop_assert_eq!(f.compose(&g).unwrap().evaluate(&p).unwrap(), Evaluation::Point(fgp));
    }

    #[test]
    fn chain_rule_at_fixed_point(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let f = triangular_map(&mut r, n, 2);
        let g = triangular_map(&mut r, n, 2);
        let p = origin(n);
        let d = |m: &CremonaMap| match m.derivative_at_fixed_point(&p).unwrap() {
            Derivative::Linear(m) => m,
            Derivative::Singular => panic!("triangular maps are local isomorphisms at the origin"),
        };
        prop_assert_eq!(d(&f.compose(&g).unwrap()), d(&f).compose(&d(&g)).unwrap());
    }

    #[test]
    fn chain_rule_between_points(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = CremonaMap::linear(&ProjMatrix::new(random_invertible(&mut r, 3)).unwrap());
        let f = triangular_map(&mut r, 2, 2).compose(&a).unwrap();
        let g = a.inverse().unwrap().compose(&triangular_map(&mut r, 2, 2)).unwrap();
        let p = origin(2);
        let (gp, dg) = g.derivative_between(&p).unwrap();
        let (_, df) = f.derivative_between(&gp).unwrap();
        let (_, dfg) = f.compose(&g).unwrap().derivative_between(&p).unwrap();
        if let (Some(df), Some(dg), Some(dfg)) = (df, dg, dfg) {
            prop_assert_eq!(dfg, df.compose(&dg).unwrap());
        }
    }

    #[test]
    fn sl_decomposition_roundtrip(seed in any::<u64>(), m in 2usize..=4, p in prop_oneof![Just(0u64), Just(5), Just(101)]) {
        let field = if p == 0 { Q } else { Field::prime(p).unwrap() };
        let mut r = rng(seed);
        let mat = random_sl(&mut r, field, m, 12);
        let word = sl_decompose(&mat).unwrap();
        prop_assert_eq!(word.len(), m * (m - 1) + 4 * (m - 1));
        prop_assert_eq!(word.product(field), mat);
    }

    #[test]
    fn det_class_is_multiplicative(seed in any::<u64>(), m in 2usize..=4) {
        let mut r = rng(seed);
        let a = ProjMatrix::new(random_invertible(&mut r, m)).unwrap();
        let b = ProjMatrix::new(random_invertible(&mut r, m)).unwrap();
        let ab = a.compose(&b).unwrap();
        let (ca, cb, cab) = (det_class(&a).unwrap(), det_class(&b).unwrap(), det_class(&ab).unwrap());
        // det(ab) / (det(a) det(b)) is the m-th power of the rescaling.
        let ratio = &cab.det / &(&ca.det * &cb.det);
        prop_assert!(cremona::nth_power_class(&ratio, m as u32).unwrap().is_nth_power);
        if ca.in_psl && cb.in_psl {
            prop_assert!(cab.in_psl);
        }
        if ca.in_psl != cb.in_psl {
            prop_assert!(!cab.in_psl);
        }
    }
}

#[test]
fn gadget_fixes_both_coordinate_points() {
    for lambda in [2, 3, 5] {
        for n in [2, 3] {
            let g = CremonaMap::twoderivatives_gadget(&q(lambda), n).unwrap();
            assert!(g.verify_certificate().unwrap());
            for i in [1, 2] {
                let p = ProjPoint::coordinate(Q, n, i);
                assert_eq!(g.evaluate(&p).unwrap(), Evaluation::Point(p.clone()), "lambda {lambda}, n {n}");
                assert!(matches!(g.derivative_at_fixed_point(&p).unwrap(), Derivative::Linear(_)));
            }
        }
    }
}

#[test]
fn gadget_derivatives_differ_in_determinant_class() {
    for n in [2, 3] {
        let g = CremonaMap::twoderivatives_gadget(&q(2), n).unwrap();
        let class = |i| match g.derivative_at_fixed_point(&ProjPoint::coordinate(Q, n, i)).unwrap() {
            Derivative::Linear(m) => det_class(&m).unwrap(),
            Derivative::Singular => panic!("singular"),
        };
        assert_ne!(class(1).in_psl, class(2).in_psl, "n = {n}");
    }
}
