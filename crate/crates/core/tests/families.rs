mod common;

use common::{q, qr, random_sl, rng, samples, triangular_map, Q};
use cremona::{
    conj_limit, parse_poly, psl_path, CremonaMap, Derivative, Family, Matrix, ParamPoly,
    ProjMatrix, ProjPoint, Scalar, UPoly,
};
use proptest::prelude::*;

fn scaling(n: usize, a: &Scalar) -> CremonaMap {
    let mut diag = vec![a.clone(); n + 1];
    diag[0] = Scalar::one(Q);
    CremonaMap::linear(&ProjMatrix::new(Matrix::diagonal(&diag)).unwrap())
}

fn transposition(n: usize, i: usize) -> CremonaMap {
    let mut m = Matrix::identity(Q, n + 1);
    m.set(0, 0, q(0));
    m.set(i, i, q(0));
    m.set(0, i, q(1));
    m.set(i, 0, q(1));
    CremonaMap::linear(&ProjMatrix::new(m).unwrap())
}

/// `ν(a)⁻¹ ∘ g ∘ ν(a)` computed directly with numeric matrices.
fn direct_conjugate(g: &CremonaMap, a: &Scalar) -> CremonaMap {
    let nu = scaling(g.n(), a);
    nu.inverse().unwrap().compose(g).unwrap().compose(&nu).unwrap()
}

fn linear_derivative(g: &CremonaMap, p: &ProjPoint) -> CremonaMap {
    match g.derivative_at_fixed_point(p).unwrap() {
        Derivative::Linear(m) => CremonaMap::linear(&m),
        Derivative::Singular => panic!("singular derivative"),
    }
}

#[test]
fn direct_conjugation_oracle_at_origin() {
    let mut r = rng(7);
    for n in [2, 3] {
        for _ in 0..5 {
            let g = triangular_map(&mut r, n, 3);
            let p = ProjPoint::coordinate(Q, n, 0);
            let rho = conj_limit(&g, &p).unwrap();
            for a in [q(2), q(3), qr(-1, 2)] {
                assert_eq!(rho.specialize(&a).unwrap(), direct_conjugate(&g, &a));
            }
            assert_eq!(rho.specialize(&q(1)).unwrap(), g);
            assert_eq!(rho.specialize(&q(0)).unwrap(), linear_derivative(&g, &p));
        }
    }
}

#[test]
fn direct_conjugation_oracle_for_gadget() {
    for (lambda, i) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        let g = CremonaMap::twoderivatives_gadget(&q(lambda), 2).unwrap();
        let p = ProjPoint::coordinate(Q, 2, i);
        let rho = conj_limit(&g, &p).unwrap();
        let beta = transposition(2, i);
        let moved = beta.compose(&g).unwrap().compose(&beta).unwrap();
        for a in [q(2), q(3)] {
            let expected = beta.compose(&direct_conjugate(&moved, &a)).unwrap().compose(&beta).unwrap();
            assert_eq!(rho.specialize(&a).unwrap(), expected, "lambda {lambda}, p{i}");
        }
        assert_eq!(rho.specialize(&q(1)).unwrap(), g);
        assert_eq!(rho.specialize(&q(0)).unwrap(), linear_derivative(&g, &p));
    }
}

fn t_power(k: u32) -> UPoly {
    UPoly::t(Q).pow(k)
}

/// Affine components `Σ_j t^{j-1} p_{i,j}(x)` from the graded parts of `g` in the chart `x0 = 1`.
fn graded_formula(g: &CremonaMap) -> Vec<ParamPoly> {
    let comps = g.components();
    let x0_power = comps[0].clone();
    assert!(x0_power.num_terms() == 1, "triangular maps have a monomial first component");
    comps[1..]
        .iter()
        .map(|c| {
            let affine = c.dehomogenize(0);
            let top = affine.total_degree().unwrap_or(1);
            (1..=top).fold(ParamPoly::zero(Q, g.n() + 1), |acc, j| {
                acc.add(&ParamPoly::lift(&affine.graded_component(j)).mul_coeff(&t_power(j - 1)))
            })
        })
        .collect()
}

#[test]
fn graded_parts_match_conj_limit() {
    let mut r = rng(20);
    for k in 0..20 {
        let n = 2 + k % 2;
        let g = triangular_map(&mut r, n, 3);
        let rho = conj_limit(&g, &ProjPoint::coordinate(Q, n, 0)).unwrap();
        let c0 = rho.components()[0].dehomogenize(0);
        for (i, expected) in graded_formula(&g).iter().enumerate() {
            let ci = rho.components()[i + 1].dehomogenize(0);
            assert_eq!(ci, c0.mul(expected), "map {k}, component {}", i + 1);
        }
    }
}

#[test]
fn unipotent_map_has_identity_limit() {
    let p = |s| parse_poly(Q, 2, s).unwrap();
    let g = CremonaMap::certified(
        vec![p("x0^2"), p("x0*x1"), p("x0*x2 + x1^2")],
        vec![p("x0^2"), p("x0*x1"), p("x0*x2 - x1^2")],
    )
    .unwrap();
    let o = ProjPoint::coordinate(Q, 2, 0);
    let mut rho = conj_limit(&g, &o).unwrap();
    assert!(rho.specialize(&q(0)).unwrap().is_identity());
    assert_eq!(rho.specialize(&q(1)).unwrap(), g);
    assert!(rho.verify(&samples()).all_passed());
}

#[test]
fn identity_gives_constant_family() {
    let id = CremonaMap::identity(Q, 3);
    let rho = conj_limit(&id, &ProjPoint::from_i64(Q, &[1, 2, 0, -1]).unwrap()).unwrap();
    assert!(rho.is_constant());
    assert!(rho.specialize(&q(5)).unwrap().is_identity());
}

#[test]
fn constant_families() {
    let sigma = CremonaMap::standard_involution(Q, 2).unwrap();
    let mut fam = Family::constant(&sigma).unwrap();
    let report = fam.verify(&[q(0), q(1), q(2)]);
    assert!(report.all_passed());
    assert!(report.samples.iter().all(|s| s.degree == Some(2)));
    assert_eq!(fam.inverse().specialize(&q(3)).unwrap(), sigma);
    let id = Family::constant(&CremonaMap::identity(Q, 2)).unwrap();
    assert_eq!(fam.product(&id).unwrap().components(), fam.components());
    let g = CremonaMap::twoderivatives_gadget(&q(2), 2).unwrap();
    let prod = fam.product(&Family::constant(&g).unwrap()).unwrap();
    assert!(prod.is_constant());
    assert_eq!(prod.specialize(&q(0)).unwrap(), sigma.compose(&g).unwrap());
}

#[test]
fn gadget_family_degrees() {
    let g = CremonaMap::twoderivatives_gadget(&q(2), 2).unwrap();
    let mut rho = conj_limit(&g, &ProjPoint::coordinate(Q, 2, 2)).unwrap();
    let report = rho.verify(&[q(0), q(1), q(-1), qr(1, 2)]);
    assert!(report.all_passed());
    let degrees: Vec<_> = report.samples.iter().map(|s| s.degree).collect();
    assert_eq!(degrees, vec![Some(1), Some(2), Some(2), Some(2)]);
}

#[test]
fn product_of_gadget_families_specializes_pointwise() {
    let g = CremonaMap::twoderivatives_gadget(&q(2), 2).unwrap();
    let r1 = conj_limit(&g, &ProjPoint::coordinate(Q, 2, 1)).unwrap();
    let r2 = conj_limit(&g, &ProjPoint::coordinate(Q, 2, 2)).unwrap();
    let prod = r1.product(&r2).unwrap();
    let two = q(2);
    let expected = r1.specialize(&two).unwrap().compose(&r2.specialize(&two).unwrap()).unwrap();
    assert_eq!(prod.specialize(&two).unwrap(), expected);
    let back = prod.product(&prod.inverse()).unwrap();
    for a in [q(0), q(1), q(2)] {
        assert!(back.specialize(&a).unwrap().is_identity());
    }
}

#[test]
fn corrupted_family_is_reported() {
    let g = CremonaMap::twoderivatives_gadget(&q(2), 2).unwrap();
    let rho = conj_limit(&g, &ProjPoint::coordinate(Q, 2, 2)).unwrap();
    let mut comps: Vec<ParamPoly> = rho.components().to_vec();
    let bump = ParamPoly::lift(&parse_poly(Q, 2, "x1*x2").unwrap());
    comps[1] = comps[1].add(&bump);
    let mut bad = Family::from_parts(comps, rho.inverse_components().to_vec()).unwrap();
    assert!(!bad.verify(&samples()).all_passed());
    assert!(!bad.verify_symbolic().unwrap());
}

fn random_family(seed: u64, n: usize) -> Family {
    let mut r = rng(seed);
    let g = triangular_map(&mut r, n, 2);
    let lin = conj_limit(&g, &ProjPoint::coordinate(Q, n, 0)).unwrap();
    let a = random_sl(&mut r, Q, n + 1, 6);
    let b = random_sl(&mut r, Q, n + 1, 6);
    lin.product(&psl_path(&a, &b).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn specialization_is_a_homomorphism(s1 in any::<u64>(), s2 in any::<u64>(), a in -4i64..=4, b in 1i64..=3) {
        let n = 2;
        let (f1, f2) = (random_family(s1, n), random_family(s2, n));
        let t = qr(a, b);
        let lhs = f1.product(&f2).unwrap().specialize(&t).unwrap();
        let rhs = f1.specialize(&t).unwrap().compose(&f2.specialize(&t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_family_specializes_to_inverse(seed in any::<u64>(), a in -4i64..=4) {
        let f = random_family(seed, 2);
        let t = q(a);
        let fa = f.specialize(&t).unwrap();
        prop_assert_eq!(f.inverse().specialize(&t).unwrap(), fa.inverse().unwrap());
        prop_assert!(f.product(&f.inverse()).unwrap().specialize(&t).unwrap().is_identity());
        prop_assert!(f.verify_symbolic().unwrap());
    }
}

#[test]
fn family_text_roundtrip() {
    let g = CremonaMap::twoderivatives_gadget(&q(3), 2).unwrap();
    let rho = conj_limit(&g, &ProjPoint::coordinate(Q, 2, 1)).unwrap();
    let text = rho.to_string();
    let back = Family::parse(Q, 2, &text).unwrap();
    assert_eq!(back.components(), rho.components());
}
