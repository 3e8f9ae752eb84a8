mod common;

use std::time::Instant;

use common::{q, random_sl, rng, samples, triangular_map, Q};
use cremona::{
    connect, connect_linear, det_class, find_local_iso_point, linear_plan, CremonaMap, Matrix,
    ProjMatrix, ProjPoint, DEFAULT_HEIGHT_BOUND,
};

fn lin(rows: &[&[i64]]) -> CremonaMap {
    CremonaMap::linear(&ProjMatrix::new(Matrix::from_i64(Q, rows).unwrap()).unwrap())
}

fn pairs() -> Vec<(&'static str, CremonaMap, CremonaMap)> {
    let sigma = CremonaMap::standard_involution(Q, 2).unwrap();
    let gadget = |l: i64, n: usize| CremonaMap::twoderivatives_gadget(&q(l), n).unwrap();
    let id2 = CremonaMap::identity(Q, 2);
    let id3 = CremonaMap::identity(Q, 3);
    let sigma3 = CremonaMap::standard_involution(Q, 3).unwrap();
    let h3 = CremonaMap::dejonquieres_h(Q, 3).unwrap();
    let ga = CremonaMap::scaling_g_a(&q(2), 3).unwrap();
    let a = lin(&[&[1, 2, 0], &[0, 1, 0], &[1, 0, 1]]);
    let b = lin(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    let tri = triangular_map(&mut rng(3), 2, 2);
    vec![
        ("id -> sigma", id2.clone(), sigma.clone()),
        ("sigma -> gadget", sigma.clone(), gadget(2, 2)),
        ("linear -> sigma", a.clone(), sigma.clone()),
        ("gadget -> linear", gadget(3, 2), b.clone()),
        ("diag(2,1,1) -> id", b.clone(), id2.clone()),
        ("sigma∘A -> gadget", sigma.compose(&a).unwrap(), gadget(2, 2)),
        ("triangular -> sigma", tri, sigma.clone()),
        ("id3 -> h", id3.clone(), h3.clone()),
        ("h -> g_a", h3.clone(), ga.clone()),
        ("sigma3 -> h", sigma3.clone(), h3),
        ("g_a -> gadget(3)", ga, gadget(2, 3)),
    ]
}

#[test]
fn connect_mixed_pairs() {
    for (name, f, g) in pairs() {
        let start = Instant::now();
        let (family, plan) = connect(&f, &g, DEFAULT_HEIGHT_BOUND).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(family.specialize(&q(0)).unwrap(), f, "{name}");
        assert_eq!(family.specialize(&q(1)).unwrap(), g, "{name}");
        for step in &plan.steps {
            let mut fam = step.family().clone();
            let report = fam.verify(&samples());
            assert!(report.all_passed(), "{name}: step {step} failed: {report:?}");
        }
        let again = plan.replay().unwrap();
        assert_eq!(again.components(), family.components(), "{name}: replay");
        println!("{name}: {} steps, x-degree {}, {:?}", plan.steps.len(), family.x_degree(), start.elapsed());
    }
}

#[test]
fn connect_is_deterministic() {
    let sigma = CremonaMap::standard_involution(Q, 2).unwrap();
    let g = CremonaMap::twoderivatives_gadget(&q(2), 2).unwrap();
    let (a, plan_a) = connect(&sigma, &g, DEFAULT_HEIGHT_BOUND).unwrap();
    let (b, plan_b) = connect(&sigma, &g, DEFAULT_HEIGHT_BOUND).unwrap();
    assert_eq!(a.components(), b.components());
    let kinds = |p: &cremona::PathPlan| p.steps.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    assert_eq!(kinds(&plan_a), kinds(&plan_b));
}

#[test]
fn connect_linear_on_psl() {
    let mut r = rng(11);
    for m in [3, 4] {
        for _ in 0..3 {
            let h = ProjMatrix::new(random_sl(&mut r, Q, m, 8)).unwrap();
            let mut fam = connect_linear(&h).unwrap();
            assert!(fam.specialize(&q(0)).unwrap().is_identity());
            assert_eq!(fam.specialize(&q(1)).unwrap(), CremonaMap::linear(&h));
            assert!(fam.verify(&samples()).all_passed());
            assert!(fam.x_degree() == 1);
            let plan = linear_plan(&h).unwrap();
            assert_eq!(plan.count("DetClassGadgetSegment"), 0);
        }
    }
}

#[test]
fn connect_linear_outside_psl_uses_gadget() {
    let h = ProjMatrix::new(Matrix::from_i64(Q, &[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap()).unwrap();
    assert!(!det_class(&h).unwrap().in_psl);
    let plan = linear_plan(&h).unwrap();
    assert_eq!(plan.count("DetClassGadgetSegment"), 1);
    let fam = plan.replay().unwrap();
    assert!(fam.specialize(&q(0)).unwrap().is_identity());
    assert_eq!(fam.specialize(&q(1)).unwrap(), CremonaMap::linear(&h));
}

/// Height stage (1, 2, 4, ...) of a point: the smallest power of two bounding its coordinates.
fn stage(coords: &[i64]) -> i64 {
    let h = coords.iter().map(|c| c.abs()).max().unwrap();
    let mut s = 1;
    while s < h {
        s *= 2;
    }
    s
}

/// Brute force over all primitive points of height <= `bound`: the earliest
/// stage containing a local isomorphism point.
fn oracle_stage(g: &CremonaMap, bound: i64) -> Option<i64> {
    let side = 2 * bound + 1;
    let total = side.pow(3);
    (0..total)
        .map(|code| [code / (side * side) - bound, code / side % side - bound, code % side - bound])
        .filter(|c| c.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
        .filter(|c| c.iter().fold(0, |a, &b| num_gcd(a, b.abs())) == 1)
        .filter(|c| g.is_local_iso_at(&ProjPoint::from_i64(Q, c).unwrap()).unwrap())
        .map(|c| stage(&c))
        .min()
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a } else { num_gcd(b, a % b) }
}

#[test]
fn local_iso_point_matches_brute_force() {
    let gadget = CremonaMap::twoderivatives_gadget(&q(2), 2).unwrap();
    let sigma = CremonaMap::standard_involution(Q, 2).unwrap();
    for g in [gadget, sigma] {
        let found = find_local_iso_point(&g, 16).unwrap();
        assert!(g.is_local_iso_at(&found).unwrap());
        let coords: Vec<i64> = found
            .coords()
            .iter()
            .map(|c| i64::try_from(c.as_rational().unwrap().numer()).unwrap())
            .collect();
        assert_eq!(Some(stage(&coords)), oracle_stage(&g, 4));
    }
    let first = find_local_iso_point(&CremonaMap::standard_involution(Q, 2).unwrap(), 16).unwrap();
    assert_eq!(first, ProjPoint::from_i64(Q, &[1, 1, 1]).unwrap());
}
