#![allow(dead_code)]

use cremona::{CremonaMap, Field, Matrix, Monomial, Poly, Scalar};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const Q: Field = Field::Rationals;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn q(v: i64) -> Scalar {
    Scalar::from_i64(Q, v)
}

pub fn qr(num: i64, den: i64) -> Scalar {
    Scalar::ratio(Q, num, den).unwrap()
}

pub fn samples() -> Vec<Scalar> {
    vec![q(0), q(1), q(-1), q(2), qr(1, 2)]
}

pub fn nonzero(rng: &mut StdRng, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

/// Random affine polynomial in `x_1..x_{upto-1}` (no constant or x0 term) of degree <= `deg`.
fn random_tail(rng: &mut StdRng, n: usize, upto: usize, deg: u32) -> Poly {
    let mut p = Poly::zero(Q, n + 1);
    if upto <= 1 {
        return p;
    }
    for _ in 0..3 {
        let mut exps = vec![0u32; n + 1];
        let total = rng.gen_range(1..=deg);
        for _ in 0..total {
            exps[rng.gen_range(1..upto)] += 1;
        }
        let c = rng.gen_range(-3..=3);
        p = p.add(&Poly::monomial(Q, Monomial::new(exps), q(c)));
    }
    p
}

fn substitute_affine(p: &Poly, images: &[Poly]) -> Poly {
    p.substitute(images).unwrap()
}

fn homogenize_tuple(affine: &[Poly]) -> Vec<Poly> {
    let n = affine.len();
    let d = affine.iter().filter_map(Poly::total_degree).max().unwrap_or(1).max(1);
    let mut out = vec![Poly::one(Q, n + 1).homogenize(0, d).unwrap()];
    out.extend(affine.iter().map(|p| p.homogenize(0, d).unwrap()));
    out
}

/// Random triangular automorphism `x_i -> a_i x_i + p_i(x_1..x_{i-1})` of the
/// chart `x0 = 1`, homogenized, with its inverse from back-substitution.
/// It fixes `[1:0:...:0]`.
pub fn triangular_map(rng: &mut StdRng, n: usize, deg: u32) -> CremonaMap {
    let x = |i: usize| Poly::var(Q, n + 1, i);
    let mut forward = Vec::new();
    let mut scales = Vec::new();
    for i in 1..=n {
        let a = q(nonzero(rng, 3));
        forward.push(x(i).scale(&a).add(&random_tail(rng, n, i, deg)));
        scales.push(a);
    }
    let mut inverse: Vec<Poly> = Vec::new();
    for i in 1..=n {
        let tail = forward[i - 1].sub(&x(i).scale(&scales[i - 1]));
        let mut images = vec![Poly::one(Q, n + 1)];
        images.extend(inverse.iter().cloned());
        images.extend((i..=n).map(x));
        let solved = x(i).sub(&substitute_affine(&tail, &images));
        inverse.push(solved.scale(&scales[i - 1].inv().unwrap()));
    }
    CremonaMap::certified(homogenize_tuple(&forward), homogenize_tuple(&inverse)).unwrap()
}

/// Product of random elementary transvections: a random element of SL.
pub fn random_sl(rng: &mut StdRng, field: Field, m: usize, steps: usize) -> Matrix {
    let mut out = Matrix::identity(field, m);
    for _ in 0..steps {
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m);
        if i == j {
            j = (j + 1) % m;
        }
        let c = Scalar::from_i64(field, nonzero(rng, 4));
        out.add_row_multiple(i, j, &c);
    }
    out
}

pub fn random_invertible(rng: &mut StdRng, m: usize) -> Matrix {
    loop {
        let rows: Vec<Vec<Scalar>> =
            (0..m).map(|_| (0..m).map(|_| q(rng.gen_range(-4..=4))).collect()).collect();
        let mat = Matrix::from_rows(rows).unwrap();
        if !mat.det().unwrap().is_zero() {
            return mat;
        }
    }
}
