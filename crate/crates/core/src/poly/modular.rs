//! Gcd over Q through images modulo word-size primes.
//!
//! Monic gcd images are combined by Chinese remaindering and lifted back by
//! rational reconstruction. A candidate is kept only once it is stable under
//! a new prime and divides every input exactly over Q. Since each image has
//! degree at least that of the true gcd, an exact divisor of that degree is
//! the gcd itself.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::brown::{self, ModPoly};
use super::{Monomial, Poly};
use crate::scalar::{is_prime, Field, Scalar};

const MAX_PRIMES: usize = 400;

/// Primes below 2^31 in decreasing order.
fn primes() -> impl Iterator<Item = u32> {
    (1..(1u32 << 30)).rev().map(|k| 2 * k + 1).filter(|&n| is_prime(n as u64))
}

fn reduce(f: &Poly, p: u32) -> Option<ModPoly> {
    let field = Field::Prime(p);
    let mut out = ModPoly::new();
    for (m, c) in &f.terms {
        if let Scalar::Fp { value, .. } = Scalar::from_rational(field, c.as_rational()?).ok()? {
            if value != 0 {
                out.insert(m.clone(), value as u64);
            }
        }
    }
    Some(out)
}

/// Smallest `a/b` with `a = b u mod m` and `|a|, |b| <= sqrt(m/2)`.
fn reconstruct(u: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.clone());
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        (r0, r1, s0, s1) = (r1, r2, s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

/// Residues of the gcd modulo the product of the primes used so far.
struct Accumulator {
    residues: BTreeMap<Monomial, BigInt>,
    modulus: BigInt,
}

impl Accumulator {
    fn new(g: &ModPoly, p: u64) -> Self {
        let residues = g.iter().map(|(m, &c)| (m.clone(), BigInt::from(c))).collect();
        Accumulator { residues, modulus: BigInt::from(p) }
    }

    fn leading(&self) -> Option<&Monomial> {
        self.residues.keys().next_back()
    }

    fn absorb(&mut self, g: &ModPoly, p: u64) {
        let pb = BigInt::from(p);
        let m_inv = BigInt::from(self.modulus.mod_floor(&pb)).modpow(&BigInt::from(p - 2), &pb);
        let keys: Vec<Monomial> = self.residues.keys().chain(g.keys()).cloned().collect();
        for m in keys {
            let a = self.residues.get(&m).cloned().unwrap_or_default();
            let b = BigInt::from(g.get(&m).copied().unwrap_or(0));
            let k = ((b - &a) * &m_inv).mod_floor(&pb);
            self.residues.insert(m, a + &self.modulus * k);
        }
        self.modulus *= pb;
    }

    fn lift(&self, nvars: usize) -> Option<Poly> {
        let mut out = Poly::zero(Field::Rationals, nvars);
        for (m, u) in &self.residues {
            if !u.is_zero() {
                out.terms.insert(m.clone(), Scalar::Q(reconstruct(u, &self.modulus)?));
            }
        }
        Some(out)
    }
}

fn image_gcd(images: &[ModPoly], nvars: usize, p: u64) -> Option<ModPoly> {
    let mut g = images[0].clone();
    for f in &images[1..] {
        if g.len() == 1 && g.keys().all(|m| m.degree == 0) {
            break;
        }
        g = brown::gcd(&g, f, nvars, p)?;
    }
    Some(g)
}

/// The monic gcd over Q of nonzero polynomials, or `None` when the primes
/// run out before a certified candidate appears.
pub(crate) fn modular_gcd(polys: &[Poly]) -> Option<Poly> {
    let nvars = polys[0].nvars;
    let mut acc: Option<Accumulator> = None;
    let mut previous: Option<Poly> = None;
    for p in primes().take(MAX_PRIMES) {
        let Some(images) = polys.iter().map(|f| reduce(f, p)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        // a prime dividing a leading coefficient can change the shape of the gcd
        let shape_kept = images
            .iter()
            .zip(polys)
            .all(|(i, f)| i.keys().next_back() == f.leading().map(|l| l.0));
        if !shape_kept {
            continue;
        }
        let p = p as u64;
        let g = image_gcd(&images, nvars, p)?;
        if g.keys().all(|m| m.degree == 0) {
            return Some(Poly::one(Field::Rationals, nvars));
        }
        match &mut acc {
            Some(a) if a.leading() == g.keys().next_back() => a.absorb(&g, p),
            // larger image: p is unlucky
            Some(a) if a.leading() < g.keys().next_back() => continue,
            _ => {
                acc = Some(Accumulator::new(&g, p));
                previous = None;
                continue;
            }
        }
        let candidate = acc.as_ref().and_then(|a| a.lift(nvars));
        if candidate.is_some() && candidate == previous {
            let c = candidate.as_ref().expect("checked");
            if polys.iter().all(|f| f.div_exact(c).is_some()) {
                return candidate;
            }
        }
        previous = candidate;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn reconstructs_small_fractions() {
        let p = primes().next().unwrap();
        assert_eq!(p, 2_147_483_647);
        for (a, b) in [(1i64, 1i64), (-3, 7), (22, 5), (-1, 2)] {
            let s = Scalar::ratio(Field::Prime(p), a, b).unwrap();
            let Scalar::Fp { value, .. } = s else { unreachable!() };
            let got = reconstruct(&BigInt::from(value), &BigInt::from(p));
            assert_eq!(got, Some(BigRational::new(a.into(), b.into())));
        }
    }

    #[test]
    fn certified_modular_gcd() {
        let q = |s| parse_poly(Field::Rationals, 2, s).unwrap();
        let common = q("x0^2 - 1/3*x1*x2 + 5/2*x2^2");
        let a = common.mul(&q("x0 + 2*x1"));
        let b = common.mul(&common).mul(&q("x1 - 7*x2"));
        assert_eq!(modular_gcd(&[a, b]), Some(common.monic()));
    }

    #[test]
    fn huge_coefficients_need_several_primes() {
        let q = |s| parse_poly(Field::Rationals, 2, s).unwrap();
        let common = q("x0 + 123456789123456789123456789/987654321987654321*x1*x2 - 5*x2^2");
        let a = common.mul(&q("x0 + x2"));
        let b = common.mul(&q("x1 - 3/4*x2"));
        assert_eq!(modular_gcd(&[a, b]), Some(common.monic()));
    }

    #[test]
    fn coprime_inputs() {
        let q = |s| parse_poly(Field::Rationals, 2, s).unwrap();
        let one = Poly::one(Field::Rationals, 3);
        assert_eq!(modular_gcd(&[q("x0^2 + 99999999977*x1"), q("x1 - x2")]), Some(one));
    }
}
