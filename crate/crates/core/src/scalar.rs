//! Exact scalars over the rationals and prime fields.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CremonaError, Result};

/// The base field: either Q or F_p for a prime p < 2^31.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u32),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(CremonaError::CharacteristicTooLarge(p));
        }
        if !is_prime(p) {
            return Err(CremonaError::NotPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Field::Prime(_))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = CremonaError;

    /// Accepts `q` or `fp:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rationals);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| CremonaError::Parse(format!("bad characteristic in {s:?}")))?;
            return Field::prime(p);
        }
        Err(CremonaError::Parse(format!("unknown field selector {s:?}")))
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Rationals are kept in lowest terms with positive
/// denominator; residues lie in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u32, p: u32 },
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn zero(field: Field) -> Self {
        Self::from_i64(field, 0)
    }

    pub fn one(field: Field) -> Self {
        Self::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, v: i64) -> Self {
        match field {
            Field::Rationals => Scalar::Q(BigRational::from_integer(v.into())),
            Field::Prime(p) => Scalar::Fp {
                value: v.rem_euclid(p as i64) as u32,
                p,
            },
        }
    }

    /// Reduce a rational into `field`. Fails if the denominator vanishes mod p.
    pub fn from_rational(field: Field, r: &BigRational) -> Result<Self> {
        match field {
            Field::Rationals => Ok(Scalar::Q(r.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let num = r.numer().mod_floor(&pb).to_u64().unwrap();
                let den = r.denom().mod_floor(&pb).to_u64().unwrap();
                if den == 0 {
                    return Err(CremonaError::DivisionByZero);
                }
                let inv = pow_mod(den, p as u64 - 2, p as u64);
                Ok(Scalar::Fp {
                    value: mul_mod(num, inv, p as u64) as u32,
                    p,
                })
            }
        }
    }

    pub fn ratio(field: Field, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(CremonaError::DivisionByZero);
        }
        Self::from_rational(field, &BigRational::new(num.into(), den.into()))
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(r) => Some(r),
            Scalar::Fp { .. } => None,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(CremonaError::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: ((*a as u64 + *b as u64) % *p as u64) as u32,
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: mul_mod(*a as u64, *b as u64, *p as u64) as u32,
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(CremonaError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Q(r) => Scalar::Q(r.recip()),
            Scalar::Fp { value, p } => Scalar::Fp {
                value: pow_mod(*value as u64, *p as u64 - 2, *p as u64) as u32,
                p: *p,
            },
        })
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.field());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Signed power; negative exponents invert first.
    pub fn powi(&self, exp: i64) -> Result<Self> {
        if exp >= 0 {
            Ok(self.pow(exp as u64))
        } else {
            Ok(self.inv()?.pow(exp.unsigned_abs()))
        }
    }

    pub fn parse(field: Field, s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || CremonaError::Parse(format!("bad scalar literal {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(CremonaError::DivisionByZero);
        }
        Self::from_rational(field, &BigRational::new(num, den))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

// Operator impls panic on mismatched fields (and `/` on a zero divisor); the `try_*` methods report it.
impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.try_add(rhs).expect("scalar field mismatch")
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.try_sub(rhs).expect("scalar field mismatch")
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.try_mul(rhs).expect("scalar field mismatch")
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self.try_div(rhs).expect("division by zero or field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(r) => Scalar::Q(-r),
            Scalar::Fp { value, p } => Scalar::Fp {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Outcome of an n-th power test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerClass {
    pub is_nth_power: bool,
    pub witness: Option<Scalar>,
}

/// Decide whether `a` lies in `(k*)^n`, returning a root when it does.
///
/// Over Q a reduced fraction is an n-th power iff numerator and denominator
/// are (with the sign handled separately), so exact integer roots decide it.
/// Over F_p the root is recovered from a discrete logarithm.
pub fn nth_power_class(a: &Scalar, n: u32) -> Result<PowerClass> {
    if a.is_zero() {
        return Err(CremonaError::InvalidParameter("zero has no power class".into()));
    }
    if n == 0 {
        return Err(CremonaError::InvalidParameter("exponent must be positive".into()));
    }
    let witness = match a {
        Scalar::Q(r) => rational_root(r, n).map(Scalar::Q),
        Scalar::Fp { value, p } => prime_field_root(*value as u64, n as u64, *p as u64)
            .map(|w| Scalar::Fp { value: w as u32, p: *p }),
    };
    debug_assert!(witness.as_ref().map_or(true, |w| &w.pow(n as u64) == a));
    Ok(PowerClass {
        is_nth_power: witness.is_some(),
        witness,
    })
}

fn exact_root(x: &BigInt, n: u32) -> Option<BigInt> {
    let r = x.nth_root(n);
    (num_traits::pow(r.clone(), n as usize) == *x).then_some(r)
}

fn rational_root(r: &BigRational, n: u32) -> Option<BigRational> {
    let negative = r.is_negative();
    if negative && n % 2 == 0 {
        return None;
    }
    let num = exact_root(&r.numer().abs(), n)?;
    let den = exact_root(r.denom(), n)?;
    let root = BigRational::new(num, den);
    Some(if negative { -root } else { root })
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime field has a primitive root")
}

/// Baby-step giant-step logarithm of `a` to base `g` in F_p*.
fn discrete_log(g: u64, a: u64, p: u64) -> u64 {
    let order = p - 1;
    let m = (order as f64).sqrt().ceil() as u64 + 1;
    let mut baby = HashMap::with_capacity(m as usize);
    let mut cur = 1u64;
    for j in 0..m {
        baby.entry(cur).or_insert(j);
        cur = mul_mod(cur, g, p);
    }
    let giant = pow_mod(pow_mod(g, m, p), p - 2, p);
    let mut gamma = a;
    for i in 0..=m {
        if let Some(&j) = baby.get(&gamma) {
            return (i * m + j) % order;
        }
        gamma = mul_mod(gamma, giant, p);
    }
    unreachable!("a primitive root generates F_p*")
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    e.x.rem_euclid(m as i128) as u64
}

fn prime_field_root(a: u64, n: u64, p: u64) -> Option<u64> {
    if p == 2 {
        return Some(a);
    }
    let order = p - 1;
    let g = n.gcd(&order);
    if pow_mod(a, order / g, p) != 1 {
        return None;
    }
    let gen = primitive_root(p);
    let k = discrete_log(gen, a, p);
    let reduced = order / g;
    let j = (k / g) % reduced * mod_inverse((n / g) % reduced, reduced) % reduced.max(1);
    let w = pow_mod(gen, j, p);
    debug_assert_eq!(pow_mod(w, n, p), a);
    Some(w)
}
