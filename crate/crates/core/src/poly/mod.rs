//! Sparse multivariate polynomials in `x0..xn`.
//!
//! Coefficients are either field scalars or polynomials in the family
//! parameter `t` (see [`Coeff`]). Terms are kept in a map keyed by graded
//! lexicographic order with `x0 > x1 > ... > xn`; iteration and printing run
//! from the largest monomial down.

mod brown;
mod gcd;
mod modular;
mod parse;
mod tuple;

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use crate::error::{CremonaError, Result};
use crate::scalar::{Field, Scalar};
use crate::upoly::UPoly;

pub use gcd::multi_gcd;
pub use parse::{parse_param_poly, parse_poly};
pub(crate) use tuple::substitute_tuple;

/// How a coefficient renders inside a term.
pub enum CoeffText {
    Signed { negative: bool, magnitude: String },
    Grouped(String),
}

/// Coefficient rings a [`MultiPoly`] can be built over.
pub trait Coeff: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync + 'static {
    /// True when coefficients are polynomials in the family parameter `t`.
    const WITH_PARAMETER: bool;

    fn zero(field: Field) -> Self;
    fn one(field: Field) -> Self;
    fn from_scalar(s: Scalar) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, s: &Scalar) -> Self;
    fn text(&self) -> CoeffText;
}

fn signed_text(s: &Scalar) -> CoeffText {
    let text = s.to_string();
    match text.strip_prefix('-') {
        Some(m) => CoeffText::Signed { negative: true, magnitude: m.to_string() },
        None => CoeffText::Signed { negative: false, magnitude: text },
    }
}

impl Coeff for Scalar {
    const WITH_PARAMETER: bool = false;

    fn zero(field: Field) -> Self {
        Scalar::zero(field)
    }
    fn one(field: Field) -> Self {
        Scalar::one(field)
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Scalar::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }
    fn text(&self) -> CoeffText {
        signed_text(self)
    }
}

impl Coeff for UPoly {
    const WITH_PARAMETER: bool = true;

    fn zero(field: Field) -> Self {
        UPoly::zero(field)
    }
    fn one(field: Field) -> Self {
        UPoly::one(field)
    }
    fn from_scalar(s: Scalar) -> Self {
        UPoly::constant(s)
    }
    fn is_zero(&self) -> bool {
        UPoly::is_zero(self)
    }
    fn is_one(&self) -> bool {
        UPoly::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        UPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        UPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        UPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        UPoly::neg(self)
    }
    fn scale(&self, s: &Scalar) -> Self {
        UPoly::scale(self, s)
    }
    fn text(&self) -> CoeffText {
        if self.is_constant() {
            signed_text(&self.coeff(0))
        } else {
            CoeffText::Grouped(format!("({self})"))
        }
    }
}

/// The coefficient domain of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoeffDomain {
    pub base: Field,
    pub with_parameter: bool,
}

/// An exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { degree: exps.iter().sum(), exps }
    }

    pub fn one(nvars: usize) -> Self {
        Self::new(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Self::new(exps)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Self {
        Monomial {
            degree: other.degree - self.degree,
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
        }
    }

    fn write_vars(&self, f: &mut fmt::Formatter<'_>, names: &dyn Fn(usize) -> String) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", names(i))?;
            } else {
                write!(f, "{}^{e}", names(i))?;
            }
        }
        Ok(())
    }
}

/// A sparse polynomial in `nvars` variables with coefficients in `C`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly<C: Coeff> {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

pub type Poly = MultiPoly<Scalar>;
pub type ParamPoly = MultiPoly<UPoly>;

fn add_into<C: Coeff>(terms: &mut BTreeMap<Monomial, C>, m: Monomial, c: C) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(m) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get().add(&c);
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

impl<C: Coeff> MultiPoly<C> {
    pub fn zero(field: Field, nvars: usize) -> Self {
        MultiPoly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, nvars: usize, c: C) -> Self {
        let mut p = Self::zero(field, nvars);
        add_into(&mut p.terms, Monomial::one(nvars), c);
        p
    }

    pub fn one(field: Field, nvars: usize) -> Self {
        Self::constant(field, nvars, C::one(field))
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Self {
        Self::monomial(field, Monomial::var(nvars, i), C::one(field))
    }

    pub fn monomial(field: Field, m: Monomial, c: C) -> Self {
        let nvars = m.exps.len();
        let mut p = Self::zero(field, nvars);
        add_into(&mut p.terms, m, c);
        p
    }

    /// Builds a polynomial, merging repeated exponent vectors.
    pub fn from_terms<I>(field: Field, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut p = Self::zero(field, nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(CremonaError::ArityMismatch { expected: nvars, found: exps.len() });
            }
            add_into(&mut p.terms, Monomial::new(exps), c);
        }
        Ok(p)
    }

    /// Like [`from_terms`](Self::from_terms) but rejects inhomogeneous input.
    pub fn homogeneous<I>(field: Field, nvars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let p = Self::from_terms(field, nvars, terms)?;
        if p.terms.keys().any(|m| m.degree != degree) {
            return Err(CremonaError::InvalidTuple(format!(
                "polynomial is not homogeneous of degree {degree}"
            )));
        }
        Ok(p)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn domain(&self) -> CoeffDomain {
        CoeffDomain { base: self.field, with_parameter: C::WITH_PARAMETER }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from the largest monomial down.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree)
    }

    /// Common degree of all terms, or `None` for zero and inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let first = self.terms.keys().next()?.degree;
        self.terms.keys().all(|m| m.degree == first).then_some(first)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exps[var]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exps[var]).min().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exps[var] > 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field || self.nvars != other.nvars {
            Err(CremonaError::DomainMismatch)
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_into(&mut out.terms, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                add_into(&mut out, ma.mul(mb), ca.mul(cb));
            }
        }
        Ok(MultiPoly { field: self.field, nvars: self.nvars, terms: out })
    }

    /// Panicking forms of the arithmetic, for operands known to share a domain.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("polynomial domain mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("polynomial domain mismatch")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("polynomial domain mismatch")
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs_same(|c| c.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map_coeffs_same(|c| c.scale(s))
    }

    pub fn mul_coeff(&self, k: &C) -> Self {
        self.map_coeffs_same(|c| c.mul(k))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field, self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn map_coeffs_same(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            add_into(&mut out.terms, m.clone(), f(c));
        }
        out
    }

    /// Applies `f` to every coefficient, moving into another coefficient ring.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        let mut out = MultiPoly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            add_into(&mut out.terms, m.clone(), f(c));
        }
        out
    }

    /// Replaces `x_i` by `images[i]`.
    pub fn substitute(&self, images: &[MultiPoly<C>]) -> Result<MultiPoly<C>> {
        if images.len() != self.nvars {
            return Err(CremonaError::ArityMismatch { expected: self.nvars, found: images.len() });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let (field, nvars) = (first.field, first.nvars);
        if images.iter().any(|p| p.field != field || p.nvars != nvars) || field != self.field {
            return Err(CremonaError::DomainMismatch);
        }
        // powers[i][e] = images[i]^e
        let powers: Vec<Vec<MultiPoly<C>>> = images
            .iter()
            .enumerate()
            .map(|(i, img)| {
                let top = self.degree_in(i);
                let mut pw = Vec::with_capacity(top as usize + 1);
                pw.push(MultiPoly::one(field, nvars));
                for e in 1..=top as usize {
                    let next = pw[e - 1].mul(img);
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut prod = MultiPoly::constant(field, nvars, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    prod = prod.mul(&powers[i][e as usize]);
                }
            }
            for (mm, cc) in prod.terms {
                add_into(&mut out, mm, cc);
            }
        }
        Ok(MultiPoly { field, nvars, terms: out })
    }

    /// Evaluates the `x` variables at a point, leaving a coefficient.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<C> {
        if point.len() != self.nvars {
            return Err(CremonaError::ArityMismatch { expected: self.nvars, found: point.len() });
        }
        let mut acc = C::zero(self.field);
        for (m, c) in &self.terms {
            let mut v = Scalar::one(self.field);
            for (x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    v = &v * &x.pow(e as u64);
                }
            }
            acc = acc.add(&c.scale(&v));
        }
        Ok(acc)
    }

    /// Formal partial derivative; multiplicities reduce in positive characteristic.
    pub fn partial_derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[var] -= 1;
            let k = Scalar::from_i64(self.field, e as i64);
            add_into(&mut out.terms, Monomial::new(exps), c.scale(&k));
        }
        out
    }

    /// Sum of the terms of total degree exactly `j`.
    pub fn graded_component(&self, j: u32) -> Self {
        MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree == j)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sets `x_var = 1`, keeping the variable slot (its exponent becomes 0).
    pub fn dehomogenize(&self, var: usize) -> Self {
        let mut out = Self::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let mut exps = m.exps.clone();
            exps[var] = 0;
            add_into(&mut out.terms, Monomial::new(exps), c.clone());
        }
        out
    }

    /// Homogenizes to degree `d` using `x_var`, which must be absent.
    pub fn homogenize(&self, var: usize, d: u32) -> Result<Self> {
        let mut out = Self::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            if m.degree > d || m.exps[var] != 0 {
                return Err(CremonaError::InvalidParameter("cannot homogenize".into()));
            }
            let mut exps = m.exps.clone();
            exps[var] = d - m.degree;
            add_into(&mut out.terms, Monomial::new(exps), c.clone());
        }
        Ok(out)
    }

    /// Coefficients with respect to `var`: `self = sum_k out[k] * var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let top = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.field, self.nvars); top + 1];
        for (m, c) in &self.terms {
            let k = m.exps[var] as usize;
            let mut exps = m.exps.clone();
            exps[var] = 0;
            add_into(&mut out[k].terms, Monomial::new(exps), c.clone());
        }
        out
    }

    /// Largest monomial dividing every term; `None` for zero.
    pub fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let mut exps = it.next()?.exps.clone();
        for m in it {
            for (a, b) in exps.iter_mut().zip(&m.exps) {
                *a = (*a).min(*b);
            }
        }
        Some(Monomial::new(exps))
    }

    /// Divides by a monomial that divides every term.
    pub fn div_monomial(&self, m: &Monomial) -> Self {
        MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(a, c)| (m.quotient_of(a), c.clone())).collect(),
        }
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &dyn Fn(usize) -> String) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            let is_unit_monomial = m.degree == 0;
            match c.text() {
                CoeffText::Signed { negative, magnitude } => {
                    if idx == 0 {
                        if negative {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, " {} ", if negative { '-' } else { '+' })?;
                    }
                    if is_unit_monomial {
                        write!(f, "{magnitude}")?;
                    } else {
                        if magnitude != "1" {
                            write!(f, "{magnitude}*")?;
                        }
                        m.write_vars(f, names)?;
                    }
                }
                CoeffText::Grouped(text) => {
                    if idx > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{text}")?;
                    if !is_unit_monomial {
                        write!(f, "*")?;
                        m.write_vars(f, names)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &|i| format!("x{i}"))
    }
}

impl MultiPoly<Scalar> {
    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() || self.field != divisor.field || self.nvars != divisor.nvars {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm, lc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let lc_inv = lc.inv().ok()?;
        if divisor.terms.len() == 1 {
            if !self.terms.keys().all(|m| lm.divides(m)) {
                return None;
            }
            return Some(self.div_monomial(&lm).scale(&lc_inv));
        }
        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        while let Some((m, c)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) || m.degree < lm.degree {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = &c * &lc_inv;
            for (dm, dc) in &divisor.terms {
                add_into(&mut rem, dm.mul(&qm), -(dc * &qc));
            }
            quot.insert(qm, qc);
        }
        Some(MultiPoly { field: self.field, nvars: self.nvars, terms: quot })
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv().expect("leading coefficient is nonzero")),
            None => self.clone(),
        }
    }

    /// Appends a variable slot at the end.
    pub fn extend_vars(&self, extra: usize) -> Self {
        MultiPoly {
            field: self.field,
            nvars: self.nvars + extra,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut exps = m.exps.clone();
                    exps.extend(std::iter::repeat(0).take(extra));
                    (Monomial::new(exps), c.clone())
                })
                .collect(),
        }
    }

    /// Reads the last variable as the parameter `t`.
    pub fn into_param(&self) -> ParamPoly {
        let nv = self.nvars - 1;
        let mut out = ParamPoly::zero(self.field, nv);
        let mut grouped: BTreeMap<Monomial, Vec<Scalar>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.exps[nv] as usize;
            let xm = Monomial::new(m.exps[..nv].to_vec());
            let entry = grouped.entry(xm).or_default();
            if entry.len() <= k {
                entry.resize(k + 1, Scalar::zero(self.field));
            }
            entry[k] = c.clone();
        }
        for (m, cs) in grouped {
            add_into(&mut out.terms, m, UPoly::from_coeffs(self.field, cs));
        }
        out
    }
}

impl MultiPoly<UPoly> {
    /// Writes `t` as an extra, last variable.
    pub fn flatten(&self) -> Poly {
        let mut out = Poly::zero(self.field, self.nvars + 1);
        for (m, c) in &self.terms {
            for (k, s) in c.coeffs().iter().enumerate() {
                let mut exps = m.exps.clone();
                exps.push(k as u32);
                add_into(&mut out.terms, Monomial::new(exps), s.clone());
            }
        }
        out
    }

    /// Substitutes `t = a`.
    pub fn specialize(&self, a: &Scalar) -> Poly {
        self.map_coeffs(|c| c.eval(a))
    }

    pub fn lift(p: &Poly) -> Self {
        p.map_coeffs(|c| UPoly::constant(c.clone()))
    }

    pub fn t_degree(&self) -> usize {
        self.terms.values().filter_map(UPoly::degree).max().unwrap_or(0)
    }

    /// Minimal `t`-adic valuation over the coefficients; `None` for zero.
    pub fn t_valuation(&self) -> Option<usize> {
        self.terms.values().filter_map(UPoly::valuation).min()
    }

    pub fn divide_t_power(&self, e: usize) -> Self {
        MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.shift_down(e))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        parse_poly(Field::Rationals, 2, s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(p("(x0+x1)*(x0-x1)"), p("x0^2 - x1^2"));
        let f = p("3*x0*x1 - x2^2 + 1/2");
        assert_eq!(f.mul(&Poly::one(Field::Rationals, 3)), f);
    }

    #[test]
    fn homogeneous_products() {
        let a = p("x0^2 + x1*x2");
        let b = p("x0^3 - 2*x2^3 + x0*x1*x2");
        assert_eq!(a.homogeneous_degree(), Some(2));
        assert_eq!(a.mul(&b).homogeneous_degree(), Some(5));
        assert_eq!(p("x0 + 1").homogeneous_degree(), None);
        assert!(Poly::homogeneous(Field::Rationals, 3, 2, [(vec![1, 0, 0], Scalar::one(Field::Rationals))]).is_err());
    }

    #[test]
    fn substitution() {
        let swap = [p("x1"), p("x0"), p("x2")];
        assert_eq!(p("x0*x1").substitute(&swap).unwrap(), p("x0*x1"));
        let imgs = [p("x1*x2"), p("x0"), p("x2")];
        assert_eq!(p("x0^2").substitute(&imgs).unwrap(), p("x1^2*x2^2"));
        let id = [p("x0"), p("x1"), p("x2")];
        let f = p("x0^3 - 7/3*x1*x2 + x2");
        assert_eq!(f.substitute(&id).unwrap(), f);
        assert!(matches!(f.substitute(&id[..2]), Err(CremonaError::ArityMismatch { .. })));
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("x0^2*x1").partial_derivative(0), p("2*x0*x1"));
        assert!(p("5").partial_derivative(1).is_zero());
        let f2 = Field::prime(2).unwrap();
        let sq = parse_poly(f2, 2, "x0^2").unwrap();
        assert!(sq.partial_derivative(0).is_zero());
    }

    #[test]
    fn graded_pieces() {
        let f = p("1 + x1 + x1*x2");
        assert_eq!(f.graded_component(2), p("x1*x2"));
        assert!(f.graded_component(3).is_zero());
        let sum = (0..=2).fold(Poly::zero(Field::Rationals, 3), |acc, j| acc.add(&f.graded_component(j)));
        assert_eq!(sum, f);
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(p("x2 + x0*x1 - 2*x0^2 + 3").to_string(), "-2*x0^2 + x0*x1 + x2 + 3");
        let q = parse_param_poly(Field::Rationals, 2, "t*x0 + (1 - t^2)*x1 + 2*x2").unwrap();
        assert_eq!(q.to_string(), "(t)*x0 + (-t^2 + 1)*x1 + 2*x2");
    }

    #[test]
    fn exact_division() {
        let a = p("x0^2 - x1^2");
        assert_eq!(a.div_exact(&p("x0 + x1")), Some(p("x0 - x1")));
        assert_eq!(a.div_exact(&p("x0 + x2")), None);
    }

    #[test]
    fn flatten_roundtrip() {
        let q = parse_param_poly(Field::Rationals, 2, "(t^3 - 1)*x0*x1 + t*x2^2").unwrap();
        assert_eq!(q.flatten().into_param(), q);
        assert_eq!(q.t_valuation(), Some(0));
    }
}
