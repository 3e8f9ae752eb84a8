//! Birational maps of P^n as normalized homogeneous tuples with optional
//! inverse certificates.

use std::fmt;

use crate::error::{CremonaError, Result};
use crate::matrix::{Matrix, ProjMatrix};
use crate::poly::{multi_gcd, parse_poly, substitute_tuple, Poly};
use crate::scalar::{Field, Scalar};

/// A point of P^n with first nonzero coordinate 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<Scalar>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        let first = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| CremonaError::InvalidParameter("the zero vector is not a point".into()))?
            .inv()?;
        Ok(ProjPoint { coords: coords.iter().map(|c| c * &first).collect() })
    }

    pub fn from_i64(field: Field, coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Scalar::from_i64(field, c)).collect())
    }

    /// The coordinate point `e_i` of P^n.
    pub fn coordinate(field: Field, n: usize, i: usize) -> Self {
        let mut coords = vec![Scalar::zero(field); n + 1];
        coords[i] = Scalar::one(field);
        ProjPoint { coords }
    }

    /// Parses `[a:b:c]`, `a:b:c` or `a,b,c`.
    pub fn parse(field: Field, s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let sep = if inner.contains(':') { ':' } else { ',' };
        Self::new(inner.split(sep).map(|c| Scalar::parse(field, c)).collect::<Result<_>>()?)
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn field(&self) -> Field {
        self.coords[0].field()
    }

    /// Index of the first nonzero coordinate (whose value is 1).
    pub fn chart_index(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).expect("nonzero point")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Image of a point under a rational map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluation {
    Point(ProjPoint),
    Indeterminate,
}

impl Evaluation {
    pub fn point(self) -> Option<ProjPoint> {
        match self {
            Evaluation::Point(p) => Some(p),
            Evaluation::Indeterminate => None,
        }
    }
}

/// Linear part of a map at a fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivative {
    Linear(ProjMatrix),
    Singular,
}

/// An unnormalized tuple of `n + 1` forms of one common degree `d >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTuple {
    components: Vec<Poly>,
}

impl RawTuple {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        if components.len() < 2 {
            return Err(CremonaError::InvalidTuple("need at least two components".into()));
        }
        let (field, nvars) = (components[0].field(), components[0].nvars());
        if nvars != components.len() {
            return Err(CremonaError::ArityMismatch { expected: components.len(), found: nvars });
        }
        if components.iter().any(|c| c.field() != field || c.nvars() != nvars) {
            return Err(CremonaError::DomainMismatch);
        }
        let nonzero: Vec<&Poly> = components.iter().filter(|c| !c.is_zero()).collect();
        if nonzero.is_empty() {
            return Err(CremonaError::ZeroTuple);
        }
        let d = nonzero[0]
            .homogeneous_degree()
            .ok_or_else(|| CremonaError::InvalidTuple("component is not homogeneous".into()))?;
        if nonzero.iter().any(|c| c.homogeneous_degree() != Some(d)) {
            return Err(CremonaError::InvalidTuple("components have different degrees".into()));
        }
        if d == 0 {
            return Err(CremonaError::InvalidTuple("constant tuple".into()));
        }
        Ok(RawTuple { components })
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn n(&self) -> usize {
        self.components.len() - 1
    }

    pub fn degree(&self) -> u32 {
        self.components
            .iter()
            .find_map(Poly::homogeneous_degree)
            .expect("validated tuple")
    }

    /// Removes the common factor and scales the first nonzero coefficient to 1.
    pub fn normalize(&self) -> Result<Vec<Poly>> {
        let g = multi_gcd(&self.components)?;
        let mut out: Vec<Poly> = self
            .components
            .iter()
            .map(|c| c.div_exact(&g).expect("gcd divides every component"))
            .collect();
        let lead = out
            .iter()
            .find_map(|c| c.leading().map(|(_, c)| c.clone()))
            .ok_or(CremonaError::ZeroTuple)?;
        let inv = lead.inv()?;
        for c in out.iter_mut() {
            *c = c.scale(&inv);
        }
        if out.iter().all(Poly::is_constant) {
            return Err(CremonaError::DegenerateComposition);
        }
        Ok(out)
    }
}

/// A birational self-map of P^n: normalized components, an optional inverse
/// tuple, and whether that inverse has been verified.
#[derive(Clone, Debug)]
pub struct CremonaMap {
    n: usize,
    degree: u32,
    components: Vec<Poly>,
    inverse: Option<Vec<Poly>>,
    certified: bool,
}

impl PartialEq for CremonaMap {
    /// Equality in the Cremona group: canonical tuples agree.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.components == other.components
    }
}

impl Eq for CremonaMap {}

fn first_coeff(comps: &[Poly]) -> Option<&Scalar> {
    comps.iter().find_map(|c| c.leading().map(|(_, c)| c))
}

fn is_normalized(comps: &[Poly]) -> bool {
    first_coeff(comps).is_some_and(Scalar::is_one)
}

impl CremonaMap {
    /// Normalizes a tuple (and optional inverse tuple); the result is uncertified.
    pub fn normalize(tuple: &RawTuple) -> Result<Self> {
        Self::from_parts(tuple.components.clone(), None)
    }

    pub fn from_parts(components: Vec<Poly>, inverse: Option<Vec<Poly>>) -> Result<Self> {
        let tuple = RawTuple::new(components)?;
        let comps = tuple.normalize()?;
        let inverse = match inverse {
            Some(inv) => {
                let inv_tuple = RawTuple::new(inv)?;
                if inv_tuple.n() != tuple.n() || inv_tuple.components[0].field() != comps[0].field() {
                    return Err(CremonaError::DimensionMismatch);
                }
                Some(inv_tuple.normalize()?)
            }
            None => None,
        };
        Ok(Self::assemble(comps, inverse, false))
    }

    fn assemble(components: Vec<Poly>, inverse: Option<Vec<Poly>>, certified: bool) -> Self {
        let degree = components
            .iter()
            .find_map(Poly::homogeneous_degree)
            .expect("normalized tuple");
        debug_assert!(is_normalized(&components));
        CremonaMap { n: components.len() - 1, degree, components, inverse, certified }
    }

    /// Builds a map with an inverse and verifies the certificate.
    pub fn certified(components: Vec<Poly>, inverse: Vec<Poly>) -> Result<Self> {
        let mut f = Self::from_parts(components, Some(inverse))?;
        if !f.verify_certificate()? {
            return Err(CremonaError::InvalidTuple("inverse certificate does not verify".into()));
        }
        f.certified = true;
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.components[0].field()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn inverse_components(&self) -> Option<&[Poly]> {
        self.inverse.as_deref()
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn is_identity(&self) -> bool {
        self.degree == 1
            && self
                .components
                .iter()
                .enumerate()
                .all(|(i, c)| *c == Poly::var(self.field(), self.n + 1, i))
    }

    pub fn is_linear(&self) -> bool {
        self.degree == 1
    }

    /// Drops any inverse and certification.
    pub fn without_inverse(&self) -> Self {
        CremonaMap { inverse: None, certified: false, ..self.clone() }
    }

    /// Attaches an inverse tuple (uncertified until verified).
    pub fn with_inverse(&self, inverse: Vec<Poly>) -> Result<Self> {
        Self::from_parts(self.components.clone(), Some(inverse))
    }

    /// The inverse map, carrying `self` as its certificate.
    pub fn inverse(&self) -> Result<Self> {
        let inv = self.inverse.clone().ok_or(CremonaError::MissingInverse)?;
        Ok(Self::assemble(inv, Some(self.components.clone()), self.certified))
    }

    // ---- constructors ----

    pub fn identity(field: Field, n: usize) -> Self {
        let comps: Vec<Poly> = (0..=n).map(|i| Poly::var(field, n + 1, i)).collect();
        Self::assemble(comps.clone(), Some(comps), true)
    }

    pub fn linear_components(m: &Matrix) -> Vec<Poly> {
        let nv = m.cols();
        (0..m.rows())
            .map(|i| {
                Poly::from_terms(
                    m.field(),
                    nv,
                    (0..nv).map(|k| {
                        let mut e = vec![0; nv];
                        e[k] = 1;
                        (e, m.get(i, k).clone())
                    }),
                )
                .expect("arity")
            })
            .collect()
    }

    /// The automorphism `x -> M x`.
    pub fn linear(m: &ProjMatrix) -> Self {
        let comps = Self::linear_components(m.lift());
        let inv = Self::linear_components(m.inverse().lift());
        let mut f = Self::from_parts(comps, Some(inv)).expect("invertible matrix gives a map");
        f.certified = true;
        f
    }

    /// Matrix of a degree-one map.
    pub fn to_matrix(&self) -> Option<ProjMatrix> {
        if !self.is_linear() {
            return None;
        }
        let m = self.n + 1;
        let rows = self
            .components
            .iter()
            .map(|c| {
                (0..m)
                    .map(|k| {
                        c.coeff(&crate::poly::Monomial::var(m, k))
                            .cloned()
                            .unwrap_or_else(|| Scalar::zero(self.field()))
                    })
                    .collect()
            })
            .collect();
        ProjMatrix::new(Matrix::from_rows(rows).ok()?).ok()
    }

    /// `[prod_{j != 0} x_j : ... : prod_{j != n} x_j]`, an involution of degree n.
    pub fn standard_involution(field: Field, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(CremonaError::InvalidParameter("n must be at least 1".into()));
        }
        let comps: Vec<Poly> = (0..=n)
            .map(|i| {
                let exps = (0..=n).map(|j| u32::from(j != i)).collect();
                Poly::from_terms(field, n + 1, [(exps, Scalar::one(field))]).expect("arity")
            })
            .collect();
        Self::certified(comps.clone(), comps)
    }

    /// `[x0 : a x1 : x2 / a : x3 : ... : xn]`.
    pub fn scaling_g_a(a: &Scalar, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(CremonaError::InvalidParameter("g_a needs n >= 3".into()));
        }
        if a.is_zero() {
            return Err(CremonaError::InvalidParameter("a must be nonzero".into()));
        }
        let field = a.field();
        let mut diag = vec![Scalar::one(field); n + 1];
        diag[1] = a.clone();
        diag[2] = a.inv()?;
        Ok(Self::linear(&ProjMatrix::new(Matrix::diagonal(&diag))?))
    }

    /// `[x0^2 : x0 x1 : x1 x2 : x0 x3 : ... : x0 xn]`, i.e. `x2 -> x2 x1 / x0`.
    pub fn dejonquieres_h(field: Field, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(CremonaError::InvalidParameter("h needs n >= 3".into()));
        }
        let x = |i| Poly::var(field, n + 1, i);
        let mut comps = vec![x(0).mul(&x(0)), x(0).mul(&x(1)), x(1).mul(&x(2))];
        let mut inv = vec![x(0).mul(&x(1)), x(1).mul(&x(1)), x(0).mul(&x(2))];
        for i in 3..=n {
            comps.push(x(0).mul(&x(i)));
            inv.push(x(1).mul(&x(i)));
        }
        Self::certified(comps, inv)
    }

    /// The map fixing `[0:1:0:...]` and `[0:0:1:0:...]`:
    /// `x0 -> (x0 (x1 + lambda x2) + x1 x2) / (x1 + x2)`, other coordinates kept.
    pub fn twoderivatives_gadget(lambda: &Scalar, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(CremonaError::InvalidParameter("the gadget needs n >= 2".into()));
        }
        if lambda.is_zero() {
            return Err(CremonaError::InvalidParameter("lambda must be nonzero".into()));
        }
        let field = lambda.field();
        let x = |i| Poly::var(field, n + 1, i);
        let num = x(1).add(&x(2).scale(lambda));
        let den = x(1).add(&x(2));
        let b = x(1).mul(&x(2));
        let mut comps = vec![x(0).mul(&num).add(&b)];
        let mut inv = vec![x(0).mul(&den).sub(&b)];
        for i in 1..=n {
            comps.push(x(i).mul(&den));
            inv.push(x(i).mul(&num));
        }
        Self::certified(comps, inv)
    }

    // ---- group law ----

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(CremonaError::DimensionMismatch);
        }
        if self.field() != other.field() {
            return Err(CremonaError::FieldMismatch);
        }
        let comps = substitute_all(&self.components, &other.components)?;
        let comps = normalize_composite(comps)?;
        let inverse = match (&self.inverse, &other.inverse) {
            (Some(fi), Some(gi)) => Some(normalize_composite(substitute_all(gi, fi)?)?),
            _ => None,
        };
        let certified = self.certified && other.certified && inverse.is_some();
        Ok(Self::assemble(comps, inverse, certified))
    }

    /// Checks that both composites with the stored inverse are the identity.
    pub fn verify_certificate(&self) -> Result<bool> {
        let inv = self.inverse.as_ref().ok_or(CremonaError::MissingInverse)?;
        Ok(is_identity_multiple(&substitute_all(&self.components, inv)?)
            && is_identity_multiple(&substitute_all(inv, &self.components)?))
    }

    // ---- local behaviour ----

    pub fn evaluate(&self, p: &ProjPoint) -> Result<Evaluation> {
        if p.n() != self.n || p.field() != self.field() {
            return Err(CremonaError::DimensionMismatch);
        }
        let vals = evaluate_tuple(&self.components, p.coords())?;
        Ok(match vals.iter().all(Scalar::is_zero) {
            true => Evaluation::Indeterminate,
            false => Evaluation::Point(ProjPoint::new(vals)?),
        })
    }

    /// Chart Jacobian at `p` together with the image point.
    pub fn chart_jacobian(&self, p: &ProjPoint) -> Result<(ProjPoint, Matrix)> {
        if p.n() != self.n || p.field() != self.field() {
            return Err(CremonaError::DimensionMismatch);
        }
        let field = self.field();
        let m = self.n + 1;
        let image = evaluate_tuple(&self.components, p.coords())?;
        if image.iter().all(Scalar::is_zero) {
            return Err(CremonaError::IndeterminateAtPoint);
        }
        let q = ProjPoint::new(image.clone())?;
        let scale = image[q.chart_index()].clone();
        let mut hom = Matrix::zeros(field, m, m);
        for (i, c) in self.components.iter().enumerate() {
            for k in 0..m {
                hom.set(i, k, c.partial_derivative(k).evaluate(p.coords())?);
            }
        }
        let bp = chart_frame(p);
        let bq = chart_frame(&q);
        let k = bq.mul(&hom).mul(&bp.inverse()?);
        let inv_scale = scale.inv()?;
        let mut jac = Matrix::zeros(field, self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                jac.set(i, j, k.get(i + 1, j + 1) * &inv_scale);
            }
        }
        Ok((q, jac))
    }

    /// Projective linear map `p -> f(p)` with the same chart Jacobian and no
    /// translation part, or `None` when the Jacobian is singular.
    pub fn derivative_between(&self, p: &ProjPoint) -> Result<(ProjPoint, Option<ProjMatrix>)> {
        let (q, jac) = self.chart_jacobian(p)?;
        if jac.det()?.is_zero() {
            return Ok((q, None));
        }
        let block = block_linear(&jac);
        let d = chart_frame(&q).inverse()?.mul(&block).mul(&chart_frame(p));
        Ok((q, Some(ProjMatrix::new(d)?)))
    }

    pub fn derivative_at_fixed_point(&self, p: &ProjPoint) -> Result<Derivative> {
        let (q, d) = self.derivative_between(p)?;
        if &q != p {
            return Err(CremonaError::NotFixed);
        }
        Ok(match d {
            Some(m) => Derivative::Linear(m),
            None => Derivative::Singular,
        })
    }

    pub fn is_local_iso_at(&self, p: &ProjPoint) -> Result<bool> {
        let inverse = self.inverse()?;
        let Evaluation::Point(q) = self.evaluate(p)? else {
            return Ok(false);
        };
        match inverse.evaluate(&q)? {
            Evaluation::Point(back) if &back == p => {}
            _ => return Ok(false),
        }
        let (_, jac) = self.chart_jacobian(p)?;
        Ok(!jac.det()?.is_zero())
    }

    // ---- text ----

    /// Parses `[p0 : ... : pn]` with an optional `;; inverse=[...]` clause.
    pub fn parse(field: Field, n: usize, s: &str) -> Result<Self> {
        let (main, inverse) = split_inverse_clause(s)?;
        let comps = parse_tuple(field, n, main)?;
        let inv = inverse.map(|t| parse_tuple(field, n, t)).transpose()?;
        Self::from_parts(comps, inv)
    }
}

pub(crate) fn split_inverse_clause(s: &str) -> Result<(&str, Option<&str>)> {
    match s.split_once(";;") {
        None => Ok((s, None)),
        Some((main, rest)) => {
            let rest = rest.trim();
            let inv = rest
                .strip_prefix("inverse")
                .map(str::trim_start)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| CremonaError::Parse("expected `inverse=[...]`".into()))?;
            Ok((main, Some(inv)))
        }
    }
}

pub(crate) fn bracket_parts(s: &str) -> Result<Vec<&str>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| CremonaError::Parse(format!("expected a bracketed tuple, got {s:?}")))?;
    Ok(inner.split(':').collect())
}

fn parse_tuple(field: Field, n: usize, s: &str) -> Result<Vec<Poly>> {
    let parts = bracket_parts(s)?;
    if parts.len() != n + 1 {
        return Err(CremonaError::ArityMismatch { expected: n + 1, found: parts.len() });
    }
    parts.into_iter().map(|p| parse_poly(field, n, p)).collect()
}

pub(crate) fn write_tuple<T: fmt::Display>(f: &mut fmt::Formatter<'_>, comps: &[T]) -> fmt::Result {
    write!(f, "[")?;
    for (i, c) in comps.iter().enumerate() {
        if i > 0 {
            write!(f, " : ")?;
        }
        write!(f, "{c}")?;
    }
    write!(f, "]")
}

impl fmt::Display for CremonaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.components)?;
        if let Some(inv) = &self.inverse {
            write!(f, " ;; inverse=")?;
            write_tuple(f, inv)?;
        }
        Ok(())
    }
}

/// `outer(inner)` up to a common constant factor.
pub(crate) fn substitute_all(outer: &[Poly], inner: &[Poly]) -> Result<Vec<Poly>> {
    substitute_tuple(outer, inner)
}

fn normalize_composite(comps: Vec<Poly>) -> Result<Vec<Poly>> {
    if comps.iter().all(Poly::is_zero) {
        return Err(CremonaError::DegenerateComposition);
    }
    RawTuple::new(comps)?.normalize()
}

/// True when `comps = G * (x0, ..., xn)` for a nonzero `G`, i.e. the tuple
/// normalizes to the identity.
pub(crate) fn is_identity_multiple(comps: &[Poly]) -> bool {
    let Some(c0) = comps.first() else { return false };
    if c0.is_zero() {
        return false;
    }
    let (field, nv) = (c0.field(), c0.nvars());
    let x0 = Poly::var(field, nv, 0);
    comps
        .iter()
        .enumerate()
        .skip(1)
        .all(|(i, c)| c.mul(&x0) == c0.mul(&Poly::var(field, nv, i)))
}

fn evaluate_tuple(comps: &[Poly], point: &[Scalar]) -> Result<Vec<Scalar>> {
    comps.iter().map(|c| c.evaluate(point)).collect()
}

/// Linear change of coordinates `B` with `B p = e0`: swap the chart
/// coordinate into position 0, then clear the remaining coordinates.
pub fn chart_frame(p: &ProjPoint) -> Matrix {
    let field = p.field();
    let m = p.coords().len();
    let j = p.chart_index();
    let mut perm = Matrix::identity(field, m);
    if j != 0 {
        perm.set(0, 0, Scalar::zero(field));
        perm.set(j, j, Scalar::zero(field));
        perm.set(0, j, Scalar::one(field));
        perm.set(j, 0, Scalar::one(field));
    }
    let moved = perm.apply(p.coords());
    let mut clear = Matrix::identity(field, m);
    for (i, c) in moved.iter().enumerate().skip(1) {
        clear.set(i, 0, -c);
    }
    clear.mul(&perm)
}

/// `diag(1, J)`.
pub(crate) fn block_linear(jac: &Matrix) -> Matrix {
    let n = jac.rows();
    let mut out = Matrix::identity(jac.field(), n + 1);
    for i in 0..n {
        for j in 0..n {
            out.set(i + 1, j + 1, jac.get(i, j).clone());
        }
    }
    out
}
