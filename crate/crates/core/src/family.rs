//! One-parameter families of Cremona maps: tuples whose coefficients are
//! polynomials in `t`, together with an inverse tuple of the same shape.

use std::fmt;

use rayon::prelude::*;

use crate::error::{CremonaError, Result};
use crate::map::{
    bracket_parts, chart_frame, is_identity_multiple, split_inverse_clause, write_tuple, CremonaMap,
    Evaluation, ProjPoint,
};
use crate::lingroup::ParamMatrix;
use crate::matrix::Matrix;
use crate::poly::{multi_gcd, parse_param_poly, Coeff, MultiPoly, ParamPoly, Poly};
use crate::scalar::{Field, Scalar};
use crate::upoly::UPoly;

#[derive(Clone, Debug)]
pub struct Family {
    n: usize,
    components: Vec<ParamPoly>,
    inverse: Vec<ParamPoly>,
    sample_checked: Vec<Scalar>,
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.components == other.components && self.inverse == other.inverse
    }
}

impl Eq for Family {}

/// Outcome of checking one specialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleReport {
    pub t: Scalar,
    pub passed: bool,
    pub degree: Option<u32>,
    pub inverse_degree: Option<u32>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FamilyReport {
    pub samples: Vec<SampleReport>,
}

impl FamilyReport {
    pub fn all_passed(&self) -> bool {
        self.samples.iter().all(|s| s.passed)
    }
}

fn check_tuple(comps: &[ParamPoly]) -> Result<(Field, usize)> {
    if comps.len() < 2 {
        return Err(CremonaError::InvalidTuple("need at least two components".into()));
    }
    let (field, nvars) = (comps[0].field(), comps[0].nvars());
    if nvars != comps.len() {
        return Err(CremonaError::ArityMismatch { expected: comps.len(), found: nvars });
    }
    if comps.iter().any(|c| c.field() != field || c.nvars() != nvars) {
        return Err(CremonaError::DomainMismatch);
    }
    let degrees: Vec<u32> = comps.iter().filter(|c| !c.is_zero()).map(|c| {
        c.homogeneous_degree()
            .ok_or_else(|| CremonaError::InvalidTuple("component is not homogeneous in x".into()))
    }).collect::<Result<_>>()?;
    match degrees.first() {
        None => Err(CremonaError::ZeroTuple),
        Some(&d) if degrees.iter().any(|&e| e != d) => {
            Err(CremonaError::InvalidTuple("components have different degrees".into()))
        }
        Some(0) => Err(CremonaError::InvalidTuple("constant tuple".into())),
        Some(_) => Ok((field, nvars - 1)),
    }
}

/// Clears the common power of `t`, removes the `(t, x)`-content and makes the
/// leading coefficient monic in `t`.
pub(crate) fn normalize_family_tuple(comps: Vec<ParamPoly>) -> Result<Vec<ParamPoly>> {
    check_tuple(&comps)?;
    let e = comps.iter().filter_map(ParamPoly::t_valuation).min().expect("nonzero tuple");
    let mut comps: Vec<ParamPoly> = comps.iter().map(|c| c.divide_t_power(e)).collect();
    let flat: Vec<Poly> = comps.iter().map(ParamPoly::flatten).collect();
    let g = multi_gcd(&flat)?;
    if !g.is_constant() {
        comps = flat
            .iter()
            .map(|c| c.div_exact(&g).expect("gcd divides").into_param())
            .collect();
    }
    let lead = comps
        .iter()
        .find_map(|c| c.leading().map(|(_, c)| c.leading().expect("nonzero").clone()))
        .expect("nonzero tuple");
    let inv = lead.inv()?;
    Ok(comps.iter().map(|c| c.scale(&inv)).collect())
}

/// Normalization when the tuple can only carry a common factor in `t` alone.
fn normalize_t_content(comps: Vec<ParamPoly>) -> Result<Vec<ParamPoly>> {
    check_tuple(&comps)?;
    let field = comps[0].field();
    let g = comps
        .iter()
        .flat_map(|c| c.terms().map(|(_, u)| u.clone()).collect::<Vec<_>>())
        .fold(UPoly::zero(field), |acc, u| acc.gcd(&u));
    let comps: Vec<ParamPoly> = if g.is_constant() {
        comps
    } else {
        comps
            .iter()
            .map(|c| c.map_coeffs(|u| u.div_exact(&g).expect("gcd divides")))
            .collect()
    };
    let lead = comps
        .iter()
        .find_map(|c| c.leading().map(|(_, c)| c.leading().expect("nonzero").clone()))
        .expect("nonzero tuple");
    let inv = lead.inv()?;
    Ok(comps.iter().map(|c| c.scale(&inv)).collect())
}

/// Linear in `x` and invertible over `k(t)`.
fn is_invertible_linear(f: &Family) -> bool {
    f.x_degree() == 1 && ParamMatrix::from_family(f).is_some_and(|m| !m.det().is_zero())
}

fn substitute_param(outer: &[ParamPoly], inner: &[ParamPoly]) -> Result<Vec<ParamPoly>> {
    outer.iter().map(|c| c.substitute(inner)).collect()
}

fn lift_all(comps: &[Poly]) -> Vec<ParamPoly> {
    comps.iter().map(ParamPoly::lift).collect()
}

/// Components of `x -> M f(M' x)` for scalar matrices `M`, `M'`.
fn linear_conjugate<C: Coeff>(
    comps: &[MultiPoly<C>],
    left: &Matrix,
    right: &Matrix,
) -> Result<Vec<MultiPoly<C>>> {
    let inner: Vec<MultiPoly<C>> = CremonaMap::linear_components(right)
        .iter()
        .map(|c| c.map_coeffs(|s| C::from_scalar(s.clone())))
        .collect();
    let sub: Vec<MultiPoly<C>> = comps.iter().map(|c| c.substitute(&inner)).collect::<Result<_>>()?;
    let (field, nvars) = (comps[0].field(), comps[0].nvars());
    Ok((0..left.rows())
        .map(|i| {
            sub.iter().enumerate().fold(MultiPoly::zero(field, nvars), |acc, (k, c)| {
                let a = left.get(i, k);
                if a.is_zero() { acc } else { acc.add(&c.scale(a)) }
            })
        })
        .collect())
}

impl Family {
    /// Normalizes both tuples; the result carries no verified samples.
    pub fn from_parts(components: Vec<ParamPoly>, inverse: Vec<ParamPoly>) -> Result<Self> {
        let (field, n) = check_tuple(&components)?;
        let (inv_field, inv_n) = check_tuple(&inverse)?;
        if inv_n != n {
            return Err(CremonaError::DimensionMismatch);
        }
        if inv_field != field {
            return Err(CremonaError::FieldMismatch);
        }
        Ok(Family {
            n,
            components: normalize_family_tuple(components)?,
            inverse: normalize_family_tuple(inverse)?,
            sample_checked: Vec::new(),
        })
    }

    /// The family `t -> f`.
    pub fn constant(f: &CremonaMap) -> Result<Self> {
        let inv = f.inverse_components().ok_or(CremonaError::MissingInverse)?;
        Ok(Family {
            n: f.n(),
            components: lift_all(f.components()),
            inverse: lift_all(inv),
            sample_checked: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.components[0].field()
    }

    pub fn components(&self) -> &[ParamPoly] {
        &self.components
    }

    pub fn inverse_components(&self) -> &[ParamPoly] {
        &self.inverse
    }

    pub fn sample_checked(&self) -> &[Scalar] {
        &self.sample_checked
    }

    pub fn x_degree(&self) -> u32 {
        self.components.iter().find_map(ParamPoly::homogeneous_degree).expect("nonzero tuple")
    }

    pub fn inverse_x_degree(&self) -> u32 {
        self.inverse.iter().find_map(ParamPoly::homogeneous_degree).expect("nonzero tuple")
    }

    pub fn t_degree(&self) -> usize {
        self.components.iter().map(ParamPoly::t_degree).max().unwrap_or(0)
    }

    pub fn inverse_t_degree(&self) -> usize {
        self.inverse.iter().map(ParamPoly::t_degree).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.t_degree() == 0 && self.inverse_t_degree() == 0
    }

    fn specialize_parts(&self, a: &Scalar) -> Result<CremonaMap> {
        if a.field() != self.field() {
            return Err(CremonaError::FieldMismatch);
        }
        let comps = self.components.iter().map(|c| c.specialize(a)).collect();
        let inv = self.inverse.iter().map(|c| c.specialize(a)).collect();
        CremonaMap::from_parts(comps, Some(inv)).map_err(|e| match e {
            CremonaError::FieldMismatch => e,
            other => CremonaError::DegenerateSpecialization(format!("at t = {a}: {other}")),
        })
    }

    /// `t = a` with the specialized inverse attached but not checked.
    pub fn specialize_unverified(&self, a: &Scalar) -> Result<CremonaMap> {
        self.specialize_parts(a)
    }

    /// `t = a`, certified.
    pub fn specialize(&self, a: &Scalar) -> Result<CremonaMap> {
        let f = self.specialize_parts(a)?;
        let inv = f.inverse_components().expect("attached").to_vec();
        CremonaMap::certified(f.components().to_vec(), inv).map_err(|_| {
            CremonaError::DegenerateSpecialization(format!("certificate fails at t = {a}"))
        })
    }

    /// Pointwise composition `t -> self(t) ∘ other(t)`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(CremonaError::DimensionMismatch);
        }
        if self.field() != other.field() {
            return Err(CremonaError::FieldMismatch);
        }
        let comps = substitute_param(&self.components, &other.components)?;
        let inv = substitute_param(&other.inverse, &self.inverse)?;
        // composing with an invertible linear family creates no common factor in x
        let normalize = match is_invertible_linear(self) || is_invertible_linear(other) {
            true => normalize_t_content,
            false => normalize_family_tuple,
        };
        Ok(Family {
            n: self.n,
            components: normalize(comps)?,
            inverse: normalize(inv)?,
            sample_checked: Vec::new(),
        })
    }

    pub fn inverse(&self) -> Self {
        Family {
            n: self.n,
            components: self.inverse.clone(),
            inverse: self.components.clone(),
            sample_checked: self.sample_checked.clone(),
        }
    }

    /// Two-sided composite with the inverse normalizes to the identity over k(t).
    pub fn verify_symbolic(&self) -> Result<bool> {
        let check = |a: &[ParamPoly], b: &[ParamPoly]| -> Result<bool> {
            let flat: Vec<Poly> = substitute_param(a, b)?.iter().map(ParamPoly::flatten).collect();
            Ok(is_identity_multiple(&flat))
        };
        Ok(check(&self.components, &self.inverse)? && check(&self.inverse, &self.components)?)
    }

    fn check_sample(&self, a: &Scalar) -> SampleReport {
        match self.specialize(a) {
            Ok(f) => SampleReport {
                t: a.clone(),
                passed: true,
                degree: Some(f.degree()),
                inverse_degree: f.inverse().ok().map(|g| g.degree()),
                error: None,
            },
            Err(e) => SampleReport {
                t: a.clone(),
                passed: false,
                degree: self.specialize_unverified(a).ok().map(|f| f.degree()),
                inverse_degree: None,
                error: Some(e.to_string()),
            },
        }
    }

    /// Specializes at each sample (in parallel) and checks the certificate;
    /// passing samples are recorded in `sample_checked`.
    pub fn verify(&mut self, samples: &[Scalar]) -> FamilyReport {
        let reports: Vec<SampleReport> = samples.par_iter().map(|a| self.check_sample(a)).collect();
        for r in &reports {
            if r.passed && !self.sample_checked.contains(&r.t) {
                self.sample_checked.push(r.t.clone());
            }
        }
        FamilyReport { samples: reports }
    }

    /// Parses `[...] ;; inverse=[...]` where coefficients may involve `t`.
    pub fn parse(field: Field, n: usize, s: &str) -> Result<Self> {
        let (main, inverse) = split_inverse_clause(s)?;
        let inverse = inverse.ok_or(CremonaError::MissingInverse)?;
        let tuple = |s: &str| -> Result<Vec<ParamPoly>> {
            let parts = bracket_parts(s)?;
            if parts.len() != n + 1 {
                return Err(CremonaError::ArityMismatch { expected: n + 1, found: parts.len() });
            }
            parts.into_iter().map(|p| parse_param_poly(field, n, p)).collect()
        };
        Self::from_parts(tuple(main)?, tuple(inverse)?)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.components)?;
        write!(f, " ;; inverse=")?;
        write_tuple(f, &self.inverse)
    }
}

/// `x -> ν(t)^{-1} g ν(t) x` in the frame where `p = e0`, with
/// `ν(t) = [x0 : t x1 : ... : t xn]`.
fn scaled_conjugate(comps: &[Poly]) -> Result<Vec<ParamPoly>> {
    let (field, nvars) = (comps[0].field(), comps[0].nvars());
    let t = UPoly::t(field);
    let images: Vec<ParamPoly> = (0..nvars)
        .map(|i| {
            let x = ParamPoly::var(field, nvars, i);
            if i == 0 { x } else { x.mul_coeff(&t) }
        })
        .collect();
    let mut out = substitute_param(&lift_all(comps), &images)?;
    out[0] = out[0].mul_coeff(&t);
    Ok(out)
}

/// The family `ρ(t) = ν(t)^{-1} ∘ g ∘ ν(t)` around the fixed point `p`,
/// extended over `t = 0`, where it specializes to the derivative of `g` at `p`.
pub fn conj_limit(g: &CremonaMap, p: &ProjPoint) -> Result<Family> {
    let ginv = g.inverse()?;
    match g.evaluate(p)? {
        Evaluation::Point(q) if &q == p => {}
        _ => return Err(CremonaError::NotFixed),
    }
    if !g.is_local_iso_at(p)? {
        return Err(CremonaError::NotLocalIso);
    }
    let beta = chart_frame(p);
    let beta_inv = beta.inverse()?;
    let build = |f: &CremonaMap| -> Result<Vec<ParamPoly>> {
        let in_frame = linear_conjugate(f.components(), &beta, &beta_inv)?;
        let scaled = normalize_family_tuple(scaled_conjugate(&in_frame)?)?;
        linear_conjugate(&scaled, &beta_inv, &beta)
    };
    let mut rho = Family::from_parts(build(g)?, build(&ginv)?)?;
    let endpoints = [Scalar::zero(g.field()), Scalar::one(g.field())];
    let report = rho.verify(&endpoints);
    if !report.all_passed() {
        return Err(CremonaError::DegenerateSpecialization(
            "conjugation limit fails at an endpoint".into(),
        ));
    }
    Ok(rho)
}
