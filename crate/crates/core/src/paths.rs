//! Explicit families joining two Cremona maps over Q.

use std::fmt;

use crate::error::{CremonaError, Result};
use crate::family::{conj_limit, Family};
use crate::lingroup::{det_class, psl_path, transvection_to_point, word_map};
use crate::map::{CremonaMap, Evaluation, ProjPoint};
use crate::matrix::{Matrix, ProjMatrix};
use crate::scalar::{Field, Scalar};

/// Default largest coordinate height searched by [`find_local_iso_point`].
pub const DEFAULT_HEIGHT_BOUND: u64 = 64;

/// Position of `v` in the order `0, 1, -1, 2, -2, ...`.
fn value_at(k: u64) -> i64 {
    if k % 2 == 1 { k.div_ceil(2) as i64 } else { -((k / 2) as i64) }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Primitive integer points with first nonzero coordinate positive and
/// `lower < max |c| <= height`, ordered by the index of the first nonzero
/// coordinate, then lexicographically with values ordered `0, 1, -1, 2, -2, ...`.
fn points_of_height(n: usize, lower: u64, height: u64) -> impl Iterator<Item = Vec<i64>> {
    (0..=n).flat_map(move |lead| {
        let tail = n - lead;
        let radix = 2 * height + 1;
        let count = radix.pow(tail as u32);
        (1..=height as i64).flat_map(move |first| {
            (0..count).filter_map(move |mut code| {
                let mut coords = vec![0i64; n + 1];
                coords[lead] = first;
                for slot in (lead + 1..=n).rev() {
                    coords[slot] = value_at(code % radix);
                    code /= radix;
                }
                let top = coords.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
                let g = coords.iter().fold(0, |acc, c| gcd(acc, c.unsigned_abs()));
                (top > lower && g == 1).then_some(coords)
            })
        })
    })
}

/// Projective points of P^n over Q in search order, up to the given height.
fn search_points(n: usize, height_bound: u64) -> impl Iterator<Item = ProjPoint> {
    std::iter::successors(Some((0u64, 1u64)), |&(_, h)| Some((h, 2 * h)))
        .take_while(move |&(_, h)| h <= height_bound)
        .flat_map(move |(lower, h)| points_of_height(n, lower, h))
        .map(|c| ProjPoint::from_i64(Field::Rationals, &c).expect("nonzero point"))
}

fn require_rationals(field: Field) -> Result<()> {
    match field {
        Field::Rationals => Ok(()),
        Field::Prime(p) => Err(CremonaError::UnsupportedField(p)),
    }
}

/// First point, in height stages `1, 2, 4, ...`, at which `g` is a local isomorphism.
pub fn find_local_iso_point(g: &CremonaMap, height_bound: u64) -> Result<ProjPoint> {
    require_rationals(g.field())?;
    g.inverse()?;
    for p in search_points(g.n(), height_bound) {
        if g.is_local_iso_at(&p)? {
            return Ok(p);
        }
    }
    Err(CremonaError::SearchExhausted(height_bound))
}

/// Height bound for the search of a point whose conjugation limit stays in PSL.
const PSL_POINT_HEIGHT: u64 = 8;

/// Number of local-isomorphism points examined by that search.
const PSL_POINT_CANDIDATES: usize = 256;

/// The transvection product moving `h(p)` back to `p`.
fn return_map(h: &CremonaMap, p: &ProjPoint) -> Result<CremonaMap> {
    let q = h.evaluate(p)?.point().ok_or(CremonaError::IndeterminateAtPoint)?;
    word_map(&transvection_to_point(&q, p)?, h.field())
}

/// First local-isomorphism point `p` (searched up to a small height) at which
/// the derivative of `α ∘ h` has trivial determinant class.
fn find_psl_point(h: &CremonaMap) -> Result<Option<ProjPoint>> {
    let mut examined = 0;
    for p in search_points(h.n(), PSL_POINT_HEIGHT) {
        if examined == PSL_POINT_CANDIDATES {
            break;
        }
        if !h.is_local_iso_at(&p)? {
            continue;
        }
        examined += 1;
        let alpha = return_map(h, &p)?;
        let (q, dh) = linear_part(h, &p)?;
        let (_, da) = linear_part(&alpha, &q)?;
        if det_class(&da.compose(&dh)?)?.in_psl {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Linear derivative of `f` at `p` as a map `p -> f(p)`.
fn linear_part(f: &CremonaMap, p: &ProjPoint) -> Result<(ProjPoint, ProjMatrix)> {
    match f.derivative_between(p)? {
        (q, Some(m)) => Ok((q, m)),
        (_, None) => Err(CremonaError::NotLocalIso),
    }
}

/// Change of coordinates `B` with `[B p] = e0` and, when `q != p`, `[B q] = e1`.
fn two_point_frame(p: &ProjPoint, q: &ProjPoint) -> Result<Matrix> {
    let field = p.field();
    let m = p.n() + 1;
    let mut cols: Vec<Vec<Scalar>> = vec![p.coords().to_vec()];
    if q != p {
        cols.push(q.coords().to_vec());
    }
    for k in 0..m {
        if cols.len() == m {
            break;
        }
        let mut e = vec![Scalar::zero(field); m];
        e[k] = Scalar::one(field);
        cols.push(e);
        if !full_rank(&cols) {
            cols.pop();
        }
    }
    Matrix::from_columns(&cols)?.inverse()
}

/// Whether the given vectors are linearly independent.
fn full_rank(vectors: &[Vec<Scalar>]) -> bool {
    let mut rows: Vec<Vec<Scalar>> = vectors.to_vec();
    let width = rows[0].len();
    let mut rank = 0;
    for c in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, piv);
        let inv = rows[rank][c].inv().expect("nonzero");
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let f = &rows[i][c] * &inv;
                let pivot_row = rows[rank].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        rank += 1;
    }
    rank == vectors.len()
}

/// A transvection conjugate `α` (fixing `p` and `f(p)`) such that
/// `g = α^{-1} f^{-1} α f` fixes `p` with nontrivial derivative there.
pub fn commutator_fixer(f: &CremonaMap, p: &ProjPoint) -> Result<(ProjMatrix, CremonaMap)> {
    if f.is_identity() {
        return Err(CremonaError::InvalidParameter("commutator_fixer needs a nontrivial map".into()));
    }
    if !f.is_local_iso_at(p)? {
        return Err(CremonaError::NotLocalIso);
    }
    let field = f.field();
    let finv = f.inverse()?;
    let m = f.n() + 1;
    let (q, df) = linear_part(f, p)?;
    let (_, dfinv) = linear_part(&finv, &q)?;
    let frame = two_point_frame(p, &q)?;
    let frame_inv = frame.inverse()?;
    let fixed = if q == *p { 1 } else { 2 };
    for i in 0..m {
        for j in fixed..m {
            if i == j {
                continue;
            }
            for lambda in 1..=20 {
                let mut t = Matrix::identity(field, m);
                t.set(i, j, Scalar::from_i64(field, lambda));
                let alpha = ProjMatrix::new(frame_inv.mul(&t).mul(&frame))?;
                let alpha_inv = alpha.inverse();
                let chain = alpha_inv.compose(&dfinv)?.compose(&alpha)?.compose(&df)?;
                if chain.is_identity() {
                    continue;
                }
                let a = CremonaMap::linear(&alpha);
                let g = CremonaMap::linear(&alpha_inv).compose(&finv)?.compose(&a)?.compose(f)?;
                if g.evaluate(p)? != Evaluation::Point(p.clone()) || !g.is_local_iso_at(p)? {
                    continue;
                }
                match g.derivative_at_fixed_point(p)? {
                    crate::map::Derivative::Linear(d) if !d.is_identity() => return Ok((alpha, g)),
                    _ => continue,
                }
            }
        }
    }
    Err(CremonaError::NoSuitableAlpha)
}

/// One stage of a path construction and the family it contributes.
#[derive(Clone, Debug)]
pub enum PathStep {
    /// A straight line in transvection parameters from `from` to `to`.
    LinearPSLSegment { from: ProjMatrix, to: ProjMatrix, family: Family },
    /// `C^{-1}` for the two conjugation limits of the gadget with parameter `lambda`.
    DetClassGadgetSegment { lambda: Scalar, family: Family },
    /// `ρ(t) ∘ ρ(0)^{-1}` for the conjugation limit of `map` at `point`.
    ConjLimitSegment { map: CremonaMap, point: ProjPoint, family: Family },
    /// The constant family of `map`.
    ConstantConjugation { map: CremonaMap, family: Family },
}

impl PathStep {
    pub fn family(&self) -> &Family {
        match self {
            PathStep::LinearPSLSegment { family, .. }
            | PathStep::DetClassGadgetSegment { family, .. }
            | PathStep::ConjLimitSegment { family, .. }
            | PathStep::ConstantConjugation { family, .. } => family,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PathStep::LinearPSLSegment { .. } => "LinearPSLSegment",
            PathStep::DetClassGadgetSegment { .. } => "DetClassGadgetSegment",
            PathStep::ConjLimitSegment { .. } => "ConjLimitSegment",
            PathStep::ConstantConjugation { .. } => "ConstantConjugation",
        }
    }
}

impl fmt::Display for PathStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = self.family();
        write!(f, "{} (x-degree {}, t-degree {})", self.kind(), fam.x_degree(), fam.t_degree())?;
        match self {
            PathStep::LinearPSLSegment { from, to, .. } => write!(f, " from {from} to {to}"),
            PathStep::DetClassGadgetSegment { lambda, .. } => write!(f, " lambda = {lambda}"),
            PathStep::ConjLimitSegment { point, .. } => write!(f, " at {point}"),
            PathStep::ConstantConjugation { .. } => Ok(()),
        }
    }
}

/// Ordered construction record; the path is the product of the step families.
#[derive(Clone, Debug)]
pub struct PathPlan {
    pub n: usize,
    pub field: Field,
    pub steps: Vec<PathStep>,
}

impl PathPlan {
    fn new(n: usize, field: Field) -> Self {
        PathPlan { n, field, steps: Vec::new() }
    }

    /// Ordered product of the step families. Adjacent nonlinear families are
    /// multiplied first, before linear factors raise their degree in `t`.
    pub fn replay(&self) -> Result<Family> {
        let mut fams: Vec<Family> = self.steps.iter().map(|s| s.family().clone()).collect();
        if fams.is_empty() {
            return Family::constant(&CremonaMap::identity(self.field, self.n));
        }
        let mut i = 0;
        while i + 1 < fams.len() {
            if fams[i].x_degree() > 1 && fams[i + 1].x_degree() > 1 && !fams[i + 1].is_constant() {
                let right = fams.remove(i + 1);
                fams[i] = fams[i].product(&right)?;
            } else {
                i += 1;
            }
        }
        let mut rest = fams.into_iter();
        let first = rest.next().expect("nonempty");
        rest.try_fold(first, |acc, f| acc.product(&f))
    }

    pub fn count(&self, kind: &str) -> usize {
        self.steps.iter().filter(|s| s.kind() == kind).count()
    }
}

/// Determinant-one representative of an element of PSL.
fn sl_lift(m: &ProjMatrix) -> Result<Matrix> {
    let class = det_class(m)?;
    let root = class.root.filter(|_| class.in_psl).ok_or(CremonaError::DeterminantNotOne)?;
    Ok(m.lift().scale(&root.inv()?))
}

fn linear_segment(to: &ProjMatrix) -> Result<PathStep> {
    let field = to.field();
    let size = to.size();
    let family = psl_path(&Matrix::identity(field, size), &sl_lift(to)?)?;
    Ok(PathStep::LinearPSLSegment { from: ProjMatrix::identity(field, size), to: to.clone(), family })
}

fn constant_inverse(map: &CremonaMap) -> Result<Family> {
    Family::constant(&map.inverse()?)
}

/// Steps of a path from the identity to `h`.
pub fn linear_plan(h: &ProjMatrix) -> Result<PathPlan> {
    let field = h.field();
    let m = h.size();
    if m < 3 {
        return Err(CremonaError::InvalidParameter("linear paths need n >= 2".into()));
    }
    let mut plan = PathPlan::new(m - 1, field);
    if h.is_identity() {
        return Ok(plan);
    }
    let class = det_class(h)?;
    if class.in_psl {
        plan.steps.push(linear_segment(h)?);
        return Ok(plan);
    }
    let lambda = class.det;
    let gadget = CremonaMap::twoderivatives_gadget(&lambda, m - 1)?;
    let rho1 = conj_limit(&gadget, &ProjPoint::coordinate(field, m - 1, 1))?;
    let rho2 = conj_limit(&gadget, &ProjPoint::coordinate(field, m - 1, 2))?;
    let zero = Scalar::zero(field);
    let r1 = rho1.specialize(&zero)?;
    let r2 = rho2.specialize(&zero)?;
    let a = rho1.product(&constant_inverse(&r1)?)?;
    let b = rho2.product(&constant_inverse(&r2)?)?;
    let c_inv = b.inverse().product(&a)?;
    plan.steps.push(PathStep::DetClassGadgetSegment { lambda: lambda.clone(), family: c_inv });
    let m1 = r1.to_matrix().ok_or(CremonaError::DegenerateSpecialization("ρ1(0) is not linear".into()))?;
    plan.steps.push(linear_segment(&m1)?);

    let mut m2 = Matrix::identity(field, m);
    m2.set(0, 0, lambda.clone());
    m2.set(0, 1, Scalar::one(field));
    if Some(ProjMatrix::new(m2.clone())?) != r2.to_matrix() {
        return Err(CremonaError::DegenerateSpecialization("ρ2(0) differs from its expected form".into()));
    }
    let rest = m2.inverse()?.mul(h.lift());
    let to = ProjMatrix::new(rest.clone())?;
    let family = psl_path(&Matrix::identity(field, m), &rest)?;
    plan.steps.push(PathStep::LinearPSLSegment { from: ProjMatrix::identity(field, m), to, family });
    Ok(plan)
}

/// A family `ν` with `ν(0) = id` and `ν(1) = h`.
pub fn connect_linear(h: &ProjMatrix) -> Result<Family> {
    linear_plan(h)?.replay()
}

/// A family `ν` with `ν(0) = f` and `ν(1) = g`, and the plan that built it.
pub fn connect(f: &CremonaMap, g: &CremonaMap, height_bound: u64) -> Result<(Family, PathPlan)> {
    if f.n() != g.n() {
        return Err(CremonaError::DimensionMismatch);
    }
    if f.field() != g.field() {
        return Err(CremonaError::FieldMismatch);
    }
    require_rationals(f.field())?;
    if f.n() < 2 {
        return Err(CremonaError::InvalidParameter("connect needs n >= 2".into()));
    }
    let field = f.field();
    let h = g.compose(&f.inverse()?)?;
    let mut plan = PathPlan::new(f.n(), field);
    if !h.is_identity() {
        match h.to_matrix() {
            Some(m) => plan.steps.extend(linear_plan(&m)?.steps),
            None => {
                let p = match find_psl_point(&h)? {
                    Some(p) => p,
                    None => find_local_iso_point(&h, height_bound)?,
                };
                let alpha = return_map(&h, &p)?;
                let fixed = alpha.compose(&h)?;
                let rho = conj_limit(&fixed, &p)?;
                let r0 = rho.specialize(&Scalar::zero(field))?;
                let alpha_inv = alpha.inverse()?.to_matrix().expect("linear");
                plan.steps.extend(linear_plan(&alpha_inv)?.steps);
                plan.steps.push(PathStep::ConjLimitSegment {
                    map: fixed,
                    point: p,
                    family: rho.product(&constant_inverse(&r0)?)?,
                });
                plan.steps.extend(linear_plan(&r0.to_matrix().expect("linear"))?.steps);
            }
        }
    }
    plan.steps.push(PathStep::ConstantConjugation { map: f.clone(), family: Family::constant(f)? });
    let family = plan.replay()?;
    let ends = [Scalar::zero(field), Scalar::one(field)];
    if family.specialize_unverified(&ends[0])? != *f || family.specialize_unverified(&ends[1])? != *g {
        return Err(CremonaError::DegenerateSpecialization("path endpoints do not match".into()));
    }
    Ok((family, plan))
}
