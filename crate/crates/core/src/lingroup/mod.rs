//! Linear groups: transvection words for SL, straight-line families in the
//! transvection parameters, PSL membership, and finite PGL2 tables.

mod finite;

use std::fmt;

pub use finite::{pgl2_enumerate, FiniteGroupTable, SmallField};

use crate::error::{CremonaError, Result};
use crate::family::Family;
use crate::map::{CremonaMap, ProjPoint};
use crate::matrix::{Matrix, ProjMatrix};
use crate::poly::ParamPoly;
use crate::scalar::{nth_power_class, Field, Scalar};
use crate::upoly::UPoly;

/// The elementary matrix `I + lambda e_{i,j}` of size `m` (0-based indices).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transvection {
    pub m: usize,
    pub i: usize,
    pub j: usize,
    pub lambda: Scalar,
}

impl Transvection {
    pub fn new(m: usize, i: usize, j: usize, lambda: Scalar) -> Result<Self> {
        if i == j || i >= m || j >= m {
            return Err(CremonaError::InvalidParameter(format!("bad transvection indices ({i}, {j})")));
        }
        Ok(Transvection { m, i, j, lambda })
    }

    pub fn is_padding(&self) -> bool {
        self.lambda.is_zero()
    }

    pub fn to_matrix(&self) -> Matrix {
        let mut out = Matrix::identity(self.lambda.field(), self.m);
        out.set(self.i, self.j, self.lambda.clone());
        out
    }

    pub fn inverse(&self) -> Self {
        Transvection { lambda: -&self.lambda, ..self.clone() }
    }
}

impl fmt::Display for Transvection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.lambda)
    }
}

/// An ordered product of transvections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransvectionWord {
    pub m: usize,
    pub factors: Vec<Transvection>,
}

impl TransvectionWord {
    pub fn product(&self, field: Field) -> Matrix {
        self.factors
            .iter()
            .fold(Matrix::identity(field, self.m), |acc, t| apply_right(&acc, t))
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Factors with nonzero parameter.
    pub fn essential(&self) -> impl Iterator<Item = &Transvection> {
        self.factors.iter().filter(|t| !t.is_padding())
    }
}

impl fmt::Display for TransvectionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, t) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "]")
    }
}

/// `M (I + lambda e_{ij})`: adds `lambda` times column `i` to column `j`.
fn apply_right(m: &Matrix, t: &Transvection) -> Matrix {
    let mut out = m.clone();
    if t.lambda.is_zero() {
        return out;
    }
    for r in 0..m.rows() {
        let v = m.get(r, t.j) + &(m.get(r, t.i) * &t.lambda);
        out.set(r, t.j, v);
    }
    out
}

/// Uniform word length for `SL_m`.
pub fn word_length(m: usize) -> usize {
    m * (m - 1) + 4 * (m - 1)
}

/// `diag(a, 1/a)` in rows `k, k+1` as four transvections.
fn diagonal_factors(m: usize, k: usize, a: &Scalar) -> Result<Vec<Transvection>> {
    let one = Scalar::one(a.field());
    Ok(vec![
        Transvection::new(m, k, k + 1, a - &one)?,
        Transvection::new(m, k + 1, k, one.clone())?,
        Transvection::new(m, k, k + 1, &a.inv()? - &one)?,
        Transvection::new(m, k + 1, k, -a)?,
    ])
}

/// Writes a determinant-one matrix as a product of exactly `word_length(m)`
/// transvections (trailing factors are `lambda = 0` padding).
pub fn sl_decompose(m: &Matrix) -> Result<TransvectionWord> {
    if !m.is_square() || m.rows() < 2 {
        return Err(CremonaError::SizeMismatch);
    }
    if !m.det()?.is_one() {
        return Err(CremonaError::DeterminantNotOne);
    }
    let size = m.rows();
    let field = m.field();
    let one = Scalar::one(field);
    let mut a = m.clone();
    let mut ops: Vec<Transvection> = Vec::new();
    let mut op = |a: &mut Matrix, target: usize, source: usize, c: Scalar| -> Result<()> {
        if !c.is_zero() {
            a.add_row_multiple(target, source, &c);
            ops.push(Transvection::new(size, target, source, c)?);
        }
        Ok(())
    };

    for k in 0..size - 1 {
        let pivot = a.get(k, k).clone();
        if !pivot.is_one() {
            match (k + 1..size).find(|&r| !a.get(r, k).is_zero()) {
                Some(r) => {
                    let c = &(&one - &pivot) / a.get(r, k);
                    op(&mut a, k, r, c)?;
                }
                None if k + 2 < size => {
                    op(&mut a, k + 1, k, one.clone())?;
                    let c = &(&one - &pivot) / &pivot;
                    op(&mut a, k, k + 1, c)?;
                }
                None => break,
            }
        }
        for r in k + 1..size {
            let c = -a.get(r, k);
            op(&mut a, r, k, c)?;
        }
    }
    for j in (1..size).rev() {
        let d = a.get(j, j).clone();
        for i in 0..j {
            let c = -&(a.get(i, j) / &d);
            op(&mut a, i, j, c)?;
        }
    }

    let mut factors: Vec<Transvection> = ops.iter().map(Transvection::inverse).collect();
    let last = a.get(size - 2, size - 2).clone();
    if !last.is_one() {
        factors.extend(diagonal_factors(size, size - 2, &last)?);
    }
    debug_assert!(factors.len() <= word_length(size));
    while factors.len() < word_length(size) {
        factors.push(Transvection::new(size, 0, 1, Scalar::zero(field))?);
    }
    Ok(TransvectionWord { m: size, factors })
}

/// Square matrix with entries in `k[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamMatrix {
    rows: Vec<Vec<UPoly>>,
}

impl ParamMatrix {
    pub fn constant(m: &Matrix) -> Self {
        ParamMatrix {
            rows: m.to_rows().into_iter().map(|r| r.into_iter().map(UPoly::constant).collect()).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &UPoly {
        &self.rows[i][j]
    }

    pub fn field(&self) -> Field {
        self.rows[0][0].field()
    }

    /// `self (I + c e_{ij})`.
    fn mul_transvection(&mut self, i: usize, j: usize, c: &UPoly) {
        for row in self.rows.iter_mut() {
            row[j] = row[j].add(&row[i].mul(c));
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(UPoly::zero(self.field()), |acc, k| {
                            acc.add(&self.rows[i][k].mul(&other.rows[k][j]))
                        })
                    })
                    .collect()
            })
            .collect();
        ParamMatrix { rows }
    }

    pub fn specialize(&self, a: &Scalar) -> Matrix {
        Matrix::from_rows(self.rows.iter().map(|r| r.iter().map(|e| e.eval(a)).collect()).collect())
            .expect("square")
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> UPoly {
        let n = self.size();
        let field = self.field();
        let mut a = self.rows.clone();
        let mut sign = false;
        let mut prev = UPoly::one(field);
        for k in 0..n - 1 {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return UPoly::zero(field);
            };
            if p != k {
                a.swap(p, k);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                    a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign { d.neg() } else { d }
    }

    /// Linear forms `sum_k N_ik(t) x_k`.
    pub fn components(&self) -> Vec<ParamPoly> {
        let n = self.size();
        let field = self.field();
        self.rows
            .iter()
            .map(|row| {
                row.iter().enumerate().fold(ParamPoly::zero(field, n), |acc, (k, c)| {
                    acc.add(&ParamPoly::var(field, n, k).mul_coeff(c))
                })
            })
            .collect()
    }

    /// The family of a linear map given by a degree-one family, if any.
    pub fn from_family(f: &Family) -> Option<Self> {
        if f.x_degree() != 1 {
            return None;
        }
        let m = f.n() + 1;
        let field = f.field();
        let rows = f
            .components()
            .iter()
            .map(|c| {
                (0..m)
                    .map(|k| {
                        c.coeff(&crate::poly::Monomial::var(m, k))
                            .cloned()
                            .unwrap_or_else(|| UPoly::zero(field))
                    })
                    .collect()
            })
            .collect();
        Some(ParamMatrix { rows })
    }
}

/// `N(t) = A prod_k (I + t lambda_k e_{i_k j_k})` where the word decomposes
/// `A^{-1} B`, together with the inverse `N(t)^{-1}`.
pub fn psl_path_matrices(a: &Matrix, b: &Matrix) -> Result<(ParamMatrix, ParamMatrix)> {
    if !a.is_square() || a.rows() != b.rows() || !b.is_square() {
        return Err(CremonaError::SizeMismatch);
    }
    if !a.det()?.is_one() || !b.det()?.is_one() {
        return Err(CremonaError::DeterminantNotOne);
    }
    let field = a.field();
    let word = sl_decompose(&a.inverse()?.mul(b))?;
    let mut n = ParamMatrix::constant(a);
    let mut inv = ParamMatrix::constant(&Matrix::identity(field, a.rows()));
    let t = UPoly::t(field);
    for f in word.essential() {
        n.mul_transvection(f.i, f.j, &t.scale(&f.lambda));
    }
    for f in word.essential().collect::<Vec<_>>().into_iter().rev() {
        inv.mul_transvection(f.i, f.j, &t.scale(&-&f.lambda));
    }
    let inv = inv.mul(&ParamMatrix::constant(&a.inverse()?));
    if !n.det().is_one() {
        return Err(CremonaError::DeterminantNotOne);
    }
    Ok((n, inv))
}

/// A linear family in SL from `A` (at `t = 0`) to `B` (at `t = 1`).
pub fn psl_path(a: &Matrix, b: &Matrix) -> Result<Family> {
    let (n, inv) = psl_path_matrices(a, b)?;
    Family::from_parts(n.components(), inv.components())
}

/// Determinant class of an element of PGL: the determinant of the canonical
/// lift and whether it is an `m`-th power (`m` the matrix size).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetClass {
    pub det: Scalar,
    pub in_psl: bool,
    pub root: Option<Scalar>,
}

pub fn det_class(p: &ProjMatrix) -> Result<DetClass> {
    let det = p.lift().det()?;
    let class = nth_power_class(&det, p.size() as u32)?;
    Ok(DetClass { det, in_psl: class.is_nth_power, root: class.witness })
}

/// A product `M` of transvections with `[M q] = [p]` (empty when `p = q`).
pub fn transvection_to_point(q: &ProjPoint, p: &ProjPoint) -> Result<TransvectionWord> {
    if q.n() != p.n() || q.field() != p.field() {
        return Err(CremonaError::DimensionMismatch);
    }
    let m = q.n() + 1;
    let field = q.field();
    let (qc, pc) = (q.coords(), p.coords());
    let mut factors = Vec::new();
    if q == p {
        return Ok(TransvectionWord { m, factors });
    }
    let i = q.chart_index();
    let (s, extra) = if pc[i].is_zero() {
        let k = p.chart_index();
        (Scalar::one(field), Some(Transvection::new(m, i, k, -&(&qc[i] / &pc[k]))?))
    } else {
        (&qc[i] / &pc[i], None)
    };
    factors.extend(extra);
    for j in (0..m).filter(|&j| j != i) {
        let c = &(&(&s * &pc[j]) - &qc[j]) / &qc[i];
        if !c.is_zero() {
            factors.push(Transvection::new(m, j, i, c)?);
        }
    }
    Ok(TransvectionWord { m, factors })
}

/// The automorphism of a transvection word.
pub fn word_map(word: &TransvectionWord, field: Field) -> Result<CremonaMap> {
    Ok(CremonaMap::linear(&ProjMatrix::new(word.product(field))?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(Q, rows).unwrap()
    }

    #[test]
    fn four_factor_identity() {
        for (num, den) in [(2, 1), (3, 1), (-1, 1), (1, 2)] {
            let l = Scalar::ratio(Q, num, den).unwrap();
            let word = TransvectionWord { m: 2, factors: diagonal_factors(2, 0, &l).unwrap() };
            let expected = Matrix::diagonal(&[l.clone(), l.inv().unwrap()]);
            assert_eq!(word.product(Q), expected);
            let decomposed = sl_decompose(&expected).unwrap();
            let essential: Vec<_> = decomposed.essential().cloned().collect();
            assert_eq!(essential, word.essential().cloned().collect::<Vec<_>>());
        }
    }

    #[test]
    fn identity_word_is_padding() {
        let w = sl_decompose(&Matrix::identity(Q, 3)).unwrap();
        assert_eq!(w.len(), word_length(3));
        assert!(w.factors.iter().all(Transvection::is_padding));
    }

    #[test]
    fn roundtrips() {
        for m in [
            mat(&[&[2, 1], &[1, 1]]),
            mat(&[&[0, 1], &[-1, 0]]),
            mat(&[&[0, 0, 1], &[0, 1, 0], &[-1, 0, 0]]),
            mat(&[&[3, 0, 0], &[0, 1, 0], &[0, 0, 1]]).mul(&Matrix::diagonal(&[
                Scalar::one(Q),
                Scalar::one(Q),
                Scalar::ratio(Q, 1, 3).unwrap(),
            ])),
            Matrix::diagonal(&[
                Scalar::from_i64(Q, 2),
                Scalar::one(Q),
                Scalar::one(Q),
                Scalar::ratio(Q, 1, 2).unwrap(),
            ]),
        ] {
            let w = sl_decompose(&m).unwrap();
            assert_eq!(w.len(), word_length(m.rows()));
            assert_eq!(w.product(Q), m);
        }
        assert_eq!(sl_decompose(&mat(&[&[2, 0], &[0, 1]])), Err(CremonaError::DeterminantNotOne));
    }

    #[test]
    fn paths() {
        let id = Matrix::identity(Q, 3);
        let e12 = mat(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let fam = psl_path(&id, &e12).unwrap();
        assert_eq!(fam.to_string(), "[x0 + (t)*x1 : x1 : x2] ;; inverse=[x0 + (-t)*x1 : x1 : x2]");
        let constant = psl_path(&id, &id).unwrap();
        assert!(constant.is_constant());
        let a = mat(&[&[2, 1, 0], &[1, 1, 0], &[0, 3, 1]]);
        let b = mat(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let (n, inv) = psl_path_matrices(&a, &b).unwrap();
        assert!(n.det().is_one());
        assert!(n.mul(&inv).specialize(&Scalar::from_i64(Q, 5)).is_identity());
        let fam = psl_path(&a, &b).unwrap();
        let pa = CremonaMap::linear(&ProjMatrix::new(a).unwrap());
        let pb = CremonaMap::linear(&ProjMatrix::new(b).unwrap());
        assert_eq!(fam.specialize(&Scalar::zero(Q)).unwrap(), pa);
        assert_eq!(fam.specialize(&Scalar::one(Q)).unwrap(), pb);
        assert!(ParamMatrix::from_family(&fam).unwrap().det().is_constant());
    }

    #[test]
    fn det_classes() {
        let p = |rows: &[&[i64]]| ProjMatrix::new(mat(rows)).unwrap();
        assert!(det_class(&p(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap().in_psl);
        let c = det_class(&p(&[&[8, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert!(c.in_psl);
        assert_eq!(c.root, Some(Scalar::ratio(Q, 1, 4).unwrap()));
        assert!(!det_class(&p(&[&[2, 0], &[0, 1]])).unwrap().in_psl);
        assert!(!det_class(&p(&[&[1, 0], &[0, 2]])).unwrap().in_psl);
        let f5 = Field::prime(5).unwrap();
        let m = ProjMatrix::new(Matrix::from_i64(f5, &[&[4, 0], &[0, 1]]).unwrap()).unwrap();
        assert!(det_class(&m).unwrap().in_psl);
    }

    #[test]
    fn moving_points() {
        let pt = |c: &[i64]| ProjPoint::from_i64(Q, c).unwrap();
        let w = transvection_to_point(&pt(&[1, 0, 0]), &pt(&[1, 1, 0])).unwrap();
        assert!(w.factors.contains(&Transvection::new(3, 1, 0, Scalar::one(Q)).unwrap()));
        assert!(transvection_to_point(&pt(&[1, 2, 3]), &pt(&[1, 2, 3])).unwrap().is_empty());
        let cases = [([1, 0, 0], [0, 0, 1]), ([0, 1, 2], [3, -1, 0]), ([0, 0, 1], [0, 1, 0]), ([2, 1, 1], [1, 1, 1])];
        for (q, p) in cases {
            let (q, p) = (pt(&q), pt(&p));
            let w = transvection_to_point(&q, &p).unwrap();
            assert!(w.len() <= 2 * 3);
            let img = ProjPoint::new(w.product(Q).apply(q.coords())).unwrap();
            assert_eq!(img, p);
        }
    }
}
