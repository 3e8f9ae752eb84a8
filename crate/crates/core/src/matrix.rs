//! Dense exact matrices and projective linear maps.

use std::fmt;

use crate::error::{CremonaError, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, entries: vec![Scalar::zero(field); rows * cols] }
    }

    pub fn identity(field: Field, m: usize) -> Self {
        let mut out = Self::zeros(field, m, m);
        for i in 0..m {
            out.set(i, i, Scalar::one(field));
        }
        out
    }

    pub fn diagonal(diag: &[Scalar]) -> Self {
        let field = diag[0].field();
        let mut out = Self::zeros(field, diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            out.set(i, i, d.clone());
        }
        out
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(CremonaError::SizeMismatch);
        }
        let field = rows[0][0].field();
        let entries: Vec<Scalar> = rows.into_iter().flatten().collect();
        if entries.iter().any(|e| e.field() != field) {
            return Err(CremonaError::FieldMismatch);
        }
        Ok(Matrix { field, rows: r, cols: c, entries })
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_i64(field, v)).collect())
                .collect(),
        )
    }

    /// Parses `a,b;c,d` (rows separated by `;`, entries by `,`).
    pub fn parse(field: Field, s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|row| row.split(',').map(|e| Scalar::parse(field, e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(CremonaError::SizeMismatch);
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + &(a * other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("matrix size mismatch")
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Scalar::zero(self.field), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j { e.is_one() } else { e.is_zero() }
                })
            })
    }

    /// `row_target += c * row_source`.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, c: &Scalar) {
        for j in 0..self.cols {
            let v = self.get(target, j) + &(c * self.get(source, j));
            self.set(target, j, v);
        }
    }

    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(CremonaError::SizeMismatch);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Scalar::one(self.field);
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Ok(Scalar::zero(self.field));
            };
            if piv != col {
                for j in 0..n {
                    a.entries.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a.get(col, col).clone();
            det = &det * &p;
            let pinv = p.inv()?;
            for r in col + 1..n {
                let f = a.get(r, col) * &pinv;
                if !f.is_zero() {
                    a.add_row_multiple(r, col, &-f);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(CremonaError::SizeMismatch);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(self.field, n);
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(CremonaError::SingularMatrix)?;
            if piv != col {
                for j in 0..n {
                    a.entries.swap(piv * n + j, col * n + j);
                    inv.entries.swap(piv * n + j, col * n + j);
                }
            }
            let pinv = a.get(col, col).inv()?;
            for j in 0..n {
                let v = a.get(col, j) * &pinv;
                a.set(col, j, v);
                let w = inv.get(col, j) * &pinv;
                inv.set(col, j, w);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if !f.is_zero() {
                    a.add_row_multiple(r, col, &-&f);
                    inv.add_row_multiple(r, col, &-f);
                }
            }
        }
        Ok(inv)
    }

    /// Matrix with column vectors laid side by side.
    pub fn from_columns(cols: &[Vec<Scalar>]) -> Result<Self> {
        Ok(Self::from_rows(cols.to_vec())?.transpose())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ";")?;
            }
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

/// An element of PGL: an invertible square matrix up to scalars, stored with
/// its first nonzero entry (row-major) equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjMatrix {
    lift: Matrix,
}

impl ProjMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(CremonaError::SizeMismatch);
        }
        if m.det()?.is_zero() {
            return Err(CremonaError::SingularMatrix);
        }
        let first = m.entries.iter().find(|e| !e.is_zero()).expect("invertible").clone();
        Ok(ProjMatrix { lift: m.scale(&first.inv()?) })
    }

    pub fn identity(field: Field, m: usize) -> Self {
        ProjMatrix { lift: Matrix::identity(field, m) }
    }

    /// The canonical representative (first nonzero entry 1).
    pub fn lift(&self) -> &Matrix {
        &self.lift
    }

    pub fn size(&self) -> usize {
        self.lift.rows
    }

    pub fn field(&self) -> Field {
        self.lift.field
    }

    pub fn is_identity(&self) -> bool {
        self.lift.is_identity()
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Self::new(self.lift.try_mul(&other.lift)?)
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.lift.inverse().expect("invertible")).expect("invertible")
    }
}

impl fmt::Display for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = Matrix::from_i64(Field::Rationals, &[&[2, 1, 0], &[1, 1, 4], &[0, 3, 1]]).unwrap();
        let d = m.det().unwrap();
        assert_eq!(d, Scalar::from_i64(Field::Rationals, -23));
        assert!(m.mul(&m.inverse().unwrap()).is_identity());
        let s = Matrix::from_i64(Field::Rationals, &[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(s.inverse(), Err(CremonaError::SingularMatrix));
    }

    #[test]
    fn projective_normalization() {
        let m = Matrix::from_i64(Field::Rationals, &[&[0, 2], &[4, 0]]).unwrap();
        let p = ProjMatrix::new(m).unwrap();
        assert_eq!(p.lift().to_string(), "0,1;2,0");
        assert_eq!(Matrix::parse(Field::Rationals, "0,1;2,0").unwrap(), *p.lift());
    }
}
