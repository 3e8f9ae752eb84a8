//! PGL2 over the fields with at most nine elements, as explicit tables.

use std::collections::HashMap;

use crate::error::{CremonaError, Result};

/// A field with `q <= 9` elements. Elements are `0..q`, encoding the
/// coefficient vector `a0 + a1 p + a2 p^2` of a polynomial in the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallField {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl SmallField {
    pub fn new(q: u32) -> Result<Self> {
        // (p, k, low coefficients c with x^k = c0 + c1 x + ...)
        let (p, k, reduce): (usize, usize, &[usize]) = match q {
            2 | 3 | 5 | 7 => (q as usize, 1, &[]),
            4 => (2, 2, &[1, 1]),
            8 => (2, 3, &[1, 1, 0]),
            9 => (3, 2, &[2, 0]),
            _ => return Err(CremonaError::UnsupportedFieldSize(q)),
        };
        let q = q as usize;
        let digits = |e: usize| -> Vec<usize> { (0..k).map(|i| e / p.pow(i as u32) % p).collect() };
        let encode = |v: &[usize]| -> u8 { v.iter().rev().fold(0, |acc, &d| acc * p + d) as u8 };
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&sum);
                if k == 1 {
                    mul[a * q + b] = (a * b % p) as u8;
                    continue;
                }
                let mut prod = vec![0usize; 2 * k - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for deg in (k..prod.len()).rev() {
                    let c = prod[deg];
                    prod[deg] = 0;
                    for (i, r) in reduce.iter().enumerate() {
                        prod[deg - k + i] = (prod[deg - k + i] + c * r) % p;
                    }
                }
                mul[a * q + b] = encode(&prod[..k]);
            }
        }
        Ok(SmallField { q, add, mul })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        (0..self.q as u8).find(|&b| self.add(a, b) == 0).expect("additive inverse")
    }

    pub fn inv(&self, a: u8) -> Option<u8> {
        (1..self.q as u8).find(|&b| self.mul(a, b) == 1)
    }

    pub fn is_square(&self, a: u8) -> bool {
        (0..self.q as u8).any(|b| self.mul(b, b) == a)
    }
}

type Mat2 = [u8; 4];

/// PGL2(F_q): canonical matrices (first nonzero entry 1) and the
/// multiplication table on their indices.
#[derive(Clone, Debug)]
pub struct FiniteGroupTable {
    field: SmallField,
    elements: Vec<Mat2>,
    table: Vec<u16>,
    identity: usize,
}

fn normalize(field: &SmallField, m: Mat2) -> Mat2 {
    let first = *m.iter().find(|&&e| e != 0).expect("invertible");
    let inv = field.inv(first).expect("nonzero");
    m.map(|e| field.mul(e, inv))
}

fn det(field: &SmallField, m: &Mat2) -> u8 {
    field.add(field.mul(m[0], m[3]), field.neg(field.mul(m[1], m[2])))
}

pub fn pgl2_enumerate(q: u32) -> Result<FiniteGroupTable> {
    let field = SmallField::new(q)?;
    let qs = q as u8;
    let mut elements = Vec::new();
    for a in 0..qs {
        for b in 0..qs {
            for c in 0..qs {
                for d in 0..qs {
                    let m = [a, b, c, d];
                    let lead = m.iter().find(|&&e| e != 0);
                    if lead == Some(&1) && det(&field, &m) != 0 {
                        elements.push(m);
                    }
                }
            }
        }
    }
    let index: HashMap<Mat2, usize> = elements.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let size = elements.len();
    let mut table = vec![0u16; size * size];
    for (i, x) in elements.iter().enumerate() {
        for (j, y) in elements.iter().enumerate() {
            let f = &field;
            let prod = [
                f.add(f.mul(x[0], y[0]), f.mul(x[1], y[2])),
                f.add(f.mul(x[0], y[1]), f.mul(x[1], y[3])),
                f.add(f.mul(x[2], y[0]), f.mul(x[3], y[2])),
                f.add(f.mul(x[2], y[1]), f.mul(x[3], y[3])),
            ];
            table[i * size + j] = index[&normalize(&field, prod)] as u16;
        }
    }
    let identity = index[&[1, 0, 0, 1]];
    Ok(FiniteGroupTable { field, elements, table, identity })
}

impl FiniteGroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn field(&self) -> &SmallField {
        &self.field
    }

    pub fn element(&self, i: usize) -> [u8; 4] {
        self.elements[i]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.mul(a, b) == self.identity).expect("group element")
    }

    /// Elements whose canonical lift has square determinant, i.e. PSL2.
    pub fn psl_elements(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&i| self.field.is_square(det(&self.field, &self.elements[i])))
            .collect()
    }

    fn conjugacy_class(&self, g: usize, inverses: &[usize]) -> Vec<usize> {
        let mut class: Vec<usize> = (0..self.order())
            .map(|h| self.mul(self.mul(inverses[h], g), h))
            .collect();
        class.sort_unstable();
        class.dedup();
        class
    }

    /// Size of the subgroup generated by `gens`.
    fn generated_order(&self, gens: &[usize]) -> usize {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count
    }

    /// True when the normal closure of every non-identity element is the
    /// whole group.
    pub fn is_simple(&self) -> bool {
        let inverses: Vec<usize> = (0..self.order()).map(|g| self.inverse(g)).collect();
        let mut covered = vec![false; self.order()];
        covered[self.identity] = true;
        for g in 0..self.order() {
            if covered[g] {
                continue;
            }
            let class = self.conjugacy_class(g, &inverses);
            for &c in &class {
                covered[c] = true;
            }
            if self.generated_order(&class) != self.order() {
                return false;
            }
        }
        self.order() > 1
    }
}
