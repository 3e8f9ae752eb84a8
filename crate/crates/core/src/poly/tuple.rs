//! Substitution of one tuple of forms into another, up to a common nonzero
//! constant. Over Q both tuples are first scaled to integer coefficients so
//! the expansion runs in Z.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{Monomial, Poly};
use crate::error::{CremonaError, Result};
use crate::scalar::{Field, Scalar};

type ZPoly = BTreeMap<Monomial, BigInt>;

fn to_integer_tuple(polys: &[Poly]) -> Vec<ZPoly> {
    let lcm = polys
        .iter()
        .flat_map(|p| p.terms.values())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.as_rational().expect("rational").denom()));
    polys
        .iter()
        .map(|p| {
            p.terms
                .iter()
                .map(|(m, c)| {
                    let r = c.as_rational().expect("rational");
                    (m.clone(), r.numer() * (&lcm / r.denom()))
                })
                .collect()
        })
        .collect()
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut out = ZPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let e = out.entry(ma.mul(mb)).or_insert_with(BigInt::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn zone(nvars: usize) -> ZPoly {
    ZPoly::from([(Monomial::one(nvars), BigInt::one())])
}

/// `outer_i(inner)` for every `i`, up to one common nonzero constant factor.
pub(crate) fn substitute_tuple(outer: &[Poly], inner: &[Poly]) -> Result<Vec<Poly>> {
    let Some(first) = outer.first() else { return Ok(Vec::new()) };
    if first.field != Field::Rationals {
        return outer.par_iter().map(|c| c.substitute(inner)).collect();
    }
    if outer.iter().any(|p| p.nvars != inner.len()) {
        return Err(CremonaError::ArityMismatch { expected: inner.len(), found: first.nvars });
    }
    let nvars = inner.first().map_or(0, |p| p.nvars);
    if inner.iter().any(|p| p.field != Field::Rationals || p.nvars != nvars) {
        return Err(CremonaError::DomainMismatch);
    }
    let zouter = to_integer_tuple(outer);
    let zinner = to_integer_tuple(inner);
    let powers: Vec<Vec<ZPoly>> = zinner
        .par_iter()
        .enumerate()
        .map(|(i, img)| {
            let top = outer.iter().map(|p| p.degree_in(i)).max().unwrap_or(0) as usize;
            let mut pw = vec![zone(nvars)];
            for e in 1..=top {
                let next = zmul(&pw[e - 1], img);
                pw.push(next);
            }
            pw
        })
        .collect();
    let out = zouter
        .par_iter()
        .map(|poly| {
            let mut acc = ZPoly::new();
            for (m, c) in poly {
                let mut prod: Option<ZPoly> = None;
                for (i, &e) in m.exps.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let pw = &powers[i][e as usize];
                    prod = Some(match prod {
                        None => pw.clone(),
                        Some(p) => zmul(&p, pw),
                    });
                }
                for (mm, cc) in prod.unwrap_or_else(|| zone(nvars)) {
                    let e = acc.entry(mm).or_insert_with(BigInt::zero);
                    *e += c * cc;
                }
            }
            let terms = acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, Scalar::Q(BigRational::from_integer(c))))
                .collect();
            Poly { field: Field::Rationals, nvars, terms }
        })
        .collect();
    Ok(out)
}
