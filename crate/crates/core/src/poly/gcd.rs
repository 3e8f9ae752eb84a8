//! Multivariate gcd over a field.
//!
//! Recursive content / primitive-part reduction: pick a main variable, view
//! both inputs as univariate polynomials over the ring of the remaining
//! variables, split off contents (recursively) and run the subresultant
//! remainder sequence on the primitive parts. A cheap evaluation test proves
//! coprimality up front in the common case.

use super::modular::modular_gcd;
use super::{Monomial, Poly};
use crate::error::{CremonaError, Result};
use crate::scalar::{Field, Scalar};
use crate::upoly::UPoly;

/// Gcd of a nonempty list, normalized so its leading coefficient is 1.
/// The gcd of an all-zero list is 0.
pub fn multi_gcd(fs: &[Poly]) -> Result<Poly> {
    let first = fs
        .first()
        .ok_or_else(|| CremonaError::InvalidParameter("gcd of an empty list".into()))?;
    if fs.iter().any(|f| f.field != first.field || f.nvars != first.nvars) {
        return Err(CremonaError::DomainMismatch);
    }
    let nonzero: Vec<Poly> = fs.iter().filter(|f| !f.is_zero()).cloned().collect();
    if first.field == Field::Rationals && nonzero.len() > 1 {
        if let Some(g) = modular_gcd(&nonzero) {
            return Ok(g);
        }
    }
    Ok(gcd_list(fs.to_vec()).monic())
}

pub(crate) fn gcd_list(polys: Vec<Poly>) -> Poly {
    let (field, nvars) = (polys[0].field, polys[0].nvars);
    let mut polys: Vec<Poly> = polys.into_iter().filter(|p| !p.is_zero()).collect();
    if polys.is_empty() {
        return Poly::zero(field, nvars);
    }

    let mut exps = polys[0].monomial_content().expect("nonzero").exps;
    for p in &polys[1..] {
        let m = p.monomial_content().expect("nonzero");
        for (a, b) in exps.iter_mut().zip(m.exps) {
            *a = (*a).min(b);
        }
    }
    let content = Monomial::new(exps);
    let content_poly = Poly::monomial(field, content.clone(), Scalar::one(field));
    if content.degree > 0 {
        for p in polys.iter_mut() {
            *p = p.div_monomial(&content);
        }
    }
    if polys.iter().any(|p| p.is_constant()) {
        return content_poly;
    }
    if polys.len() == 1 {
        return content_poly.mul(&polys[0]);
    }

    // A variable missing from one input cannot occur in the gcd; split the
    // others along it.
    if let Some(v) = (0..nvars).find(|&v| {
        let used = polys.iter().filter(|p| p.uses_var(v)).count();
        used > 0 && used < polys.len()
    }) {
        let mut split = Vec::new();
        for p in polys {
            if p.uses_var(v) {
                split.extend(p.coefficients_in(v).into_iter().filter(|c| !c.is_zero()));
            } else {
                split.push(p);
            }
        }
        return content_poly.mul(&gcd_list(split));
    }

    if certify_coprime(&polys) {
        return content_poly;
    }

    polys.sort_by_key(|p| (p.total_degree(), p.num_terms()));
    let g = if polys.len() > 2 {
        let combo = combine(&polys[1..]);
        let g = gcd2(&polys[0], &combo);
        if polys[1..].iter().all(|p| p.div_exact(&g).is_some()) {
            g
        } else {
            fold_gcd(&polys)
        }
    } else {
        gcd2(&polys[0], &polys[1])
    };
    content_poly.mul(&g)
}

fn fold_gcd(polys: &[Poly]) -> Poly {
    let mut g = polys[0].clone();
    for p in &polys[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd2(&g, p);
    }
    g
}

fn small_constant(field: Field, k: u64) -> Scalar {
    match field {
        Field::Rationals => Scalar::from_i64(field, k as i64),
        Field::Prime(p) => Scalar::from_i64(field, (k % (p as u64 - 1) + 1) as i64),
    }
}

fn combine(polys: &[Poly]) -> Poly {
    let field = polys[0].field;
    polys
        .iter()
        .enumerate()
        .fold(Poly::zero(field, polys[0].nvars), |acc, (k, p)| {
            acc.add(&p.scale(&small_constant(field, k as u64 + 1)))
        })
}

/// Proves `gcd = 1` by specializing all but one variable: if the univariate
/// images are coprime for every variable (at a point where a leading
/// coefficient survives), the gcd has degree 0 in every variable.
fn certify_coprime(polys: &[Poly]) -> bool {
    let (field, nvars) = (polys[0].field, polys[0].nvars);
    let vars: Vec<usize> = (0..nvars).filter(|&v| polys.iter().any(|p| p.uses_var(v))).collect();
    'vars: for &v in &vars {
        let split: Vec<Vec<Poly>> = polys.iter().map(|p| p.coefficients_in(v)).collect();
        for attempt in 0..6u64 {
            let point: Vec<Scalar> = (0..nvars)
                .map(|j| small_constant(field, 3 + 5 * attempt + 2 * j as u64 + attempt * j as u64))
                .collect();
            let eval = |c: &Poly| c.evaluate(&point).expect("arity");
            if eval(split[0].last().expect("nonzero")).is_zero() {
                continue;
            }
            let mut g = UPoly::zero(field);
            for coeffs in &split {
                let image = UPoly::from_coeffs(field, coeffs.iter().map(eval).collect());
                g = g.gcd(&image);
                if g.degree() == Some(0) {
                    continue 'vars;
                }
            }
            return false;
        }
        return false;
    }
    true
}

// Univariate polynomials over the ring of the other variables, low degree first.
type Uni = Vec<Poly>;

fn trim(u: &mut Uni) {
    while u.last().is_some_and(Poly::is_zero) {
        u.pop();
    }
}

fn uni_deg(u: &Uni) -> usize {
    u.len() - 1
}

fn prem(a: &Uni, b: &Uni) -> Uni {
    let d = uni_deg(b);
    let lcb = b.last().expect("nonzero divisor");
    let mut r = a.clone();
    let mut steps = (uni_deg(a) + 1).saturating_sub(d);
    while !r.is_empty() && uni_deg(&r) >= d {
        let lr = r.last().expect("nonempty").clone();
        let shift = uni_deg(&r) - d;
        for c in r.iter_mut() {
            *c = c.mul(lcb);
        }
        for (j, bc) in b.iter().enumerate() {
            r[j + shift] = r[j + shift].sub(&bc.mul(&lr));
        }
        trim(&mut r);
        steps -= 1;
    }
    if steps > 0 && !r.is_empty() {
        let f = lcb.pow(steps as u32);
        for c in r.iter_mut() {
            *c = c.mul(&f);
        }
    }
    r
}

fn uni_div_exact(u: &Uni, d: &Poly) -> Uni {
    u.iter()
        .map(|c| c.div_exact(d).expect("subresultant division is exact"))
        .collect()
}

fn primitive_part(u: &Uni) -> Uni {
    let content = gcd_list(u.clone());
    uni_div_exact(u, &content)
}

fn gcd2(a: &Poly, b: &Poly) -> Poly {
    let (field, nvars) = (a.field, a.nvars);
    if a.is_zero() || b.is_zero() {
        return if a.is_zero() { b.clone() } else { a.clone() };
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(field, nvars);
    }
    let common: Vec<usize> = (0..nvars).filter(|&v| a.uses_var(v) && b.uses_var(v)).collect();
    if common.is_empty() {
        return gcd_list(vec![a.clone(), b.clone()]);
    }
    let v = *common
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .expect("nonempty");
    if common.len() < (0..nvars).filter(|&w| a.uses_var(w) || b.uses_var(w)).count() {
        return gcd_list(vec![a.clone(), b.clone()]);
    }

    let ua = a.coefficients_in(v);
    let ub = b.coefficients_in(v);
    let ca = gcd_list(ua.clone());
    let cb = gcd_list(ub.clone());
    let content = gcd_list(vec![ca.clone(), cb.clone()]);
    let mut pa = uni_div_exact(&ua, &ca);
    let mut pb = uni_div_exact(&ub, &cb);
    if uni_deg(&pa) < uni_deg(&pb) {
        std::mem::swap(&mut pa, &mut pb);
    }

    let one = Poly::one(field, nvars);
    let mut g = one.clone();
    let mut h = one.clone();
    let last = loop {
        let delta = (uni_deg(&pa) - uni_deg(&pb)) as u32;
        let r = prem(&pa, &pb);
        if r.is_empty() {
            break pb;
        }
        if uni_deg(&r) == 0 {
            return content;
        }
        let divisor = g.mul(&h.pow(delta));
        pa = pb;
        pb = uni_div_exact(&r, &divisor);
        g = pa.last().expect("nonzero").clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g.pow(delta).div_exact(&h.pow(delta - 1)).expect("exact"),
        };
    };
    let pp = primitive_part(&last);
    let xv = Poly::var(field, nvars, v);
    let mut out = Poly::zero(field, nvars);
    for c in pp.iter().rev() {
        out = out.mul(&xv).add(c);
    }
    content.mul(&out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(Field::Rationals, 2, s).unwrap()
    }

    #[test]
    fn monomial_gcd() {
        let g = multi_gcd(&[p("x0^2*x1*x2"), p("x0*x1^2*x2"), p("x0*x1*x2^2")]).unwrap();
        assert_eq!(g, p("x0*x1*x2"));
    }

    #[test]
    fn gcd_with_zero() {
        let f = p("2*x0*x1 + 4*x2^2");
        assert_eq!(multi_gcd(&[f.clone(), Poly::zero(Field::Rationals, 3)]).unwrap(), f.monic());
        assert!(multi_gcd(&[Poly::zero(Field::Rationals, 3)]).unwrap().is_zero());
    }

    #[test]
    fn coprime_linear_forms() {
        assert_eq!(multi_gcd(&[p("x0+x1"), p("x0+x2")]).unwrap(), p("1"));
    }

    #[test]
    fn shared_factor() {
        let common = p("x0^2 - 3*x1*x2 + x2^2");
        let a = common.mul(&p("x0 + 2*x1"));
        let b = common.mul(&p("x1^2 - x0*x2"));
        let c = common.mul(&p("x2 - 7*x0"));
        assert_eq!(multi_gcd(&[a, b, c]).unwrap(), common.monic());
    }

    #[test]
    fn nonmonomial_common_factor_two_vars() {
        let common = p("x1 + x2");
        let a = common.mul(&p("x0*x1"));
        let b = common.mul(&p("x0*x2 + x1^2"));
        assert_eq!(multi_gcd(&[a, b]).unwrap(), common);
    }

    #[test]
    fn prime_field_gcd() {
        let f5 = Field::prime(5).unwrap();
        let q = |s| parse_poly(f5, 2, s).unwrap();
        let common = q("x0 + 3*x1*x2");
        let g = multi_gcd(&[common.mul(&q("x0^2+x2")), common.mul(&q("x1 - x0"))]).unwrap();
        assert_eq!(g, common.monic());
    }

    #[test]
    fn proportional_inputs_cancelling_in_combination() {
        let g = multi_gcd(&[p("15*x2+10"), p("-12*x2-8"), p("6*x2+4")]).unwrap();
        assert_eq!(g, p("x2 + 2/3"));
    }
}
