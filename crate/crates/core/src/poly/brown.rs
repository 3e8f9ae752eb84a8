//! Brown's dense modular gcd over F_p for a word-size prime `p`.
//!
//! One variable at a time is evaluated at points of F_p, the images are
//! combined by interpolation and the candidate is accepted once it divides
//! both inputs. Unlucky points are detected by comparing leading monomials.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use super::Monomial;

pub(crate) type ModPoly = BTreeMap<Monomial, u64>;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn add_term(poly: &mut ModPoly, m: Monomial, c: u64, p: u64) {
    match poly.entry(m) {
        Entry::Occupied(mut o) => {
            let v = (*o.get() + c) % p;
            if v == 0 {
                o.remove();
            } else {
                *o.get_mut() = v;
            }
        }
        Entry::Vacant(slot) => {
            if c != 0 {
                slot.insert(c);
            }
        }
    }
}

fn with_exp(m: &Monomial, v: usize, e: u32) -> Monomial {
    let mut exps = m.exps.clone();
    exps[v] = e;
    Monomial::new(exps)
}

fn monic(f: &ModPoly, p: u64) -> ModPoly {
    let Some((_, &lc)) = f.iter().next_back() else { return f.clone() };
    let inv = inv_mod(lc, p);
    f.iter().map(|(m, c)| (m.clone(), mul_mod(*c, inv, p))).collect()
}

// ---- dense univariate helpers, low degree first ----

fn trim(u: &mut Vec<u64>) {
    while u.last() == Some(&0) {
        u.pop();
    }
}

fn uni_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = mul_mod(*r.last().expect("nonempty"), inv, p);
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - mul_mod(c, bj, p)) % p;
        }
        trim(&mut r);
    }
    r
}

fn uni_div(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut q = vec![0; a.len().saturating_sub(db)];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = mul_mod(*r.last().expect("nonempty"), inv, p);
        q[shift] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - mul_mod(c, bj, p)) % p;
        }
        trim(&mut r);
    }
    q
}

fn uni_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = uni_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lc) = a.last() {
        let inv = inv_mod(lc, p);
        a.iter_mut().for_each(|c| *c = mul_mod(*c, inv, p));
    }
    a
}

fn uni_eval(u: &[u64], x: u64, p: u64) -> u64 {
    u.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

fn uni_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    out
}

/// Coefficients in `x_v`, keyed by the monomial with `x_v` removed.
fn split(f: &ModPoly, v: usize) -> BTreeMap<Monomial, Vec<u64>> {
    let mut out: BTreeMap<Monomial, Vec<u64>> = BTreeMap::new();
    for (m, &c) in f {
        let e = m.exps[v] as usize;
        let entry = out.entry(with_exp(m, v, 0)).or_default();
        if entry.len() <= e {
            entry.resize(e + 1, 0);
        }
        entry[e] = c;
    }
    out
}

fn join(parts: &BTreeMap<Monomial, Vec<u64>>, v: usize) -> ModPoly {
    let mut out = ModPoly::new();
    for (m, u) in parts {
        for (e, &c) in u.iter().enumerate() {
            if c != 0 {
                out.insert(with_exp(m, v, e as u32), c);
            }
        }
    }
    out
}

fn evaluate(f: &ModPoly, v: usize, x: u64, p: u64) -> ModPoly {
    let mut out = ModPoly::new();
    for (m, &c) in f {
        let val = mul_mod(c, pow_mod(x, m.exps[v] as u64, p), p);
        let key = with_exp(m, v, 0);
        let e = out.entry(key).or_insert(0);
        *e = (*e + val) % p;
    }
    out.retain(|_, c| *c != 0);
    out
}

fn uses(f: &ModPoly, v: usize) -> bool {
    f.keys().any(|m| m.exps[v] > 0)
}

/// Exact division test: `f / g` when it exists.
pub(crate) fn divides(g: &ModPoly, f: &ModPoly, p: u64) -> bool {
    let Some((lm, &lc)) = g.iter().next_back() else { return false };
    let inv = inv_mod(lc, p);
    let mut rem = f.clone();
    while let Some((m, &c)) = rem.iter().next_back() {
        if !lm.divides(m) {
            return false;
        }
        let q = lm.quotient_of(m);
        let qc = mul_mod(c, inv, p);
        for (gm, &gc) in g {
            add_term(&mut rem, gm.mul(&q), p - mul_mod(gc, qc, p), p);
        }
    }
    true
}

/// Lagrange interpolation of the images through the points.
fn interpolate(points: &[u64], images: &[ModPoly], v: usize, p: u64) -> ModPoly {
    let k = points.len();
    let mut parts: BTreeMap<Monomial, Vec<u64>> = BTreeMap::new();
    for i in 0..k {
        // basis polynomial L_i(x) = prod_{j != i} (x - a_j) / (a_i - a_j)
        let mut basis = vec![1u64];
        let mut denom = 1u64;
        for j in 0..k {
            if j != i {
                basis = uni_mul(&basis, &[(p - points[j]) % p, 1], p);
                denom = mul_mod(denom, (points[i] + p - points[j]) % p, p);
            }
        }
        let scale = inv_mod(denom, p);
        for (m, &c) in &images[i] {
            let entry = parts.entry(m.clone()).or_insert_with(|| vec![0; k]);
            let f = mul_mod(c, scale, p);
            for (d, &b) in basis.iter().enumerate() {
                entry[d] = (entry[d] + mul_mod(f, b, p)) % p;
            }
        }
    }
    for u in parts.values_mut() {
        trim(u);
    }
    parts.retain(|_, u| !u.is_empty());
    join(&parts, v)
}

fn active_vars(a: &ModPoly, b: &ModPoly, nvars: usize) -> Vec<usize> {
    (0..nvars).filter(|&v| uses(a, v) || uses(b, v)).collect()
}

/// Monic gcd of two nonzero polynomials over F_p. `None` if the evaluation
/// points run out, which only happens for small primes.
pub(crate) fn gcd(a: &ModPoly, b: &ModPoly, nvars: usize, p: u64) -> Option<ModPoly> {
    let vars = active_vars(a, b, nvars);
    let one = || ModPoly::from([(Monomial::one(nvars), 1)]);
    if a.is_empty() {
        return Some(monic(b, p));
    }
    if b.is_empty() {
        return Some(monic(a, p));
    }
    let Some(&v) = vars.last() else { return Some(one()) };
    if a.keys().all(|m| m.degree == 0) || b.keys().all(|m| m.degree == 0) {
        return Some(one());
    }
    if vars.len() == 1 {
        let dense = |f: &ModPoly| split(f, v).remove(&Monomial::one(nvars)).unwrap_or_default();
        let g = uni_gcd(&dense(a), &dense(b), p);
        return Some(join(&BTreeMap::from([(Monomial::one(nvars), g)]), v));
    }

    let (sa, sb) = (split(a, v), split(b, v));
    let content = |s: &BTreeMap<Monomial, Vec<u64>>| s.values().fold(Vec::new(), |acc, u| uni_gcd(&acc, u, p));
    let (ca, cb) = (content(&sa), content(&sb));
    let g = uni_gcd(&ca, &cb, p);
    let strip = |s: &BTreeMap<Monomial, Vec<u64>>, c: &[u64]| -> BTreeMap<Monomial, Vec<u64>> {
        s.iter().map(|(m, u)| (m.clone(), uni_div(u, c, p))).collect()
    };
    let (pa, pb) = (strip(&sa, &ca), strip(&sb, &cb));
    let lead = |s: &BTreeMap<Monomial, Vec<u64>>| s.iter().next_back().expect("nonzero").1.clone();
    let (la, lb) = (lead(&pa), lead(&pb));
    let gamma = uni_gcd(&la, &lb, p);
    let (pa, pb) = (join(&pa, v), join(&pb, v));
    let deg_v = |s: &BTreeMap<Monomial, Vec<u64>>| s.values().map(|u| u.len() - 1).max().unwrap_or(0);
    let bound = deg_v(&split(&pa, v)).min(deg_v(&split(&pb, v))) + gamma.len() - 1;

    let with_content = |c: &ModPoly| -> ModPoly {
        let parts: BTreeMap<Monomial, Vec<u64>> =
            split(c, v).into_iter().map(|(m, u)| (m, uni_mul(&u, &g, p))).collect();
        monic(&join(&parts, v), p)
    };

    let mut points: Vec<u64> = Vec::new();
    let mut images: Vec<ModPoly> = Vec::new();
    let mut shape: Option<Monomial> = None;
    let limit = p.min(1 << 20);
    for x in 1..limit {
        if uni_eval(&la, x, p) == 0 || uni_eval(&lb, x, p) == 0 {
            continue;
        }
        let image = gcd(&evaluate(&pa, v, x, p), &evaluate(&pb, v, x, p), nvars, p)?;
        let lm = image.keys().next_back().expect("nonzero").clone();
        if lm.degree == 0 {
            return Some(with_content(&one()));
        }
        match &shape {
            Some(s) if lm > *s => continue,
            Some(s) if lm == *s => {}
            _ => {
                shape = Some(lm);
                points.clear();
                images.clear();
            }
        }
        let gx = uni_eval(&gamma, x, p);
        points.push(x);
        images.push(image.iter().map(|(m, c)| (m.clone(), mul_mod(*c, gx, p))).collect());
        if points.len() <= bound {
            continue;
        }
        let candidate = interpolate(&points, &images, v, p);
        let parts = split(&candidate, v);
        let c = content(&parts);
        let prim = join(&strip(&parts, &c), v);
        if divides(&prim, &pa, p) && divides(&prim, &pb, p) {
            return Some(with_content(&prim));
        }
    }
    None
}
