//! Sparse polynomials in the fixed variables `s, t, x, y, z, a, b`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::algebra::expr::{Evaluator, ParseError};
use crate::algebra::{Embedding, Fe, Field, Poly};
use crate::error::{Error, Result};

pub const NVARS: usize = 7;
pub const VAR_NAMES: [char; NVARS] = ['s', 't', 'x', 'y', 'z', 'a', 'b'];

pub const S: usize = 0;
pub const T: usize = 1;
pub const X: usize = 2;
pub const Y: usize = 3;
pub const Z: usize = 4;
pub const A: usize = 5;
pub const B: usize = 6;

pub type Mono = [u32; NVARS];

pub fn var_index(c: char) -> Option<usize> {
    VAR_NAMES.iter().position(|&v| v == c)
}

/// A polynomial over a finite field. Monomials are ordered lexicographically
/// with `s > t > x > y > z > a > b`.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    f: Field,
    terms: BTreeMap<Mono, Fe>,
}

impl MPoly {
    pub fn zero(f: &Field) -> MPoly {
        MPoly { f: f.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(c: &Fe) -> MPoly {
        let mut m = MPoly::zero(c.field());
        if !c.is_zero() {
            m.terms.insert([0; NVARS], c.clone());
        }
        m
    }

    pub fn one(f: &Field) -> MPoly {
        MPoly::constant(&f.one())
    }

    pub fn from_int(f: &Field, n: i64) -> MPoly {
        MPoly::constant(&f.from_int(n))
    }

    pub fn var(f: &Field, i: usize) -> MPoly {
        MPoly::monomial(&f.one(), &unit(i, 1))
    }

    pub fn monomial(c: &Fe, m: &Mono) -> MPoly {
        let mut out = MPoly::zero(c.field());
        if !c.is_zero() {
            out.terms.insert(*m, c.clone());
        }
        out
    }

    /// A univariate polynomial placed in variable `v`.
    pub fn from_poly(p: &Poly, v: usize) -> MPoly {
        let mut out = MPoly::zero(p.field());
        for (k, c) in p.coeffs().into_iter().enumerate() {
            if !c.is_zero() {
                out.terms.insert(unit(v, k as u32), c);
            }
        }
        out
    }

    pub fn field(&self) -> &Field {
        &self.f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Fe)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Fe {
        self.terms.get(m).cloned().unwrap_or_else(|| self.f.zero())
    }

    /// Lexicographically largest term.
    pub fn leading(&self) -> Option<(Mono, Fe)> {
        self.terms.last_key_value().map(|(m, c)| (*m, c.clone()))
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|m| m[v]).max()
    }

    /// Total degree with the given variable weights.
    pub fn weighted_degree(&self, w: &[u32; NVARS]) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().zip(w).map(|(e, k)| e * k).sum()).max()
    }

    pub fn uses(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m[v] > 0)
    }

    /// Univariate polynomial in `v`, if no other variable occurs.
    pub fn to_poly(&self, v: usize) -> Option<Poly> {
        let mut c = Vec::new();
        for (m, a) in &self.terms {
            if m.iter().enumerate().any(|(i, e)| i != v && *e > 0) {
                return None;
            }
            let k = m[v] as usize;
            if c.len() <= k {
                c.resize(k + 1, self.f.zero());
            }
            c[k] = a.clone();
        }
        Some(Poly::from_coeffs(&self.f, &c))
    }

    fn insert_add(&mut self, m: Mono, c: Fe) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                *old += &c;
                if old.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Fe) -> MPoly {
        let mut out = MPoly::zero(&self.f);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.terms.insert(*m, a * c);
        }
        out
    }

    pub fn mul_mono(&self, m: &Mono, c: &Fe) -> MPoly {
        let mut out = MPoly::zero(&self.f);
        if c.is_zero() {
            return out;
        }
        for (k, a) in &self.terms {
            out.terms.insert(mono_mul(k, m), a * c);
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut base = self.clone();
        let mut out = MPoly::one(&self.f);
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Partial derivative.
    pub fn derivative(&self, v: usize) -> MPoly {
        let mut out = MPoly::zero(&self.f);
        for (m, c) in &self.terms {
            if m[v] == 0 {
                continue;
            }
            let mut k = *m;
            k[v] -= 1;
            out.insert_add(k, c.scale_int(m[v] as i64));
        }
        out
    }

    /// Simultaneous substitution; `None` keeps the variable.
    pub fn subst(&self, subs: &[Option<MPoly>; NVARS]) -> MPoly {
        let mut cache: BTreeMap<(usize, u32), MPoly> = BTreeMap::new();
        let mut out = MPoly::zero(&self.f);
        for (m, c) in &self.terms {
            let mut keep = [0u32; NVARS];
            let mut term = MPoly::one(&self.f);
            for v in 0..NVARS {
                if m[v] == 0 {
                    continue;
                }
                match &subs[v] {
                    None => keep[v] = m[v],
                    Some(q) => {
                        let pw = cache.entry((v, m[v])).or_insert_with(|| q.pow(m[v]));
                        term = &term * pw;
                    }
                }
            }
            out = &out + &term.mul_mono(&keep, c);
        }
        out
    }

    /// Replaces `v` by the constant `c`, which may lie in an extension of
    /// the coefficient field reached by `emb`.
    pub fn eval_var(&self, v: usize, c: &Fe) -> MPoly {
        let mut subs: [Option<MPoly>; NVARS] = Default::default();
        subs[v] = Some(MPoly::constant(c));
        if c.field() == &self.f {
            self.subst(&subs)
        } else {
            let emb = Embedding::find(&self.f, c.field()).expect("field embeds");
            self.embed(&emb).subst(&subs)
        }
    }

    pub fn embed(&self, emb: &Embedding) -> MPoly {
        let mut out = MPoly::zero(emb.target());
        for (m, c) in &self.terms {
            out.insert_add(*m, emb.apply(c));
        }
        out
    }

    /// Applies `v^n = 0` (`unit = false`) or `v^n = 1` (`unit = true`).
    pub fn reduce_power(&self, v: usize, n: u32, unit: bool) -> MPoly {
        let mut out = MPoly::zero(&self.f);
        for (m, c) in &self.terms {
            let mut k = *m;
            if k[v] >= n {
                if !unit {
                    continue;
                }
                k[v] %= n;
            }
            out.insert_add(k, c.clone());
        }
        out
    }

    /// Remainder on division by `w`, whose leading coefficient in `v` is a
    /// nonzero constant. The result has degree in `v` below that of `w`.
    pub fn rem_monic(&self, w: &MPoly, v: usize) -> Result<MPoly> {
        let d = w.degree_in(v).ok_or(Error::DivisionByZero)?;
        let lead: Vec<(&Mono, &Fe)> = w.terms.iter().filter(|(m, _)| m[v] == d).collect();
        if lead.len() != 1 || lead[0].0.iter().enumerate().any(|(i, e)| i != v && *e > 0) {
            return Err(Error::NotApplicable(format!("divisor is not monic in {}", VAR_NAMES[v])));
        }
        let inv = lead[0].1.inv()?;
        let mut r = self.clone();
        loop {
            let top = r.terms.iter().filter(|(m, _)| m[v] >= d).max_by_key(|(m, _)| m[v]).map(|(m, c)| (*m, c.clone()));
            let Some((mut m, c)) = top else { return Ok(r) };
            m[v] -= d;
            r = &r - &w.mul_mono(&m, &(&c * &inv));
        }
    }

    /// `self / g` when `g` divides `self` exactly.
    pub fn div_exact(&self, g: &MPoly) -> Option<MPoly> {
        let (gm, gc) = g.leading()?;
        let ginv = gc.inv().ok()?;
        let mut r = self.clone();
        let mut q = MPoly::zero(&self.f);
        while let Some((m, c)) = r.leading() {
            if m.iter().zip(&gm).any(|(a, b)| a < b) {
                return None;
            }
            let k: Mono = core::array::from_fn(|i| m[i] - gm[i]);
            let c = &c * &ginv;
            r = &r - &g.mul_mono(&k, &c);
            q.insert_add(k, c);
        }
        Some(q)
    }

    pub fn to_string_with(&self, names: &[char; NVARS]) -> String {
        use core::fmt::Write;
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let is_const = m.iter().all(|e| *e == 0);
            let cs = if c.as_prime().is_some() { format!("{}", c) } else { format!("({})", c) };
            if is_const {
                out.push_str(&cs);
                continue;
            }
            if !c.is_one() {
                let _ = write!(out, "{}*", cs);
            }
            let mut first = true;
            for (i, e) in m.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                if !first {
                    out.push('*');
                }
                first = false;
                out.push(names[i]);
                if *e > 1 {
                    let _ = write!(out, "^{}", e);
                }
            }
        }
        out
    }
}

fn unit(v: usize, e: u32) -> Mono {
    let mut m = [0; NVARS];
    m[v] = e;
    m
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    core::array::from_fn(|i| a[i] + b[i])
}

/// Text of a single term, for witnesses.
pub fn term_text(m: &Mono, c: &Fe) -> String {
    MPoly::monomial(c, m).to_string()
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&VAR_NAMES))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        assert!(self.f == o.f, "field mismatch");
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert_add(*m, c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        assert!(self.f == o.f, "field mismatch");
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert_add(*m, -c);
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-&self.f.one())
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        assert!(self.f == o.f, "field mismatch");
        let mut out = MPoly::zero(&self.f);
        for (m, c) in &self.terms {
            for (k, d) in &o.terms {
                out.insert_add(mono_mul(m, k), c * d);
            }
        }
        out
    }
}

/// Builds polynomials from expression text. The letters `s t x y z a b` are
/// variables and `g` is the generator of an extension field.
pub struct MPolyEvaluator {
    pub field: Field,
}

impl Evaluator for MPolyEvaluator {
    type Value = MPoly;

    fn int(&self, n: u64) -> core::result::Result<MPoly, String> {
        Ok(MPoly::constant(&self.field.from_int((n % self.field.characteristic()) as i64)))
    }

    fn var(&self, name: char) -> core::result::Result<MPoly, String> {
        if name == 'g' && !self.field.is_prime_field() {
            return Ok(MPoly::constant(&self.field.generator()));
        }
        var_index(name).map(|i| MPoly::var(&self.field, i)).ok_or_else(|| format!("unknown variable '{}'", name))
    }

    fn add(&self, a: &MPoly, b: &MPoly) -> core::result::Result<MPoly, String> {
        Ok(a + b)
    }

    fn sub(&self, a: &MPoly, b: &MPoly) -> core::result::Result<MPoly, String> {
        Ok(a - b)
    }

    fn mul(&self, a: &MPoly, b: &MPoly) -> core::result::Result<MPoly, String> {
        Ok(a * b)
    }

    fn div(&self, a: &MPoly, b: &MPoly) -> core::result::Result<MPoly, String> {
        match b.leading() {
            Some((m, c)) if b.len() == 1 && m.iter().all(|e| *e == 0) => {
                Ok(a.scale(&c.inv().map_err(|_| String::from("division by zero"))?))
            }
            Some(_) => Err(String::from("division by a non-constant")),
            None => Err(String::from("division by zero")),
        }
    }

    fn neg(&self, a: &MPoly) -> core::result::Result<MPoly, String> {
        Ok(-a)
    }

    fn pow(&self, a: &MPoly, e: i64) -> core::result::Result<MPoly, String> {
        if e < 0 {
            return Err(String::from("negative exponent in a polynomial"));
        }
        let e = u32::try_from(e).map_err(|_| String::from("exponent too large"))?;
        Ok(a.pow(e))
    }
}

pub fn parse_mpoly(src: &str, field: &Field) -> core::result::Result<MPoly, ParseError> {
    let e = crate::algebra::expr::parse(src)?;
    e.eval(&MPolyEvaluator { field: field.clone() }, src)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn arithmetic_and_text() {
        let k = f(3);
        let p = parse_mpoly("y^2 - x^3 - x - t", &k).unwrap();
        assert_eq!(p.to_string(), "2*t + 2*x^3 + 2*x + y^2");
        let q = parse_mpoly("(x + 1)^3", &k).unwrap();
        assert_eq!(q, parse_mpoly("x^3 + 1", &k).unwrap());
        assert_eq!(parse_mpoly("x*y/2", &k).unwrap(), parse_mpoly("2*x*y", &k).unwrap());
        assert!(parse_mpoly("x/y", &k).is_err());
        assert!(parse_mpoly("w", &k).is_err());
    }

    #[test]
    fn substitution_and_reduction() {
        let k = f(2);
        let w = parse_mpoly("y^2 + t*y + x^3 + t", &k).unwrap();
        let mut subs: [Option<MPoly>; NVARS] = Default::default();
        subs[X] = Some(parse_mpoly("x + a", &k).unwrap());
        let s = w.subst(&subs);
        assert_eq!(s, parse_mpoly("y^2 + t*y + x^3 + a*x^2 + a^2*x + a^3 + t", &k).unwrap());
        assert_eq!(s.reduce_power(A, 2, false), parse_mpoly("y^2 + t*y + x^3 + a*x^2 + t", &k).unwrap());
        assert_eq!(s.reduce_power(A, 2, true), parse_mpoly("y^2 + t*y + x^3 + a*x^2 + x + a + t", &k).unwrap());
        let r = parse_mpoly("x^4 + y", &k).unwrap().rem_monic(&w, X).unwrap();
        assert_eq!(r.degree_in(X), Some(1));
        assert!(w.pow(2).rem_monic(&w, X).unwrap().is_zero());
    }

    #[test]
    fn exact_division() {
        let k = f(5);
        let a = parse_mpoly("x^2 - y^2", &k).unwrap();
        let b = parse_mpoly("x + y", &k).unwrap();
        assert_eq!(a.div_exact(&b).unwrap(), parse_mpoly("x - y", &k).unwrap());
        assert!(a.div_exact(&parse_mpoly("x + 2*y", &k).unwrap()).is_none());
    }

    #[test]
    fn derivative_char_p() {
        let k = f(3);
        let p = parse_mpoly("t^9 + x^3*y + t*x", &k).unwrap();
        assert_eq!(p.derivative(T), parse_mpoly("x", &k).unwrap());
        assert_eq!(p.derivative(X), parse_mpoly("t", &k).unwrap());
    }
}
