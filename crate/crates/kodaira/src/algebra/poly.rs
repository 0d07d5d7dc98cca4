use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};
use core::ops::{Add, Mul, Neg, Sub};

use super::field::{Embedding, Fe, Field, Raw};
use crate::error::{Error, Result};

/// Univariate polynomial over a [`Field`], coefficients low to high, with no
/// trailing zeros.
#[derive(Clone)]
pub struct Poly {
    pub(crate) f: Field,
    pub(crate) c: Vec<Raw>,
}

impl Poly {
    pub(crate) fn from_raw(f: &Field, mut c: Vec<Raw>) -> Poly {
        while c.last().is_some_and(|r| f.r_is_zero(r)) {
            c.pop();
        }
        Poly { f: f.clone(), c }
    }

    pub fn zero(f: &Field) -> Poly {
        Poly { f: f.clone(), c: Vec::new() }
    }

    pub fn one(f: &Field) -> Poly {
        Self::constant(&f.one())
    }

    /// The variable itself.
    pub fn x(f: &Field) -> Poly {
        Self::monomial(&f.one(), 1)
    }

    pub fn constant(a: &Fe) -> Poly {
        Self::from_raw(a.field(), vec![a.c.clone()])
    }

    pub fn monomial(a: &Fe, deg: usize) -> Poly {
        let f = a.field();
        let mut c = vec![f.r_zero(); deg + 1];
        c[deg] = a.c.clone();
        Self::from_raw(f, c)
    }

    pub fn from_coeffs(f: &Field, coeffs: &[Fe]) -> Poly {
        Self::from_raw(f, coeffs.iter().map(|a| {
            assert!(a.field() == f, "field mismatch");
            a.c.clone()
        }).collect())
    }

    pub fn from_ints(f: &Field, coeffs: &[i64]) -> Poly {
        Self::from_raw(f, coeffs.iter().map(|&n| f.r_from_int(n)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.f
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.f.r_is_one(&self.c[0])
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.f.wrap(self.coeff_raw(i))
    }

    pub(crate) fn coeff_raw(&self, i: usize) -> Raw {
        self.c.get(i).cloned().unwrap_or_else(|| self.f.r_zero())
    }

    pub fn coeffs(&self) -> Vec<Fe> {
        self.c.iter().map(|r| self.f.wrap(r.clone())).collect()
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> Fe {
        match self.c.last() {
            Some(r) => self.f.wrap(r.clone()),
            None => self.f.zero(),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().is_some_and(|r| self.f.r_is_one(r))
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Poly {
        match self.c.last() {
            None => self.clone(),
            Some(l) if self.f.r_is_one(l) => self.clone(),
            Some(l) => {
                let inv = self.f.r_inv(l).expect("nonzero leading coefficient");
                self.scale_raw(&inv)
            }
        }
    }

    pub fn scale(&self, a: &Fe) -> Poly {
        assert!(a.field() == &self.f, "field mismatch");
        self.scale_raw(&a.c)
    }

    fn scale_raw(&self, a: &Raw) -> Poly {
        if self.f.r_is_zero(a) {
            return Self::zero(&self.f);
        }
        Poly { f: self.f.clone(), c: self.c.iter().map(|x| self.f.r_mul(x, a)).collect() }
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.f.r_zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { f: self.f.clone(), c }
    }

    /// Drops all terms of degree `>= n`.
    pub fn truncate(&self, n: usize) -> Poly {
        Self::from_raw(&self.f, self.c.iter().take(n).cloned().collect())
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.f == other.f {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let f = &self.f;
        let n = self.c.len().max(other.c.len());
        let zero = f.r_zero();
        let c = (0..n)
            .map(|i| f.r_add(self.c.get(i).unwrap_or(&zero), other.c.get(i).unwrap_or(&zero)))
            .collect();
        Ok(Self::from_raw(f, c))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let f = &self.f;
        let n = self.c.len().max(other.c.len());
        let zero = f.r_zero();
        let c = (0..n)
            .map(|i| f.r_sub(self.c.get(i).unwrap_or(&zero), other.c.get(i).unwrap_or(&zero)))
            .collect();
        Ok(Self::from_raw(f, c))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.f));
        }
        let f = &self.f;
        if f.degree() == 1 {
            return Ok(self.mul_prime(other));
        }
        let mut c = vec![f.r_zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if f.r_is_zero(a) {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if f.r_is_zero(b) {
                    continue;
                }
                c[i + j] = f.r_add(&c[i + j], &f.r_mul(a, b));
            }
        }
        Ok(Self::from_raw(f, c))
    }

    fn mul_prime(&self, other: &Poly) -> Poly {
        let p = self.f.characteristic();
        let mut acc = vec![0u64; self.c.len() + other.c.len() - 1];
        // p < 2^10, so p^2 < 2^20 and 2^40 products fit before reducing
        for (i, a) in self.c.iter().enumerate() {
            let a = a[0] as u64;
            if a == 0 {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                acc[i + j] += a * b[0] as u64;
            }
            if i % 4096 == 4095 {
                for v in acc.iter_mut() {
                    *v %= p;
                }
            }
        }
        Self::from_raw(&self.f, acc.into_iter().map(|v| self.f.r_from_u32((v % p) as u32)).collect())
    }

    /// Euclidean division; `other` must be nonzero.
    pub fn divrem(&self, other: &Poly) -> Result<(Poly, Poly)> {
        self.check(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.f;
        if self.c.len() < other.c.len() {
            return Ok((Self::zero(f), self.clone()));
        }
        let dl = other.c.len() - 1;
        let linv = f.r_inv(&other.c[dl]).expect("nonzero leading coefficient");
        let mut r = self.c.clone();
        let mut q = vec![f.r_zero(); self.c.len() - dl];
        for k in (0..q.len()).rev() {
            let lead = &r[k + dl];
            if f.r_is_zero(lead) {
                continue;
            }
            let coef = f.r_mul(lead, &linv);
            for (j, b) in other.c.iter().enumerate() {
                if !f.r_is_zero(b) {
                    r[k + j] = f.r_sub(&r[k + j], &f.r_mul(&coef, b));
                }
            }
            q[k] = coef;
        }
        r.truncate(dl);
        Ok((Self::from_raw(f, q), Self::from_raw(f, r)))
    }

    pub fn rem(&self, other: &Poly) -> Result<Poly> {
        Ok(self.divrem(other)?.1)
    }

    /// Quotient of an exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, other: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(other)?;
        if !r.is_zero() {
            return Err(Error::Internal(String::from("inexact polynomial division")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("fields agree");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `g = s*self + t*other` and `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.f;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("fields agree");
            r0 = core::mem::replace(&mut r1, r);
            let s2 = &s0 - &(&q * &s1);
            s0 = core::mem::replace(&mut s1, s2);
            let t2 = &t0 - &(&q * &t1);
            t0 = core::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading().inv().expect("nonzero");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse of `self` modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Poly) -> Result<Poly> {
        let (g, s, _) = self.ext_gcd(m);
        if !g.is_one() {
            return Err(Error::DivisionByZero);
        }
        s.rem(m)
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.f;
        let p = f.characteristic();
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| f.r_scale(a, (i as u64 % p) as u32))
            .collect();
        Self::from_raw(f, c)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Self::one(&self.f);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn powmod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m).expect("fields agree");
        let mut acc = Self::one(&self.f).rem(m).expect("fields agree");
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m).expect("fields agree");
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(m).expect("fields agree");
            }
        }
        acc
    }

    /// `self^p`, computed coefficientwise (Frobenius is additive).
    pub fn frobenius_power(&self) -> Poly {
        let f = &self.f;
        let p = f.characteristic() as usize;
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![f.r_zero(); (self.c.len() - 1) * p + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[i * p] = f.r_frob(a);
        }
        Self::from_raw(f, c)
    }

    /// Replaces the variable by `t^k`.
    pub fn inflate(&self, k: usize) -> Poly {
        if self.is_zero() || k == 1 {
            return self.clone();
        }
        let f = &self.f;
        let mut c = vec![f.r_zero(); (self.c.len() - 1) * k + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Self::from_raw(f, c)
    }

    pub fn eval(&self, x: &Fe) -> Fe {
        assert!(x.field() == &self.f, "field mismatch");
        let f = &self.f;
        let mut acc = f.r_zero();
        for a in self.c.iter().rev() {
            acc = f.r_add(&f.r_mul(&acc, &x.c), a);
        }
        f.wrap(acc)
    }

    /// Maps every coefficient through `emb`.
    pub fn embed(&self, emb: &Embedding) -> Poly {
        assert!(emb.source() == &self.f, "field mismatch");
        let to = emb.target();
        Self::from_raw(to, self.c.iter().map(|a| emb.apply_raw(a)).collect())
    }

    /// Value at a point of an extension of the coefficient field.
    pub fn eval_in(&self, emb: &Embedding, x: &Fe) -> Fe {
        self.embed(emb).eval(x)
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Self::zero(&self.f);
        for a in self.c.iter().rev() {
            acc = &(&acc * g) + &Self::from_raw(&self.f, vec![a.clone()]);
        }
        acc
    }

    /// `self(x + a)`.
    pub fn taylor_shift(&self, a: &Fe) -> Poly {
        assert!(a.field() == &self.f, "field mismatch");
        let f = &self.f;
        let mut c = self.c.clone();
        let n = c.len();
        if a.is_zero() {
            return self.clone();
        }
        // repeated synthetic division
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = f.r_mul(&c[j + 1], &a.c);
                c[j] = f.r_add(&c[j], &t);
            }
        }
        Self::from_raw(f, c)
    }

    /// `x^n self(1/x)`; requires `n >= deg`.
    pub fn reverse(&self, n: usize) -> Poly {
        let f = &self.f;
        let mut c = vec![f.r_zero(); n + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[n - i] = a.clone();
        }
        Self::from_raw(f, c)
    }

    /// Largest `k` with `x^k | self`; `None` for zero.
    pub fn low_order(&self) -> Option<usize> {
        self.c.iter().position(|a| !self.f.r_is_zero(a))
    }

    /// Text form in the given variable, e.g. `t^2 + 2*t + 1`.
    pub fn to_string_in(&self, var: &str) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            let a = self.f.wrap(a.clone());
            if a.is_zero() {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let coef = if a.as_prime().is_some() { alloc::format!("{}", a) } else { alloc::format!("({})", a) };
            match (i, a.is_one()) {
                (0, _) => out.push_str(&coef),
                (_, true) => {
                    out.push_str(var);
                }
                (_, false) => {
                    let _ = write!(out, "{}*{}", coef, var);
                }
            }
            if i > 1 {
                let _ = write!(out, "^{}", i);
            }
        }
        out
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.f == other.f
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    /// Degree first, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.len().cmp(&other.c.len()).then_with(|| {
            for (a, b) in self.c.iter().rev().zip(other.c.iter().rev()) {
                let o = a.iter().rev().cmp(b.iter().rev());
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("t"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                self.$try(rhs).expect("field mismatch")
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { f: self.f.clone(), c: self.c.iter().map(|a| self.f.r_neg(a)).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn division_and_gcd() {
        let k = f(7);
        let a = Poly::from_ints(&k, &[-1, 0, 1]);
        let b = Poly::from_ints(&k, &[1, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, Poly::from_ints(&k, &[-1, 1]));
        let g = a.gcd(&Poly::from_ints(&k, &[2, 2]));
        assert_eq!(g, b);
        let (g, s, t) = a.ext_gcd(&Poly::from_ints(&k, &[3, 0, 0, 1]));
        assert_eq!(&(&s * &a) + &(&t * &Poly::from_ints(&k, &[3, 0, 0, 1])), g);
    }

    #[test]
    fn taylor_shift_matches_compose() {
        let k = f(5);
        let a = Poly::from_ints(&k, &[1, 2, 3, 4, 1]);
        let c = k.from_int(3);
        let lin = Poly::from_ints(&k, &[3, 1]);
        assert_eq!(a.taylor_shift(&c), a.compose(&lin));
    }

    #[test]
    fn text_form() {
        let k = f(3);
        assert_eq!(Poly::from_ints(&k, &[1, 2, 0, 1]).to_string(), "t^3 + 2*t + 1");
        assert_eq!(Poly::x(&k).to_string(), "t");
        let k4 = Field::extension(2, &[1, 1, 1]).unwrap();
        let p = Poly::from_coeffs(&k4, &[k4.one(), k4.generator()]);
        assert_eq!(p.to_string(), "(g)*t + 1");
    }

    #[test]
    fn frobenius_power_is_pth_power() {
        let k = Field::extension_of_degree(3, 2).unwrap();
        let a = Poly::from_coeffs(&k, &[k.generator(), k.one(), k.from_index(5)]);
        assert_eq!(a.frobenius_power(), a.pow(3));
    }
}
