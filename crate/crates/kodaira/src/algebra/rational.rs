use alloc::format;
use alloc::string::String;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use super::field::{Embedding, Fe, Field};
use super::poly::Poly;
use crate::error::{Error, Result};

/// A rational function `num/den` in canonical form: `den` monic and coprime
/// to `num`, and `0` stored as `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rf {
    num: Poly,
    den: Poly,
}

impl Rf {
    pub fn new(num: Poly, den: Poly) -> Result<Rf> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.field() != den.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Rf {
        if num.is_zero() {
            return Rf { den: Poly::one(num.field()), num };
        }
        if den.is_one() {
            return Rf { num, den };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let l = den.leading();
        if l.is_one() {
            Rf { num, den }
        } else {
            let inv = l.inv().expect("nonzero");
            Rf { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: Poly) -> Rf {
        let den = Poly::one(p.field());
        Rf { num: p, den }
    }

    pub fn zero(f: &Field) -> Rf {
        Self::from_poly(Poly::zero(f))
    }

    pub fn one(f: &Field) -> Rf {
        Self::from_poly(Poly::one(f))
    }

    pub fn constant(a: &Fe) -> Rf {
        Self::from_poly(Poly::constant(a))
    }

    pub fn from_int(f: &Field, n: i64) -> Rf {
        Self::constant(&f.from_int(n))
    }

    /// The coordinate `t`.
    pub fn t(f: &Field) -> Rf {
        Self::from_poly(Poly::x(f))
    }

    /// `c * t^k` for any integer `k`.
    pub fn monomial(c: &Fe, k: i64) -> Rf {
        let f = c.field();
        if k >= 0 {
            Self::from_poly(Poly::monomial(c, k as usize))
        } else {
            Self::new(Poly::constant(c), Poly::monomial(&f.one(), (-k) as usize)).expect("nonzero")
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<Fe> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn try_add(&self, o: &Rf) -> Result<Rf> {
        if self.den.is_one() && o.den.is_one() {
            return Ok(Self::from_poly(self.num.try_add(&o.num)?));
        }
        if self.den == o.den {
            return Rf::new(self.num.try_add(&o.num)?, self.den.clone());
        }
        let n = (&self.num * &o.den).try_add(&(&o.num * &self.den))?;
        Rf::new(n, &self.den * &o.den)
    }

    pub fn try_sub(&self, o: &Rf) -> Result<Rf> {
        self.try_add(&-o)
    }

    pub fn try_mul(&self, o: &Rf) -> Result<Rf> {
        if self.den.is_one() && o.den.is_one() {
            return Ok(Self::from_poly(self.num.try_mul(&o.num)?));
        }
        Rf::new(self.num.try_mul(&o.num)?, &self.den * &o.den)
    }

    pub fn inv(&self) -> Result<Rf> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Rf::new(self.den.clone(), self.num.clone())
    }

    pub fn try_div(&self, o: &Rf) -> Result<Rf> {
        self.try_mul(&o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Rf> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(Rf { num: base.num.pow(k), den: base.den.pow(k) })
    }

    pub fn scale(&self, a: &Fe) -> Rf {
        Self::canonical(self.num.scale(a), self.den.clone())
    }

    pub fn scale_int(&self, n: i64) -> Rf {
        self.scale(&self.field().from_int(n))
    }

    /// Substitutes `g` for `t`.
    pub fn compose(&self, g: &Rf) -> Result<Rf> {
        // homogenize: num(a/b) = sum c_i a^i b^{N-i} / b^N
        let n = self.num.degree().max(self.den.degree()).max(0) as usize;
        let hom = |p: &Poly| -> Poly {
            let f = p.field();
            let mut acc = Poly::zero(f);
            let mut apow = Poly::one(f);
            let bpows: alloc::vec::Vec<Poly> = {
                let mut v = alloc::vec![Poly::one(f)];
                for i in 1..=n {
                    let next = &v[i - 1] * g.den();
                    v.push(next);
                }
                v
            };
            for i in 0..=n {
                let c = p.coeff(i);
                if !c.is_zero() {
                    acc = &acc + &(&apow * &bpows[n - i]).scale(&c);
                }
                apow = &apow * g.num();
            }
            acc
        };
        Rf::new(hom(&self.num), hom(&self.den))
    }

    /// Substitutes `t^k` for `t`.
    pub fn inflate(&self, k: usize) -> Rf {
        Rf { num: self.num.inflate(k), den: self.den.inflate(k) }
    }

    /// Value at a point of an extension field; `None` at a pole.
    pub fn eval_in(&self, emb: &Embedding, x: &Fe) -> Option<Fe> {
        let d = self.den.eval_in(emb, x);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval_in(emb, x) * &d.inv().ok()?)
    }

    pub fn eval(&self, x: &Fe) -> Option<Fe> {
        self.eval_in(&Embedding::identity(self.field()), x)
    }

    pub fn embed(&self, emb: &Embedding) -> Rf {
        Rf::new(self.num.embed(emb), self.den.embed(emb)).expect("embedding is injective")
    }

    /// Degree of the map to the projective line: `max(deg num, deg den)`.
    pub fn height(&self) -> usize {
        self.num.degree().max(self.den.degree()).max(0) as usize
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.to_string_in(var);
        }
        let wrap = |p: &Poly| {
            let s = p.to_string_in(var);
            if s.chars().all(|c| c.is_ascii_alphanumeric()) {
                s
            } else {
                format!("({})", s)
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Display for Rf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("t"))
    }
}

impl fmt::Debug for Rf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&Rf> for &Rf {
            type Output = Rf;
            fn $m(self, rhs: &Rf) -> Rf {
                self.$try(rhs).expect("field mismatch")
            }
        }
        impl $tr<Rf> for Rf {
            type Output = Rf;
            fn $m(self, rhs: Rf) -> Rf {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Rf> for Rf {
            type Output = Rf;
            fn $m(self, rhs: &Rf) -> Rf {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Rf {
    type Output = Rf;
    fn neg(self) -> Rf {
        Rf { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for Rf {
    type Output = Rf;
    fn neg(self) -> Rf {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let k = Field::prime(5).unwrap();
        let a = Rf::new(Poly::from_ints(&k, &[-1, 0, 1]), Poly::from_ints(&k, &[2, 2])).unwrap();
        assert_eq!(a.num(), &Poly::from_ints(&k, &[-3, 3]));
        assert!(a.den().is_monic());
        assert_eq!(&a - &a, Rf::zero(&k));
        assert_eq!((&a * &a.inv().unwrap()), Rf::one(&k));
        assert_eq!(Rf::new(Poly::one(&k), Poly::zero(&k)), Err(Error::DivisionByZero));
    }

    #[test]
    fn composition() {
        let k = Field::prime(3).unwrap();
        let t = Rf::t(&k);
        let f = (&t * &t + Rf::one(&k)).try_div(&t).unwrap();
        let g = t.inv().unwrap();
        assert_eq!(f.compose(&g).unwrap(), f);
        assert_eq!(t.pow(3).unwrap().compose(&(&t + &Rf::one(&k))).unwrap(), (&t + &Rf::one(&k)).pow(3).unwrap());
    }

    #[test]
    fn text() {
        let k = Field::prime(7).unwrap();
        let t = Rf::t(&k);
        let r = (&t + &Rf::one(&k)).try_div(&t.pow(2).unwrap()).unwrap();
        assert_eq!(r.to_string(), "(t + 1)/(t^2)");
    }
}
