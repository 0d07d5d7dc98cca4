use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::field::{Embedding, Fe, Field};
use super::poly::Poly;
use super::rational::Rf;
use super::series::{Laurent, Series};
use crate::error::{Error, Result};

/// A closed point of the projective line over the coefficient field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Place {
    /// The zero locus of a monic irreducible polynomial.
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn finite(pi: Poly) -> Result<Place> {
        if !pi.is_monic() || !pi.is_irreducible() {
            return Err(Error::Malformed(String::from("place must be monic irreducible")));
        }
        Ok(Place::Finite(pi))
    }

    /// The place `t = a`.
    pub fn at(a: &Fe) -> Place {
        let f = a.field();
        Place::Finite(Poly::from_coeffs(f, &[-a, f.one()]))
    }

    /// The place `t = 0`.
    pub fn origin(f: &Field) -> Place {
        Self::at(&f.zero())
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree() as usize,
            Place::Infinity => 1,
        }
    }

    pub fn poly(&self) -> Option<&Poly> {
        match self {
            Place::Finite(p) => Some(p),
            Place::Infinity => None,
        }
    }

    /// `pi` at a finite place, `1/t` at infinity.
    pub fn uniformizer(&self, f: &Field) -> Rf {
        match self {
            Place::Finite(p) => Rf::from_poly(p.clone()),
            Place::Infinity => Rf::t(f).inv().expect("t is nonzero"),
        }
    }

    pub fn to_string_in(&self, var: &str) -> String {
        match self {
            Place::Finite(p) => p.to_string_in(var),
            Place::Infinity => String::from("inf"),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Place {
    /// Finite places by degree and then coefficients; infinity last.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Finite(a), Place::Finite(b)) => a.cmp(b),
            (Place::Finite(_), Place::Infinity) => Ordering::Less,
            (Place::Infinity, Place::Finite(_)) => Ordering::Greater,
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("t"))
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Poly {
    /// Multiplicity of the irreducible `pi` in `self`; `None` for zero.
    pub fn valuation_at(&self, pi: &Poly) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(pi).expect("fields agree");
            if !r.is_zero() {
                return Some(v);
            }
            v += 1;
            cur = q;
        }
    }
}

impl Rf {
    /// Order of vanishing at `v`; `None` stands for `+infinity` (zero function).
    pub fn valuation(&self, v: &Place) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        match v {
            Place::Finite(pi) => Some(self.num().valuation_at(pi)? - self.den().valuation_at(pi)?),
            Place::Infinity => Some(self.den().degree() - self.num().degree()),
        }
    }
}

/// Residue data at a place: the residue field, the embedding of the
/// coefficient field into it, and the image `theta` of `t` (for finite places).
/// The local parameter is `t - theta` at a finite place and `1/t` at infinity.
#[derive(Clone, Debug)]
pub struct LocalContext {
    place: Place,
    base: Field,
    residue: Field,
    emb: Embedding,
    theta: Option<Fe>,
}

impl LocalContext {
    pub fn new(base: &Field, place: &Place) -> Result<LocalContext> {
        let (residue, emb, theta) = match place {
            Place::Infinity => (base.clone(), Embedding::identity(base), None),
            Place::Finite(pi) => {
                if pi.field() != base {
                    return Err(Error::FieldMismatch);
                }
                let d = pi.degree() as usize;
                if d == 1 {
                    (base.clone(), Embedding::identity(base), Some(-pi.coeff(0)))
                } else if base.is_prime_field() {
                    let modulus = (0..=d).map(|i| pi.coeff(i).as_prime().expect("prime field")).collect();
                    let k = Field::raw_new(base.p32(), modulus);
                    let emb = Embedding::find(base, &k)?;
                    let theta = k.generator();
                    (k, emb, Some(theta))
                } else {
                    let k = Field::extension_of_degree(base.characteristic(), base.degree() * d)?;
                    let emb = Embedding::find(base, &k)?;
                    let theta = pi
                        .embed(&emb)
                        .roots(crate::algebra::DEFAULT_SEED)
                        .into_iter()
                        .next()
                        .ok_or_else(|| Error::Internal(String::from("place has no root in its residue field")))?;
                    (k, emb, Some(theta))
                }
            }
        };
        Ok(LocalContext { place: place.clone(), base: base.clone(), residue, emb, theta })
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn residue_field(&self) -> &Field {
        &self.residue
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    pub fn theta(&self) -> Option<&Fe> {
        self.theta.as_ref()
    }

    /// `true` when the residue field is the coefficient field itself.
    pub fn is_rational(&self) -> bool {
        self.place.degree() == 1
    }

    /// Expansion to `precision` terms in the local parameter.
    pub fn expand(&self, r: &Rf, precision: usize) -> Result<Laurent> {
        if precision == 0 {
            return Err(Error::InvalidPrecision);
        }
        if r.field() != &self.base {
            return Err(Error::FieldMismatch);
        }
        if r.is_zero() {
            return Ok(Laurent::zero(&self.residue));
        }
        let (n, d, shift) = match &self.theta {
            Some(th) => {
                let n = r.num().embed(&self.emb).taylor_shift(th);
                let d = r.den().embed(&self.emb).taylor_shift(th);
                (n, d, 0i64)
            }
            None => {
                let dn = r.num().degree();
                let dd = r.den().degree();
                (r.num().reverse(dn as usize), r.den().reverse(dd as usize), dd - dn)
            }
        };
        let vn = n.low_order().expect("nonzero");
        let vd = d.low_order().expect("nonzero");
        let to_series = |p: &Poly, v: usize| {
            let mut s = Series::zero(&self.residue, precision);
            for i in 0..precision {
                if let Some(c) = p.c.get(v + i) {
                    s.c[i] = c.clone();
                }
            }
            s
        };
        let q = to_series(&n, vn).mul(&to_series(&d, vd).inv()?);
        Ok(Laurent {
            field: self.residue.clone(),
            val: Some(vn as i64 - vd as i64 + shift),
            coeffs: q.to_fes(),
        })
    }

    /// Power series of `r * u^shift` modulo `u^prec`. Fails if it has a pole.
    pub(crate) fn series(&self, r: &Rf, shift: i64, prec: usize) -> Result<Series> {
        if r.is_zero() {
            return Ok(Series::zero(&self.residue, prec));
        }
        let v = r.valuation(&self.place).expect("nonzero") + shift;
        if v < 0 {
            return Err(Error::Internal(String::from("expansion has a pole")));
        }
        if v as usize >= prec {
            return Ok(Series::zero(&self.residue, prec));
        }
        let mut l = self.expand(r, prec - v as usize)?;
        l.val = Some(v);
        Series::from_laurent(&l, prec)
    }

    /// Residue class of `r`, which must be integral at the place.
    pub fn reduce(&self, r: &Rf) -> Result<Fe> {
        Ok(self.series(r, 0, 1)?.coeff(0))
    }

    /// Rebuilds the rational function `sum c_i u^(val + i)` from local data.
    /// Only available when the residue field is the coefficient field.
    pub fn from_local(&self, val: i64, coeffs: &[Fe]) -> Result<Rf> {
        if !self.is_rational() {
            return Err(Error::Unsupported(String::from("global lift from a residue extension")));
        }
        let f = &self.base;
        let poly = Poly::from_coeffs(f, coeffs);
        match &self.theta {
            Some(th) => {
                // u = t - theta
                let shifted = poly.taylor_shift(&-th);
                let u = Rf::from_poly(Poly::from_coeffs(f, &[-th, f.one()]));
                Ok(&Rf::from_poly(shifted) * &u.pow(val)?)
            }
            None => {
                // u = 1/t: sum c_i t^-(val+i)
                let n = coeffs.len();
                let rev = poly.reverse(n.saturating_sub(1));
                let t = Rf::t(f);
                Ok(&Rf::from_poly(rev) * &t.pow(-(val + n as i64 - 1))?)
            }
        }
    }
}

/// Every finite place where some of `fs` has a zero or pole, plus infinity,
/// sorted.
pub(crate) fn support(fs: &[&Rf], seed: u64) -> Vec<Place> {
    let mut out: Vec<Place> = Vec::new();
    for r in fs {
        if r.is_zero() {
            continue;
        }
        for p in [r.num(), r.den()] {
            if p.degree() < 1 {
                continue;
            }
            for (g, _) in p.factor(seed).expect("nonzero").factors {
                let pl = Place::Finite(g);
                if !out.contains(&pl) {
                    out.push(pl);
                }
            }
        }
    }
    out.sort();
    out.push(Place::Infinity);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn valuations() {
        let f = k(5);
        let t = Rf::t(&f);
        let one = Rf::one(&f);
        let r = t.pow(3).unwrap().try_div(&(&t + &one)).unwrap();
        assert_eq!(r.valuation(&Place::origin(&f)), Some(3));
        assert_eq!(t.pow(3).unwrap().valuation(&Place::Infinity), Some(-3));
        let s = &(&t + &one).pow(2).unwrap() * &t;
        assert_eq!(s.valuation(&Place::at(&f.from_int(-1))), Some(2));
        assert_eq!(Rf::zero(&f).valuation(&Place::Infinity), None);
    }

    #[test]
    fn expansions() {
        let f = k(7);
        let t = Rf::t(&f);
        let one = Rf::one(&f);
        let ctx = LocalContext::new(&f, &Place::origin(&f)).unwrap();
        let l = ctx.expand(&t.try_div(&(&one - &t)).unwrap(), 3).unwrap();
        assert_eq!(l.val, Some(1));
        assert_eq!(l.coeffs, vec![f.one(), f.one(), f.one()]);
        assert_eq!(l.to_string_in("t"), "t + t^2 + t^3");
        let inf = LocalContext::new(&f, &Place::Infinity).unwrap();
        let l = inf.expand(&t.pow(3).unwrap(), 1).unwrap();
        assert_eq!(l.val, Some(-3));
        assert_eq!(l.coeffs, vec![f.one()]);
        assert_eq!(ctx.expand(&one, 1).unwrap().val, Some(0));
        assert_eq!(ctx.expand(&Rf::zero(&f), 4).unwrap().val, None);
        assert_eq!(ctx.expand(&one, 0), Err(Error::InvalidPrecision));
    }

    #[test]
    fn expansion_at_quadratic_place() {
        let f = k(3);
        let pi = Poly::from_ints(&f, &[1, 0, 1]);
        let place = Place::finite(pi.clone()).unwrap();
        let ctx = LocalContext::new(&f, &place).unwrap();
        assert_eq!(ctx.residue_field().degree(), 2);
        let r = Rf::from_poly(pi.pow(2)) * Rf::t(&f);
        let l = ctx.expand(&r, 2).unwrap();
        assert_eq!(l.val, Some(2));
    }

    #[test]
    fn local_round_trip() {
        let f = k(5);
        let t = Rf::t(&f);
        let r = (&t.pow(2).unwrap() + &Rf::from_int(&f, 3)).try_div(&t.pow(4).unwrap()).unwrap();
        for place in [Place::at(&f.from_int(2)), Place::Infinity] {
            let ctx = LocalContext::new(&f, &place).unwrap();
            let l = ctx.expand(&r, 40).unwrap();
            let back = ctx.from_local(l.val.unwrap(), &l.coeffs).unwrap();
            // agreement to the expansion order
            let diff = &back - &r;
            assert!(diff.is_zero() || diff.valuation(&place).unwrap() >= l.val.unwrap() + 40);
        }
    }
}
