use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use smallvec::SmallVec;

use super::poly::Poly;
use crate::error::{Error, Result};

/// Raw coefficient vector of a field element: digits in the power basis of the
/// field generator, always of length equal to the extension degree.
pub(crate) type Raw = SmallVec<[u32; 4]>;

/// Largest characteristic accepted unless a caller asks for another cap.
pub const DEFAULT_PRIME_CAP: u64 = 1000;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

struct Inner {
    p: u32,
    m: usize,
    // monic, low to high, length m + 1
    modulus: Vec<u32>,
}

/// A finite field `F_p[g]/(modulus(g))`.
///
/// Cloning is cheap; elements hold a handle to their field.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}[{:?}]", self.0.p, self.0.m, self.0.modulus)
        }
    }
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        Self::prime_with_cap(p, DEFAULT_PRIME_CAP)
    }

    pub fn prime_with_cap(p: u64, cap: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > cap {
            return Err(Error::PrimeTooLarge { p, cap });
        }
        Ok(Self::raw_new(p as u32, vec![0, 1]))
    }

    /// Builds `F_p[g]/(modulus)`; `modulus` lists coefficients from the
    /// constant term upward and must be monic and irreducible over `F_p`.
    pub fn extension(p: u64, modulus: &[i64]) -> Result<Field> {
        let base = Self::prime(p)?;
        let poly = Poly::from_ints(&base, modulus);
        if poly.is_zero() || poly.degree() < 1 {
            return Err(Error::ReducibleModulus);
        }
        if !poly.leading().is_one() {
            return Err(Error::Malformed(String::from("field modulus must be monic")));
        }
        if poly.degree() == 1 {
            return Ok(base);
        }
        if !poly.is_irreducible() {
            return Err(Error::ReducibleModulus);
        }
        let coeffs = (0..=poly.degree() as usize).map(|i| poly.coeff_raw(i)[0]).collect();
        Ok(Self::raw_new(p as u32, coeffs))
    }

    /// The field of order `p^m` whose modulus is the first irreducible monic
    /// polynomial in counting order (constant term as least significant digit).
    pub fn extension_of_degree(p: u64, m: usize) -> Result<Field> {
        let base = Self::prime(p)?;
        if m <= 1 {
            return Ok(base);
        }
        let mut digits = vec![0u32; m];
        loop {
            // advance the counter
            let mut i = 0;
            loop {
                digits[i] += 1;
                if digits[i] < p as u32 {
                    break;
                }
                digits[i] = 0;
                i += 1;
                if i == m {
                    return Err(Error::Internal(String::from("no irreducible polynomial found")));
                }
            }
            if digits[0] == 0 {
                continue;
            }
            let mut coeffs: Vec<u32> = digits.clone();
            coeffs.push(1);
            let poly = Poly::from_raw(&base, coeffs.iter().map(|&c| base.r_from_u32(c)).collect());
            if poly.is_irreducible() {
                return Ok(Self::raw_new(p as u32, coeffs));
            }
        }
    }

    pub(crate) fn raw_new(p: u32, modulus: Vec<u32>) -> Field {
        let m = modulus.len() - 1;
        Field(Arc::new(Inner { p, m, modulus }))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    pub(crate) fn p32(&self) -> u32 {
        self.0.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> usize {
        self.0.m
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.m == 1
    }

    /// Number of elements, if it fits in a `u128`.
    pub fn order(&self) -> Option<u128> {
        (self.0.p as u128).checked_pow(self.0.m as u32)
    }

    pub fn prime_subfield(&self) -> Field {
        if self.0.m == 1 {
            self.clone()
        } else {
            Self::raw_new(self.0.p, vec![0, 1])
        }
    }

    pub fn zero(&self) -> Fe {
        Fe { f: self.clone(), c: self.r_zero() }
    }

    pub fn one(&self) -> Fe {
        Fe { f: self.clone(), c: self.r_one() }
    }

    pub fn from_int(&self, n: i64) -> Fe {
        Fe { f: self.clone(), c: self.r_from_int(n) }
    }

    /// The class of `g`, the root of the modulus.
    pub fn generator(&self) -> Fe {
        if self.0.m == 1 {
            return Fe { f: self.clone(), c: self.r_from_u32((self.0.p - self.0.modulus[0]) % self.0.p) };
        }
        let mut c = self.r_zero();
        c[1] = 1;
        Fe { f: self.clone(), c }
    }

    /// Element with the given power-basis coefficients (constant first).
    pub fn element(&self, coeffs: &[i64]) -> Fe {
        let mut acc = self.zero();
        let g = self.generator();
        let mut pw = self.one();
        for &c in coeffs {
            acc += &(&pw * &self.from_int(c));
            pw = &pw * &g;
        }
        acc
    }

    /// Element whose base-`p` digits (least significant first) are its
    /// power-basis coefficients.
    pub fn from_index(&self, mut idx: u128) -> Fe {
        let p = self.0.p as u128;
        let mut c = self.r_zero();
        for slot in c.iter_mut() {
            *slot = (idx % p) as u32;
            idx /= p;
        }
        Fe { f: self.clone(), c }
    }

    /// All elements in index order. Panics if the field has more than 2^32 elements.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        let q = self.order().filter(|&q| q <= u32::MAX as u128).expect("field too large to enumerate");
        (0..q).map(move |i| self.from_index(i))
    }

    // ---- raw arithmetic ----

    pub(crate) fn r_zero(&self) -> Raw {
        SmallVec::from_elem(0, self.0.m)
    }

    pub(crate) fn r_one(&self) -> Raw {
        let mut r = self.r_zero();
        r[0] = 1;
        r
    }

    pub(crate) fn r_from_u32(&self, c: u32) -> Raw {
        let mut r = self.r_zero();
        r[0] = c % self.0.p;
        r
    }

    pub(crate) fn r_from_int(&self, n: i64) -> Raw {
        let p = self.0.p as i64;
        self.r_from_u32(n.rem_euclid(p) as u32)
    }

    #[inline]
    pub(crate) fn r_is_zero(&self, a: &Raw) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub(crate) fn r_is_one(&self, a: &Raw) -> bool {
        a[0] == 1 && a[1..].iter().all(|&c| c == 0)
    }

    #[inline]
    pub(crate) fn r_add(&self, a: &Raw, b: &Raw) -> Raw {
        let p = self.0.p;
        a.iter()
            .zip(b.iter())
            .map(|(&x, &y)| {
                let s = x + y;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect()
    }

    #[inline]
    pub(crate) fn r_sub(&self, a: &Raw, b: &Raw) -> Raw {
        let p = self.0.p;
        a.iter().zip(b.iter()).map(|(&x, &y)| if x >= y { x - y } else { x + p - y }).collect()
    }

    pub(crate) fn r_neg(&self, a: &Raw) -> Raw {
        let p = self.0.p;
        a.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect()
    }

    #[inline]
    pub(crate) fn r_mul(&self, a: &Raw, b: &Raw) -> Raw {
        let p = self.0.p as u64;
        let m = self.0.m;
        if m == 1 {
            let mut r = Raw::new();
            r.push(((a[0] as u64 * b[0] as u64) % p) as u32);
            return r;
        }
        let mut prod: SmallVec<[u64; 8]> = SmallVec::from_elem(0, 2 * m - 1);
        for i in 0..m {
            if a[i] == 0 {
                continue;
            }
            let ai = a[i] as u64;
            for j in 0..m {
                prod[i + j] += ai * b[j] as u64;
            }
            if i % 64 == 63 {
                for v in prod.iter_mut() {
                    *v %= p;
                }
            }
        }
        let md = &self.0.modulus;
        for k in (m..2 * m - 1).rev() {
            let c = prod[k] % p;
            prod[k] = 0;
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for j in 0..m {
                prod[k - m + j] = (prod[k - m + j] + neg * md[j] as u64) % p;
            }
        }
        prod[..m].iter().map(|&v| (v % p) as u32).collect()
    }

    pub(crate) fn r_scale(&self, a: &Raw, k: u32) -> Raw {
        let p = self.0.p as u64;
        a.iter().map(|&x| ((x as u64 * k as u64) % p) as u32).collect()
    }

    pub(crate) fn r_pow(&self, a: &Raw, mut e: u64) -> Raw {
        let mut base = a.clone();
        let mut acc = self.r_one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.r_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.r_mul(&base, &base);
            }
        }
        acc
    }

    pub(crate) fn r_frob(&self, a: &Raw) -> Raw {
        if self.0.m == 1 {
            return a.clone();
        }
        self.r_pow(a, self.0.p as u64)
    }

    /// Unique `p`-th root (the field is perfect).
    pub(crate) fn r_pth_root(&self, a: &Raw) -> Raw {
        let mut r = a.clone();
        for _ in 1..self.0.m {
            r = self.r_frob(&r);
        }
        r
    }

    pub(crate) fn r_inv(&self, a: &Raw) -> Option<Raw> {
        if self.r_is_zero(a) {
            return None;
        }
        let p = self.0.p as u64;
        if self.0.m == 1 {
            return Some(self.r_pow(a, p - 2));
        }
        // a^{-1} = (a^p a^{p^2} ... a^{p^{m-1}}) / N(a), with N(a) in F_p
        let mut cur = a.clone();
        let mut b = self.r_one();
        for _ in 1..self.0.m {
            cur = self.r_frob(&cur);
            b = self.r_mul(&b, &cur);
        }
        let n = self.r_mul(a, &b)[0] as u64;
        let mut ninv = 1u64;
        let mut base = n;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                ninv = ninv * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Some(self.r_scale(&b, ninv as u32))
    }

    pub(crate) fn wrap(&self, c: Raw) -> Fe {
        Fe { f: self.clone(), c }
    }
}

/// An element of a [`Field`], always fully reduced.
#[derive(Clone)]
pub struct Fe {
    pub(crate) f: Field,
    pub(crate) c: Raw,
}

impl Fe {
    pub fn field(&self) -> &Field {
        &self.f
    }

    pub fn is_zero(&self) -> bool {
        self.f.r_is_zero(&self.c)
    }

    pub fn is_one(&self) -> bool {
        self.f.r_is_one(&self.c)
    }

    /// Power-basis coefficients, constant first.
    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    /// Value in `0..p` when the element lies in the prime subfield.
    pub fn as_prime(&self) -> Option<u32> {
        if self.c[1..].iter().all(|&c| c == 0) {
            Some(self.c[0])
        } else {
            None
        }
    }

    pub fn to_index(&self) -> u128 {
        let p = self.f.p32() as u128;
        self.c.iter().rev().fold(0u128, |acc, &d| acc * p + d as u128)
    }

    fn check(&self, other: &Fe) -> Result<()> {
        if self.f == other.f {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Fe) -> Result<Fe> {
        self.check(other)?;
        Ok(self.f.wrap(self.f.r_add(&self.c, &other.c)))
    }

    pub fn try_sub(&self, other: &Fe) -> Result<Fe> {
        self.check(other)?;
        Ok(self.f.wrap(self.f.r_sub(&self.c, &other.c)))
    }

    pub fn try_mul(&self, other: &Fe) -> Result<Fe> {
        self.check(other)?;
        Ok(self.f.wrap(self.f.r_mul(&self.c, &other.c)))
    }

    pub fn try_div(&self, other: &Fe) -> Result<Fe> {
        self.check(other)?;
        let inv = other.inv()?;
        Ok(self.f.wrap(self.f.r_mul(&self.c, &inv.c)))
    }

    pub fn inv(&self) -> Result<Fe> {
        self.f.r_inv(&self.c).map(|c| self.f.wrap(c)).ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, e: u64) -> Fe {
        self.f.wrap(self.f.r_pow(&self.c, e))
    }

    /// Power with a possibly negative exponent.
    pub fn powi(&self, e: i64) -> Result<Fe> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    pub fn frobenius(&self) -> Fe {
        self.f.wrap(self.f.r_frob(&self.c))
    }

    pub fn pth_root(&self) -> Fe {
        self.f.wrap(self.f.r_pth_root(&self.c))
    }

    pub fn scale_int(&self, k: i64) -> Fe {
        let p = self.f.p32() as i64;
        self.f.wrap(self.f.r_scale(&self.c, k.rem_euclid(p) as u32))
    }
}

impl PartialEq for Fe {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.f == other.f
    }
}

impl Eq for Fe {}

impl Hash for Fe {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.f.0.p.hash(state);
        self.c.hash(state);
    }
}

impl PartialOrd for Fe {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fe {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.iter().rev().cmp(other.c.iter().rev())
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Fe {
    /// Prime-field elements print as integers in `0..p`; extension elements
    /// as polynomials in the generator `g`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_prime() {
            return write!(f, "{}", v);
        }
        let mut first = true;
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{}", c)?,
                (1, 1) => write!(f, "g")?,
                (1, _) => write!(f, "{}*g", c)?,
                (_, 1) => write!(f, "g^{}", i)?,
                _ => write!(f, "{}*g^{}", c, i)?,
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $raw:ident) => {
        impl $tr<&Fe> for &Fe {
            type Output = Fe;
            fn $m(self, rhs: &Fe) -> Fe {
                assert!(self.f == rhs.f, "field mismatch");
                self.f.wrap(self.f.$raw(&self.c, &rhs.c))
            }
        }
        impl $tr<Fe> for Fe {
            type Output = Fe;
            fn $m(self, rhs: Fe) -> Fe {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Fe> for Fe {
            type Output = Fe;
            fn $m(self, rhs: &Fe) -> Fe {
                (&self).$m(rhs)
            }
        }
        impl $tr<Fe> for &Fe {
            type Output = Fe;
            fn $m(self, rhs: Fe) -> Fe {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, r_add);
binop!(Sub, sub, r_sub);
binop!(Mul, mul, r_mul);

impl AddAssign<&Fe> for Fe {
    fn add_assign(&mut self, rhs: &Fe) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Fe> for Fe {
    fn sub_assign(&mut self, rhs: &Fe) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Fe> for Fe {
    fn mul_assign(&mut self, rhs: &Fe) {
        *self = &*self * rhs;
    }
}

impl Neg for &Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        self.f.wrap(self.f.r_neg(&self.c))
    }
}

impl Neg for Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        -&self
    }
}

/// A field homomorphism `from -> to`, determined by the image of the
/// generator of `from`.
#[derive(Clone, Debug)]
pub struct Embedding {
    from: Field,
    to: Field,
    gen_image: Fe,
}

impl Embedding {
    pub fn identity(f: &Field) -> Embedding {
        Embedding { from: f.clone(), to: f.clone(), gen_image: f.generator() }
    }

    /// Embedding sending the generator of `from` to `image`, which must be a
    /// root of the modulus of `from`.
    pub fn new(from: &Field, image: Fe) -> Result<Embedding> {
        if from.characteristic() != image.field().characteristic() {
            return Err(Error::FieldMismatch);
        }
        let to = image.field().clone();
        let emb = Embedding { from: from.clone(), to, gen_image: image };
        if from.degree() > 1 {
            let mut acc = emb.to.zero();
            let mut pw = emb.to.one();
            for &c in from.modulus() {
                acc += &pw.scale_int(c as i64);
                pw = &pw * &emb.gen_image;
            }
            if !acc.is_zero() {
                return Err(Error::Malformed(String::from("embedding image is not a root of the modulus")));
            }
        }
        Ok(emb)
    }

    /// Embeds `from` into `to` when `to` has degree divisible by that of
    /// `from`, choosing the smallest root of the modulus of `from`.
    pub fn find(from: &Field, to: &Field) -> Result<Embedding> {
        if from == to {
            return Ok(Self::identity(from));
        }
        if from.characteristic() != to.characteristic() || to.degree() % from.degree() != 0 {
            return Err(Error::FieldMismatch);
        }
        if from.degree() == 1 {
            return Ok(Embedding { from: from.clone(), to: to.clone(), gen_image: to.zero() });
        }
        let modulus = Poly::from_raw(
            to,
            from.modulus().iter().map(|&c| to.r_from_u32(c)).collect(),
        );
        let roots = modulus.roots(crate::algebra::DEFAULT_SEED);
        let root = roots.into_iter().next().ok_or(Error::FieldMismatch)?;
        Ok(Embedding { from: from.clone(), to: to.clone(), gen_image: root })
    }

    pub fn source(&self) -> &Field {
        &self.from
    }

    pub fn target(&self) -> &Field {
        &self.to
    }

    pub fn apply(&self, a: &Fe) -> Fe {
        assert!(a.field() == &self.from, "field mismatch");
        if self.from == self.to {
            return a.clone();
        }
        self.to.wrap(self.apply_raw(&a.c))
    }

    pub(crate) fn apply_raw(&self, c: &Raw) -> Raw {
        if self.from.degree() == 1 {
            return self.to.r_from_u32(c[0]);
        }
        let t = &self.to;
        let mut acc = t.r_zero();
        for &d in c.iter().rev() {
            acc = t.r_mul(&acc, &self.gen_image.c);
            acc = t.r_add(&acc, &t.r_from_u32(d));
        }
        acc
    }

    /// Preimage of `b`, if `b` lies in the image.
    pub fn preimage(&self, b: &Fe) -> Option<Fe> {
        if self.from == self.to {
            return Some(b.clone());
        }
        if self.from.degree() == 1 {
            return b.as_prime().map(|v| self.from.from_int(v as i64));
        }
        // linear algebra over F_p on the power basis of the image
        let p = self.from.characteristic() as i64;
        let m = self.from.degree();
        let n = self.to.degree();
        let mut cols: Vec<Vec<i64>> = Vec::with_capacity(m);
        let mut pw = self.to.one();
        for _ in 0..m {
            cols.push(pw.c.iter().map(|&v| v as i64).collect());
            pw = &pw * &self.gen_image;
        }
        let rhs: Vec<i64> = b.c.iter().map(|&v| v as i64).collect();
        let sol = solve_mod_p(&cols, &rhs, n, p)?;
        Some(self.from.element(&sol))
    }
}

fn inv_mod(a: i64, p: i64) -> i64 {
    let mut r = 1i64;
    let mut b = a.rem_euclid(p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Solves `sum_j x_j cols[j] = rhs` over `F_p`, rows `0..n`.
fn solve_mod_p(cols: &[Vec<i64>], rhs: &[i64], n: usize, p: i64) -> Option<Vec<i64>> {
    let m = cols.len();
    let mut a: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut row: Vec<i64> = cols.iter().map(|c| c[i]).collect();
            row.push(rhs[i]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m {
        let Some(piv) = (row..n).find(|&r| a[r][col] % p != 0) else { continue };
        a.swap(row, piv);
        let inv = inv_mod(a[row][col], p);
        for v in a[row].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..n {
            if r != row && a[r][col] != 0 {
                let f = a[r][col];
                for k in 0..=m {
                    a[r][k] = (a[r][k] - f * a[row][k]).rem_euclid(p);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if a[row..].iter().any(|r| r[m] % p != 0) {
        return None;
    }
    let mut x = vec![0i64; m];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][m];
    }
    Some(x)
}
