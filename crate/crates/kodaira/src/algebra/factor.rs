use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Fe;
use super::poly::Poly;
use crate::error::{Error, Result};

/// `unit * prod f_i^{e_i}` with monic irreducible, pairwise distinct `f_i`,
/// sorted by the polynomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fe,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(&self.unit);
        for (f, e) in &self.factors {
            acc = &acc * &f.pow(*e as u64);
        }
        acc
    }
}

impl Poly {
    /// Factors into monic irreducibles. Splitting is randomized but fully
    /// determined by `seed`.
    pub fn factor(&self, seed: u64) -> Result<Factorization> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let unit = self.leading();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut factors = Vec::new();
        for (sq, e) in self.monic().squarefree_decomposition() {
            for (g, d) in sq.distinct_degree() {
                for h in g.equal_degree(d, &mut rng) {
                    factors.push((h, e));
                }
            }
        }
        factors.sort();
        Ok(Factorization { unit, factors })
    }

    /// Square-free decomposition of a monic polynomial: pairs `(g, e)` with
    /// `self = prod g^e`, each `g` square-free, monic and nonconstant.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, u32)> {
        let mut out = Vec::new();
        let f = self.monic();
        if f.degree() <= 0 {
            return out;
        }
        let p = f.field().characteristic() as u32;
        let d = f.derivative();
        if d.is_zero() {
            for (g, e) in f.pth_root_poly().squarefree_decomposition() {
                out.push((g, e * p));
            }
            return merge(out);
        }
        let mut c = f.gcd(&d);
        let mut w = f.div_exact(&c).expect("gcd divides");
        let mut i = 1u32;
        while !w.is_one() {
            let y = w.gcd(&c);
            let z = w.div_exact(&y).expect("gcd divides");
            if !z.is_one() {
                out.push((z, i));
            }
            i += 1;
            c = c.div_exact(&y).expect("gcd divides");
            w = y;
        }
        if !c.is_one() {
            for (g, e) in c.pth_root_poly().squarefree_decomposition() {
                out.push((g, e * p));
            }
        }
        merge(out)
    }

    /// For a polynomial whose derivative vanishes, the unique `g` with `g^p = self`.
    fn pth_root_poly(&self) -> Poly {
        let f = self.field();
        let p = f.characteristic() as usize;
        let c = self.c.iter().step_by(p).map(|a| f.r_pth_root(a)).collect();
        Poly::from_raw(f, c)
    }

    /// `self^q mod m` where `q` is the order of the coefficient field.
    fn frobenius_q_mod(&self, m: &Poly) -> Poly {
        let f = self.field();
        let p = f.characteristic() as u128;
        let mut h = self.rem(m).expect("fields agree");
        for _ in 0..f.degree() {
            h = h.powmod(p, m);
        }
        h
    }

    /// Distinct-degree factorization of a monic square-free polynomial.
    pub fn distinct_degree(&self) -> Vec<(Poly, usize)> {
        let k = self.field();
        let mut out = Vec::new();
        let mut f = self.monic();
        let x = Poly::x(k);
        let mut h = x.rem(&f).expect("fields agree");
        let mut d = 1usize;
        while f.degree() >= 2 * d as i64 {
            h = h.frobenius_q_mod(&f);
            let g = (&h - &x).gcd(&f);
            if !g.is_one() {
                f = f.div_exact(&g).expect("gcd divides");
                h = h.rem(&f).expect("fields agree");
                out.push((g, d));
            }
            d += 1;
        }
        if f.degree() > 0 {
            let deg = f.degree() as usize;
            out.push((f, deg));
        }
        out
    }

    fn random_below(&self, rng: &mut ChaCha8Rng) -> Poly {
        let k = self.field();
        let p = k.characteristic() as u32;
        let n = self.degree() as usize;
        let c = (0..n)
            .map(|_| {
                let mut r = k.r_zero();
                for slot in r.iter_mut() {
                    *slot = rng.next_u32() % p;
                }
                r
            })
            .collect();
        Poly::from_raw(k, c)
    }

    /// Splits a monic square-free product of irreducibles of degree `d`.
    pub(crate) fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
        let n = self.degree() as usize;
        if n == d {
            return vec![self.clone()];
        }
        let k = self.field();
        let p = k.characteristic();
        let big_k = k.degree() * d;
        loop {
            let a = self.random_below(rng);
            if a.degree() < 1 {
                continue;
            }
            let g = if p == 2 {
                let mut tr = a.clone();
                let mut cur = a.clone();
                for _ in 1..big_k {
                    cur = (&cur * &cur).rem(self).expect("fields agree");
                    tr = &tr + &cur;
                }
                tr.gcd(self)
            } else {
                let g0 = a.gcd(self);
                if !g0.is_one() {
                    g0
                } else {
                    // a^{(p^K - 1)/2} = (a a^p ... a^{p^{K-1}})^{(p-1)/2}
                    let mut norm = a.clone();
                    let mut cur = a.clone();
                    for _ in 1..big_k {
                        cur = cur.powmod(p as u128, self);
                        norm = (&norm * &cur).rem(self).expect("fields agree");
                    }
                    let b = norm.powmod(((p - 1) / 2) as u128, self);
                    (&b - &Poly::one(k)).gcd(self)
                }
            };
            if g.degree() > 0 && g.degree() < n as i64 {
                let h = self.div_exact(&g).expect("gcd divides");
                let mut out = g.equal_degree(d, rng);
                out.extend(h.equal_degree(d, rng));
                return out;
            }
        }
    }

    pub fn is_irreducible(&self) -> bool {
        if self.degree() < 1 {
            return false;
        }
        if self.degree() == 1 {
            return true;
        }
        let f = self.monic();
        let d = f.derivative();
        if d.is_zero() || !f.gcd(&d).is_one() {
            return false;
        }
        let x = Poly::x(f.field());
        let mut h = x.clone();
        for _ in 1..=(f.degree() / 2) {
            h = h.frobenius_q_mod(&f);
            if !(&h - &x).gcd(&f).is_one() {
                return false;
            }
        }
        true
    }

    /// Distinct roots in the coefficient field, sorted.
    pub fn roots(&self, seed: u64) -> Vec<Fe> {
        if self.degree() < 1 {
            return Vec::new();
        }
        let f = self.monic();
        let k = f.field().clone();
        let x = Poly::x(&k);
        let h = x.frobenius_q_mod(&f);
        let g = (&h - &x).gcd(&f);
        if g.degree() < 1 {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<Fe> = g.equal_degree(1, &mut rng).into_iter().map(|l| -l.coeff(0)).collect();
        out.sort();
        out
    }

    /// Roots with multiplicity, sorted.
    pub fn roots_with_multiplicity(&self, seed: u64) -> Vec<(Fe, u32)> {
        let mut out = Vec::new();
        for (g, e) in self.monic().squarefree_decomposition() {
            for r in g.roots(seed) {
                out.push((r, e));
            }
        }
        out.sort();
        out
    }
}

fn merge(mut v: Vec<(Poly, u32)>) -> Vec<(Poly, u32)> {
    v.sort_by(|a, b| a.1.cmp(&b.1));
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (g, e) in v {
        match out.last_mut() {
            Some(last) if last.1 == e => last.0 = &last.0 * &g,
            _ => out.push((g, e)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Field;

    fn ints(p: u64, c: &[i64]) -> Poly {
        Poly::from_ints(&Field::prime(p).unwrap(), c)
    }

    #[test]
    fn small_factorizations() {
        let f = ints(2, &[1, 0, 1]).factor(0).unwrap();
        assert_eq!(f.factors, vec![(ints(2, &[1, 1]), 2)]);
        let f = ints(5, &[1, 0, 1]).factor(0).unwrap();
        assert_eq!(f.factors, vec![(ints(5, &[2, 1]), 1), (ints(5, &[3, 1]), 1)]);
        let f = ints(7, &[0, 1]).factor(0).unwrap();
        assert_eq!(f.factors, vec![(ints(7, &[0, 1]), 1)]);
        assert_eq!(ints(3, &[]).factor(0), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn wild_multiplicities() {
        // (t+1)^3 (t^2+1)^6 t^4 over F_3
        let a = &(&ints(3, &[1, 1]).pow(3) * &ints(3, &[1, 0, 1]).pow(6)) * &ints(3, &[0, 1]).pow(4);
        let f = a.scale(&a.field().from_int(2)).factor(7).unwrap();
        assert_eq!(f.unit, a.field().from_int(2));
        assert_eq!(
            f.factors,
            vec![(ints(3, &[0, 1]), 4), (ints(3, &[1, 1]), 3), (ints(3, &[1, 0, 1]), 6)]
        );
    }

    #[test]
    fn roots_over_extension() {
        let k = Field::extension_of_degree(2, 2).unwrap();
        let f = Poly::from_ints(&k, &[1, 1, 1]);
        let r = f.roots(0);
        assert_eq!(r.len(), 2);
        for x in r {
            assert!(f.eval(&x).is_zero());
        }
    }

    #[test]
    fn irreducibility() {
        assert!(ints(2, &[1, 1, 0, 1]).is_irreducible());
        assert!(!ints(2, &[1, 0, 0, 1]).is_irreducible());
        assert!(ints(3, &[2, 1, 0, 0, 0, 1]).is_irreducible() == ints(3, &[2, 1, 0, 0, 0, 1]).factor(0).unwrap().factors.len().eq(&1));
    }
}
