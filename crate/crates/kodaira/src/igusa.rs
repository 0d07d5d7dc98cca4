//! Supersingular j-invariants and the genus of the Igusa curve `Ig(p^n)`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::algebra::{is_prime, Field, Poly, DEFAULT_PRIME_CAP, DEFAULT_SEED};
use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Number of supersingular j-invariants in characteristic `p`.
///
/// For `p >= 5` the roots of the Hasse polynomial
/// `sum_i binom(m, i)^2 l^i`, `m = (p - 1)/2`, all lie in `F_{p^2}`; they are
/// mapped to `j = 256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2)` and counted once each.
pub fn supersingular_count(p: u64) -> Result<u64> {
    supersingular_count_with_cap(p, DEFAULT_PRIME_CAP)
}

pub fn supersingular_count_with_cap(p: u64, cap: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > cap {
        return Err(Error::PrimeTooLarge { p, cap });
    }
    if p <= 3 {
        return Ok(1);
    }
    Ok(supersingular_j(p)?.len() as u64)
}

/// The supersingular j-invariants for `p >= 5`, as elements of `F_{p^2}`
/// listed by index.
pub fn supersingular_j(p: u64) -> Result<Vec<u128>> {
    let fp = Field::prime(p)?;
    let m = ((p - 1) / 2) as usize;
    let mut coeffs = Vec::with_capacity(m + 1);
    let mut binom: u64 = 1;
    for i in 0..=m {
        coeffs.push(fp.from_int(((binom * binom) % p) as i64));
        binom = binom * ((m - i) as u64 % p) % p * inv_mod(i as u64 + 1, p) % p;
    }
    let hasse = Poly::from_coeffs(&fp, &coeffs);
    let fq = Field::extension_of_degree(p, 2)?;
    let emb = crate::algebra::Embedding::find(&fp, &fq)?;
    let mut js = BTreeSet::new();
    for l in hasse.embed(&emb).roots(DEFAULT_SEED) {
        let one = fq.one();
        let num = (&(&(&l * &l) - &l) + &one).pow(3).scale_int(256);
        let lm1 = &l - &one;
        let den = &(&l * &l) * &(&lm1 * &lm1);
        js.insert(num.try_div(&den)?.to_index());
    }
    Ok(js.into_iter().collect())
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
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

/// `h_p`: supersingular count plus 1/3 for `p = 3` and 3/8 for `p = 2`.
pub fn h_p(p: u64) -> Result<Rational> {
    let ss = Rational::from_integer(supersingular_count(p)? as i128);
    Ok(match p {
        2 => ss + Rational::new(3, 8),
        3 => ss + Rational::new(1, 3),
        _ => ss,
    })
}

/// `(p - 1)(p^(2n-1) - 12 p^(n-1) + 1)/48 + 1 - h_p/2`.
pub fn genus_bound(p: u64, n: u32) -> Result<Rational> {
    if n == 0 {
        return Err(Error::NotApplicable(String::from("n must be at least 1")));
    }
    let pi = p as i128;
    let a = pi.checked_pow(2 * n - 1).ok_or(Error::Overflow)?;
    let b = pi.checked_pow(n - 1).and_then(|x| x.checked_mul(12)).ok_or(Error::Overflow)?;
    let top = (pi - 1).checked_mul(a - b + 1).ok_or(Error::Overflow)?;
    Ok(Rational::new(top, 48) + Rational::from_integer(1) - h_p(p)? / 2)
}

/// Genus of `Ig(p^n)`, defined for `p^n >= 3`.
pub fn igusa_genus(p: u64, n: u32) -> Result<u64> {
    let pn = (p as u128).checked_pow(n).ok_or(Error::Overflow)?;
    if pn < 3 {
        return Err(Error::NotApplicable(format!("Ig({}) needs p^n >= 3", pn)));
    }
    let g = genus_bound(p, n)?;
    if !g.is_integer() || *g.numer() < 0 {
        return Err(Error::Internal(format!("genus formula gives {} at p = {}, n = {}", g, p, n)));
    }
    Ok(*g.numer() as u64)
}

/// Largest `n` such that a base curve of genus `g` satisfies the bound for
/// `mu_{p^n}`. The case `p^n = 2` places no condition.
pub fn max_admissible_n(p: u64, g: u64) -> Result<u32> {
    let g = Rational::from_integer(g as i128);
    let mut n = 1;
    loop {
        let vacuous = p == 2 && n == 1;
        if !vacuous && genus_bound(p, n)? > g {
            return Ok(n - 1);
        }
        n += 1;
        if n > 64 {
            return Err(Error::Overflow);
        }
    }
}

/// All quantities for one `(p, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IgusaDatum {
    pub p: u64,
    pub n: u32,
    pub ss_count: u64,
    pub h_p: Rational,
    pub genus: Option<u64>,
    pub bound: Rational,
}

pub fn igusa_datum(p: u64, n: u32) -> Result<IgusaDatum> {
    let genus = match igusa_genus(p, n) {
        Ok(g) => Some(g),
        Err(Error::NotApplicable(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(IgusaDatum { p, n, ss_count: supersingular_count(p)?, h_p: h_p(p)?, genus, bound: genus_bound(p, n)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(supersingular_count(2).unwrap(), 1);
        assert_eq!(supersingular_count(11).unwrap(), 2);
        assert_eq!(supersingular_count(13).unwrap(), 1);
        assert_eq!(supersingular_count(37).unwrap(), 3);
        assert!(matches!(supersingular_count(15), Err(Error::NotPrime(15))));
        // floor(p/12) + {0, 1, 1, 2} for p mod 12 in {1, 5, 7, 11}
        for p in (5..200).filter(|&p| is_prime(p)) {
            let e = p / 12 + [0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 2][(p % 12) as usize];
            assert_eq!(supersingular_count(p).unwrap(), e, "p = {}", p);
        }
    }

    #[test]
    fn genus_table() {
        assert_eq!(igusa_genus(13, 1).unwrap(), 1);
        assert_eq!(igusa_genus(2, 4).unwrap(), 1);
        assert_eq!(igusa_genus(5, 1).unwrap(), 0);
        assert_eq!(igusa_genus(3, 1).unwrap(), 0);
        assert_eq!(igusa_genus(2, 2).unwrap(), 0);
        assert!(matches!(igusa_genus(2, 1), Err(Error::NotApplicable(_))));
        assert_eq!(genus_bound(2, 1).unwrap(), Rational::new(1, 8));
        for p in (2..50).filter(|&p| is_prime(p)) {
            for n in 1..=4 {
                let pn = p.pow(n);
                if pn < 3 {
                    continue;
                }
                let g = igusa_genus(p, n).unwrap();
                match pn {
                    3..=12 => assert_eq!(g, 0),
                    13 | 16 => assert_eq!(g, 1),
                    _ => assert!(g >= 2, "p^n = {}", pn),
                }
            }
        }
    }

    #[test]
    fn bounds() {
        assert_eq!(genus_bound(13, 1).unwrap(), Rational::from_integer(1));
        assert_eq!(genus_bound(2, 2).unwrap(), Rational::from_integer(0));
        assert_eq!(genus_bound(5, 2).unwrap(), Rational::from_integer(6));
        assert_eq!(max_admissible_n(5, 0).unwrap(), 1);
        assert_eq!(max_admissible_n(2, 0).unwrap(), 3);
        assert_eq!(max_admissible_n(13, 0).unwrap(), 0);
        assert_eq!(max_admissible_n(13, 1).unwrap(), 1);
    }
}
