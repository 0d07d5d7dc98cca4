use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::field::{Fe, Field, Raw};
use crate::error::{Error, Result};

/// A truncated Laurent series `u^val * (c_0 + c_1 u + ...)` with `c_0 != 0`,
/// known to `coeffs.len()` terms. `val == None` is the zero series.
#[derive(Clone, PartialEq, Eq)]
pub struct Laurent {
    pub field: Field,
    pub val: Option<i64>,
    pub coeffs: Vec<Fe>,
}

impl Laurent {
    pub fn zero(f: &Field) -> Laurent {
        Laurent { field: f.clone(), val: None, coeffs: Vec::new() }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn leading(&self) -> Option<&Fe> {
        self.coeffs.first()
    }

    /// Coefficient of `u^i`, if known.
    pub fn coeff(&self, i: i64) -> Option<Fe> {
        let v = self.val?;
        if i < v {
            return Some(self.field.zero());
        }
        self.coeffs.get((i - v) as usize).cloned()
    }

    /// Keeps the first `n` terms.
    pub fn truncate(&self, n: usize) -> Laurent {
        let mut out = self.clone();
        out.coeffs.truncate(n);
        out
    }

    pub fn to_string_in(&self, var: &str) -> String {
        use core::fmt::Write;
        let Some(v) = self.val else { return String::from("0") };
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let e = v + i as i64;
            let coef = if c.as_prime().is_some() { alloc::format!("{}", c) } else { alloc::format!("({})", c) };
            match (e, c.is_one()) {
                (0, _) => out.push_str(&coef),
                (_, true) => out.push_str(var),
                (_, false) => {
                    let _ = write!(out, "{}*{}", coef, var);
                }
            }
            if e != 0 && e != 1 {
                let _ = write!(out, "^{}", e);
            }
        }
        out
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("u"))
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A power series known modulo `u^prec`.
#[derive(Clone, PartialEq, Eq)]
pub(crate) struct Series {
    pub f: Field,
    pub c: Vec<Raw>,
}

impl Series {
    pub fn zero(f: &Field, prec: usize) -> Series {
        Series { f: f.clone(), c: vec![f.r_zero(); prec] }
    }

    pub fn from_laurent(l: &Laurent, prec: usize) -> Result<Series> {
        let mut s = Self::zero(&l.field, prec);
        let Some(v) = l.val else { return Ok(s) };
        if v < 0 {
            return Err(Error::Internal(String::from("negative valuation in power series")));
        }
        for i in v as usize..prec {
            let c = l.coeffs.get(i - v as usize).ok_or(Error::PrecisionExhausted)?;
            s.c[i] = c.c.clone();
        }
        Ok(s)
    }

    pub fn prec(&self) -> usize {
        self.c.len()
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.f.wrap(self.c[i].clone())
    }

    /// Index of the first nonzero coefficient; `None` if all known terms vanish.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|r| !self.f.r_is_zero(r))
    }

    pub fn add(&self, o: &Series) -> Series {
        let n = self.prec().min(o.prec());
        Series { f: self.f.clone(), c: (0..n).map(|i| self.f.r_add(&self.c[i], &o.c[i])).collect() }
    }

    pub fn sub(&self, o: &Series) -> Series {
        let n = self.prec().min(o.prec());
        Series { f: self.f.clone(), c: (0..n).map(|i| self.f.r_sub(&self.c[i], &o.c[i])).collect() }
    }

    pub fn mul(&self, o: &Series) -> Series {
        let n = self.prec().min(o.prec());
        let f = &self.f;
        let mut c = vec![f.r_zero(); n];
        for i in 0..n {
            if f.r_is_zero(&self.c[i]) {
                continue;
            }
            for j in 0..n - i {
                if !f.r_is_zero(&o.c[j]) {
                    c[i + j] = f.r_add(&c[i + j], &f.r_mul(&self.c[i], &o.c[j]));
                }
            }
        }
        Series { f: f.clone(), c }
    }

    pub fn scale(&self, a: &Fe) -> Series {
        Series { f: self.f.clone(), c: self.c.iter().map(|r| self.f.r_mul(r, &a.c)).collect() }
    }

    /// Divides by `u^k`; the first `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Series> {
        if k > self.prec() {
            return Err(Error::PrecisionExhausted);
        }
        if !self.c[..k].iter().all(|r| self.f.r_is_zero(r)) {
            return Err(Error::Internal(String::from("series not divisible")));
        }
        Ok(Series { f: self.f.clone(), c: self.c[k..].to_vec() })
    }

    /// Multiplicative inverse of a unit series.
    pub fn inv(&self) -> Result<Series> {
        let n = self.prec();
        let f = &self.f;
        if n == 0 {
            return Ok(self.clone());
        }
        let c0inv = f.r_inv(&self.c[0]).ok_or(Error::DivisionByZero)?;
        let mut out = vec![f.r_zero(); n];
        out[0] = c0inv.clone();
        for k in 1..n {
            let mut acc = f.r_zero();
            for j in 1..=k {
                if !f.r_is_zero(&self.c[j]) {
                    acc = f.r_add(&acc, &f.r_mul(&self.c[j], &out[k - j]));
                }
            }
            out[k] = f.r_neg(&f.r_mul(&acc, &c0inv));
        }
        Ok(Series { f: f.clone(), c: out })
    }

    pub fn to_fes(&self) -> Vec<Fe> {
        self.c.iter().map(|r| self.f.wrap(r.clone())).collect()
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = Laurent { field: self.f.clone(), val: Some(0), coeffs: self.to_fes() };
        write!(f, "{} + O(u^{})", l, self.prec())
    }
}
