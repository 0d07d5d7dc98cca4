//! Vector fields on a chart, written as derivations of its coordinate ring.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::mpoly::{MPoly, NVARS, VAR_NAMES, X, Y};
use super::{affine_change, chart_polynomial, Chart};
use crate::algebra::{Fe, Field};
use crate::error::{Error, Result};
use crate::weierstrass::{CoordinateChange, WeierstrassModel};

/// A derivation given by its values on the chart coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    chart: Chart,
    field: Field,
    comps: [Option<MPoly>; NVARS],
}

/// How `D^p` compares with `D` on the chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PClosure {
    /// `D^p = D`.
    Multiplicative,
    /// `D^p = 0`.
    Additive,
    /// `D^p = c D` for a constant `c` other than 0 and 1.
    Scaled(Fe),
    NotClosed,
}

impl Derivation {
    pub fn new(chart: Chart, field: &Field, comps: Vec<(usize, MPoly)>) -> Result<Derivation> {
        let mut arr: [Option<MPoly>; NVARS] = Default::default();
        for (v, p) in comps {
            if !chart.vars().contains(&v) {
                return Err(Error::Malformed(format!("{} is not a coordinate of the {} chart", VAR_NAMES[v], chart)));
            }
            if p.field() != field {
                return Err(Error::FieldMismatch);
            }
            if let Some(bad) = (0..NVARS).find(|&i| p.uses(i) && !chart.vars().contains(&i)) {
                return Err(Error::Malformed(format!("component {} uses {}", VAR_NAMES[v], VAR_NAMES[bad])));
            }
            arr[v] = Some(p);
        }
        Ok(Derivation { chart, field: field.clone(), comps: arr })
    }

    /// Fills in `D(y)` from tangency to the affine chart equation `W`, by
    /// solving `D(y) W_y = -(D(t) W_t + D(x) W_x)` modulo `W`.
    pub fn with_solved_y(model: &WeierstrassModel, comps: Vec<(usize, MPoly)>) -> Result<Derivation> {
        if comps.iter().any(|(v, _)| *v == Y) {
            return Err(Error::Malformed(String::from("D(y) is solved for, not given")));
        }
        let d = Derivation::new(Chart::Affine, model.field(), comps)?;
        let w = chart_polynomial(model, Chart::Affine)?;
        let n = -&d.apply(&w);
        let n = n.rem_monic(&w, X)?;
        let wy = w.derivative(Y);
        let dy = if n.is_zero() {
            MPoly::zero(model.field())
        } else {
            n.div_exact(&wy).ok_or_else(|| Error::NotApplicable(format!("D(y) = ({}) / ({}) is not a polynomial", n, wy)))?
        };
        let mut out = d;
        if !dy.is_zero() {
            out.comps[Y] = Some(dy);
        }
        out.check_tangent(model)?;
        Ok(out)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn component(&self, v: usize) -> MPoly {
        self.comps[v].clone().unwrap_or_else(|| MPoly::zero(&self.field))
    }

    pub fn apply(&self, f: &MPoly) -> MPoly {
        let mut out = MPoly::zero(&self.field);
        for (v, c) in self.comps.iter().enumerate() {
            if let Some(c) = c {
                out = &out + &(c * &f.derivative(v));
            }
        }
        out
    }

    /// Errors unless `D(W)` lies in the ideal of the chart equation `W`.
    pub fn check_tangent(&self, model: &WeierstrassModel) -> Result<()> {
        let w = chart_polynomial(model, self.chart)?;
        let r = self.apply(&w).rem_monic(&w, X)?;
        if r.is_zero() {
            Ok(())
        } else {
            Err(Error::NotApplicable(format!("derivation is not tangent: D(W) leaves {} modulo W", r)))
        }
    }

    /// `D^k(v)` reduced modulo the chart equation.
    fn iterate(&self, w: &MPoly, v: usize, k: u64) -> Result<MPoly> {
        let mut f = MPoly::var(&self.field, v);
        for _ in 0..k {
            f = self.apply(&f).rem_monic(w, X)?;
        }
        Ok(f)
    }

    /// Compares `D^p` with `D` on every coordinate, modulo the chart equation.
    pub fn classify_p_closed(&self, model: &WeierstrassModel) -> Result<PClosure> {
        self.check_tangent(model)?;
        let w = chart_polynomial(model, self.chart)?;
        let p = self.field.characteristic();
        let mut pairs = Vec::new();
        for &v in self.chart.vars() {
            pairs.push((self.iterate(&w, v, p)?, self.component(v).rem_monic(&w, X)?));
        }
        if pairs.iter().all(|(dp, _)| dp.is_zero()) {
            return Ok(PClosure::Additive);
        }
        let Some((dp, (m, c))) = pairs.iter().find_map(|(dp, d)| d.leading().map(|l| (dp, l))) else {
            return Ok(PClosure::NotClosed);
        };
        let lam = dp.coeff(&m).try_div(&c)?;
        if pairs.iter().any(|(dp, d)| dp != &d.scale(&lam)) {
            return Ok(PClosure::NotClosed);
        }
        Ok(if lam.is_one() { PClosure::Multiplicative } else { PClosure::Scaled(lam) })
    }

    /// Checks that `D` kills the `p`-th powers of the given polynomials
    /// modulo the chart equation, so it preserves the ideal they generate
    /// after the Frobenius.
    pub fn kills_frobenius_ideal(&self, model: &WeierstrassModel, gens: &[MPoly]) -> Result<bool> {
        let w = chart_polynomial(model, self.chart)?;
        let p = self.field.characteristic() as u32;
        for g in gens {
            if !self.apply(&g.pow(p)).rem_monic(&w, X)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The derivation in the coordinates of `model.apply_change(ch)`.
    pub fn conjugate(&self, ch: &CoordinateChange) -> Result<Derivation> {
        if self.chart != Chart::Affine {
            return Err(Error::NotApplicable(String::from("coordinate changes act on the affine chart")));
        }
        let change = affine_change(&self.field, ch)?;
        let mut comps = Vec::new();
        for &v in Chart::Affine.vars() {
            let back = change.backward[v].clone().unwrap_or_else(|| MPoly::var(&self.field, v));
            let c = self.apply(&back).subst(&change.forward);
            if !c.is_zero() {
                comps.push((v, c));
            }
        }
        Derivation::new(Chart::Affine, &self.field, comps)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &v in self.chart.vars() {
            if let Some(c) = &self.comps[v] {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                write!(f, "({}) d/d{}", c, VAR_NAMES[v])?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::super::mpoly::{parse_mpoly, T};
    use super::super::tests::{coaction, model};
    use super::*;
    use crate::algebra::Rf;

    fn deriv(m: &WeierstrassModel, comps: &[(usize, &str)]) -> Result<Derivation> {
        let comps = comps.iter().map(|(v, s)| (*v, parse_mpoly(s, m.field()).unwrap())).collect();
        Derivation::with_solved_y(m, comps)
    }

    #[test]
    fn t_dt_is_multiplicative() {
        let m = model(3, ["0", "1", "0", "0", "t^9"]);
        let d = deriv(&m, &[(T, "t")]).unwrap();
        assert!(d.component(Y).is_zero());
        assert_eq!(d.classify_p_closed(&m).unwrap(), PClosure::Multiplicative);
        let m = model(2, ["1", "0", "0", "t^4", "0"]);
        let d = deriv(&m, &[(T, "t")]).unwrap();
        assert_eq!(d.classify_p_closed(&m).unwrap(), PClosure::Multiplicative);
    }

    #[test]
    fn induced_from_coactions() {
        let m = model(3, ["0", "1", "0", "0", "t^9"]);
        let c = coaction(&m, Chart::Affine, "a^3=1", &[(T, "a t")]).unwrap();
        let d = c.induced_derivation().unwrap();
        assert_eq!(d.component(T), parse_mpoly("t", m.field()).unwrap());
        assert_eq!(d.classify_p_closed(&m).unwrap(), PClosure::Multiplicative);
        let m = model(3, ["0", "0", "0", "1", "t"]);
        let c = coaction(&m, Chart::Affine, "free", &[(T, "t + a^3 + a"), (X, "x - a")]).unwrap();
        let d = c.induced_derivation().unwrap();
        d.check_tangent(&m).unwrap();
        assert_eq!(d.classify_p_closed(&m).unwrap(), PClosure::Additive);
    }

    #[test]
    fn additive_dt() {
        let m = model(3, ["0", "1", "0", "0", "t^9"]);
        let d = deriv(&m, &[(T, "1")]).unwrap();
        assert_eq!(d.classify_p_closed(&m).unwrap(), PClosure::Additive);
        assert!(d.kills_frobenius_ideal(&m, &[parse_mpoly("t + x", m.field()).unwrap()]).unwrap());
    }

    #[test]
    fn diagonal_weights_at_five() {
        // t -> l^6 t, x -> l^2 x, y -> l^3 y on y^2 = x^3 + t
        let m = model(5, ["0", "0", "0", "0", "t"]);
        let d = Derivation::new(
            Chart::Affine,
            m.field(),
            [(T, "6 t"), (X, "2 x"), (Y, "3 y")].iter().map(|(v, s)| (*v, parse_mpoly(s, m.field()).unwrap())).collect(),
        )
        .unwrap();
        d.check_tangent(&m).unwrap();
        assert_eq!(d.classify_p_closed(&m).unwrap(), PClosure::Multiplicative);
        let solved = deriv(&m, &[(T, "t"), (X, "2 x")]).unwrap();
        assert_eq!(solved.component(Y), parse_mpoly("3 y", m.field()).unwrap());
        let scaled = deriv(&m, &[(T, "2 t"), (X, "4 x")]).unwrap();
        assert_eq!(scaled.classify_p_closed(&m).unwrap(), PClosure::Multiplicative);
    }

    #[test]
    fn not_tangent_or_not_closed() {
        let m = model(3, ["0", "1", "0", "0", "t^9"]);
        assert!(deriv(&m, &[(X, "1")]).is_err());
        let m = model(5, ["0", "0", "0", "0", "t"]);
        // (t E)^p = 0 when E(t) = t
        let d = deriv(&m, &[(T, "t^2"), (X, "2 t x")]).unwrap();
        assert_eq!(d.classify_p_closed(&m).unwrap(), PClosure::Additive);
        let m = model(5, ["0", "0", "0", "0", "t^5 + 1"]);
        let d = deriv(&m, &[(T, "1 + t^3")]).unwrap();
        assert_eq!(d.classify_p_closed(&m).unwrap(), PClosure::NotClosed);
    }

    #[test]
    fn conjugation_keeps_class() {
        let m = model(5, ["0", "0", "0", "0", "t"]);
        let d = deriv(&m, &[(T, "t"), (X, "2 x")]).unwrap();
        let f = m.field();
        let ch = CoordinateChange { u: Rf::from_int(f, 2), r: Rf::zero(f), s: Rf::zero(f), w: Rf::zero(f) };
        let m2 = m.apply_change(&ch).unwrap();
        let d2 = d.conjugate(&ch).unwrap();
        d2.check_tangent(&m2).unwrap();
        assert_eq!(d2.classify_p_closed(&m2).unwrap(), PClosure::Multiplicative);
    }
}
