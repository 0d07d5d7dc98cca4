//! Group-scheme actions on Weierstrass charts and the derivations they induce.
//!
//! A coaction is given by substitutions for the chart coordinates, written in
//! those coordinates and a group parameter `a`. Checks are exact polynomial
//! identities: the pulled-back chart equation must lie in the ideal it
//! generates, after imposing the relation on `a`.

mod derivation;
mod margin;
pub mod mpoly;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::algebra::{Fe, Field, Poly, Rf};
use crate::error::{Error, Result};
use crate::weierstrass::{CoordinateChange, WeierstrassModel};
use mpoly::{MPoly, A, B, NVARS, S, T, X, Y, Z};

pub use derivation::{Derivation, PClosure};
pub use margin::{zero_scheme_margin, DivisorialComponent, ExtensionVerdict, MarginReport};

/// Coordinates in which a chart equation is written.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    /// `(t, x, y)`.
    Affine,
    /// `[s : t : x : y]` in weighted projective space, `s` and `t` of weight 1.
    Weighted,
    /// `(t; [x : y : z])`, a family of plane cubics.
    Planar,
}

impl Chart {
    pub fn vars(&self) -> &'static [usize] {
        match self {
            Chart::Affine => &[T, X, Y],
            Chart::Weighted => &[S, T, X, Y],
            Chart::Planar => &[T, X, Y, Z],
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chart::Affine => "affine",
            Chart::Weighted => "weighted",
            Chart::Planar => "planar",
        })
    }
}

impl FromStr for Chart {
    type Err = Error;
    fn from_str(s: &str) -> Result<Chart> {
        match s.trim() {
            "affine" => Ok(Chart::Affine),
            "weighted" => Ok(Chart::Weighted),
            "planar" => Ok(Chart::Planar),
            other => Err(Error::Malformed(format!("unknown chart '{}'", other))),
        }
    }
}

/// The relation satisfied by the group parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `a^n = 0`, group law `a + b`.
    Nilpotent(u32),
    /// `a^n = 1`, group law `a b`.
    RootOfUnity(u32),
    /// No relation, group law `a + b`.
    Free,
}

impl Relation {
    pub fn is_multiplicative(&self) -> bool {
        matches!(self, Relation::RootOfUnity(_))
    }

    pub fn identity(&self, f: &Field) -> Fe {
        if self.is_multiplicative() {
            f.one()
        } else {
            f.zero()
        }
    }

    /// Imposes the relation on both group parameters `a` and `b`.
    pub fn reduce(&self, p: &MPoly) -> MPoly {
        match *self {
            Relation::Nilpotent(n) => p.reduce_power(A, n, false).reduce_power(B, n, false),
            Relation::RootOfUnity(n) => p.reduce_power(A, n, true).reduce_power(B, n, true),
            Relation::Free => p.clone(),
        }
    }

    /// Whether a field element is a point of the group.
    pub fn admits(&self, a: &Fe) -> bool {
        match *self {
            Relation::Nilpotent(n) => a.pow(n as u64).is_zero(),
            Relation::RootOfUnity(n) => a.pow(n as u64).is_one(),
            Relation::Free => true,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Nilpotent(n) => write!(f, "a^{}=0", n),
            Relation::RootOfUnity(n) => write!(f, "a^{}=1", n),
            Relation::Free => f.write_str("free"),
        }
    }
}

impl FromStr for Relation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Relation> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "free" {
            return Ok(Relation::Free);
        }
        let bad = || Error::Malformed(format!("relation '{}' is not 'a^N=0', 'a^N=1' or 'free'", s.trim()));
        let rest = compact.strip_prefix("a^").ok_or_else(bad)?;
        let (n, rhs) = rest.split_once('=').ok_or_else(bad)?;
        let n: u32 = n.parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        match rhs {
            "0" => Ok(Relation::Nilpotent(n)),
            "1" => Ok(Relation::RootOfUnity(n)),
            _ => Err(bad()),
        }
    }
}

/// The chart equation with all terms moved to one side. Its only `x^3` term
/// is `-x^3`, so it is monic in `x` up to sign.
pub fn chart_polynomial(model: &WeierstrassModel, chart: Chart) -> Result<MPoly> {
    let f = model.field();
    let mut coeffs: Vec<&Poly> = Vec::with_capacity(5);
    for c in model.coeffs() {
        if !c.is_polynomial() {
            return Err(Error::NotApplicable(String::from("chart equations need polynomial coefficients")));
        }
        coeffs.push(c.num());
    }
    let v = |i| MPoly::var(f, i);
    let (x, y) = (v(X), v(Y));
    // Monomials in x, y (and z) attached to a1, a2, a3, a4, a6, with the
    // weight of each coefficient.
    let (mono, extra): ([MPoly; 5], [usize; 5]) = match chart {
        Chart::Planar => {
            let z = v(Z);
            ([&(&x * &y) * &z, &(&x * &x) * &z, &y * &z.pow(2), &x * &z.pow(2), z.pow(3)], [1, 2, 3, 4, 6])
        }
        _ => ([&x * &y, &x * &x, y.clone(), x.clone(), MPoly::one(f)], [1, 2, 3, 4, 6]),
    };
    let weight = match chart {
        Chart::Weighted => coeffs
            .iter()
            .zip(extra)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, k)| (c.degree() as usize).div_ceil(k))
            .max()
            .unwrap_or(1)
            .max(1),
        _ => 0,
    };
    let lead = match chart {
        Chart::Planar => &(&y * &y) * &v(Z),
        _ => &y * &y,
    };
    let mut w = &lead - &x.pow(3);
    for (i, c) in coeffs.iter().enumerate() {
        let a = match chart {
            Chart::Weighted => homogenize(c, extra[i] * weight),
            _ => MPoly::from_poly(c, T),
        };
        let term = &a * &mono[i];
        // a1 and a3 sit on the left-hand side
        w = if i == 0 || i == 2 { &w + &term } else { &w - &term };
    }
    Ok(w)
}

/// `s^d c(t/s)`.
fn homogenize(c: &Poly, d: usize) -> MPoly {
    let mut out = MPoly::zero(c.field());
    for (k, a) in c.coeffs().into_iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let mut m = [0; NVARS];
        m[T] = k as u32;
        m[S] = (d - k) as u32;
        out = &out + &MPoly::monomial(&a, &m);
    }
    out
}

/// Substitutions for the chart coordinates in terms of the coordinates and
/// the parameter `a`. Coordinates without a substitution are fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coaction {
    chart: Chart,
    relation: Relation,
    field: Field,
    subs: [Option<MPoly>; NVARS],
}

/// Outcome of an identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionCheck {
    Verified,
    /// The identity fails; `witness` is one surviving term of `residual`.
    Fails { witness: String, residual: MPoly },
}

impl ActionCheck {
    pub fn holds(&self) -> bool {
        matches!(self, ActionCheck::Verified)
    }

    fn from_residual(r: MPoly) -> ActionCheck {
        let witness = r.terms().next().map(|(m, c)| mpoly::term_text(m, c));
        match witness {
            None => ActionCheck::Verified,
            Some(witness) => ActionCheck::Fails { witness, residual: r },
        }
    }
}

impl Coaction {
    /// Rejects substitutions in variables outside the chart and coactions
    /// that are not the identity at the identity of the group.
    pub fn new(chart: Chart, relation: Relation, field: &Field, subs: Vec<(usize, MPoly)>) -> Result<Coaction> {
        let mut arr: [Option<MPoly>; NVARS] = Default::default();
        for (v, p) in subs {
            if !chart.vars().contains(&v) {
                return Err(Error::Malformed(format!("{} is not a coordinate of the {} chart", mpoly::VAR_NAMES[v], chart)));
            }
            if p.field() != field {
                return Err(Error::FieldMismatch);
            }
            if let Some(bad) = (0..NVARS).find(|&i| p.uses(i) && i != A && !chart.vars().contains(&i)) {
                return Err(Error::Malformed(format!("substitution for {} uses {}", mpoly::VAR_NAMES[v], mpoly::VAR_NAMES[bad])));
            }
            if arr[v].replace(p).is_some() {
                return Err(Error::Malformed(format!("{} is substituted twice", mpoly::VAR_NAMES[v])));
            }
        }
        let c = Coaction { chart, relation, field: field.clone(), subs: arr };
        let e = relation.identity(field);
        for &v in chart.vars() {
            let at_e = relation.reduce(&c.image(v)).eval_var(A, &e);
            if at_e != MPoly::var(field, v) {
                return Err(Error::Malformed(format!(
                    "the action is not the identity at a = {}: {} goes to {}",
                    e,
                    mpoly::VAR_NAMES[v],
                    at_e
                )));
            }
        }
        Ok(c)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn substitution(&self, v: usize) -> Option<&MPoly> {
        self.subs[v].as_ref()
    }

    /// The image of coordinate `v`.
    pub fn image(&self, v: usize) -> MPoly {
        self.subs[v].clone().unwrap_or_else(|| MPoly::var(&self.field, v))
    }

    fn images(&self) -> [Option<MPoly>; NVARS] {
        core::array::from_fn(|v| if self.chart.vars().contains(&v) { Some(self.image(v)) } else { None })
    }

    /// The derivation `d/da` of the coaction at the identity.
    pub fn induced_derivation(&self) -> Result<Derivation> {
        let e = self.relation.identity(&self.field);
        let comps = self
            .chart
            .vars()
            .iter()
            .map(|&v| (v, self.relation.reduce(&self.image(v).derivative(A)).eval_var(A, &e)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        Derivation::new(self.chart, &self.field, comps)
    }
}

impl fmt::Display for Coaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} chart, {}", self.chart, self.relation)?;
        for &v in self.chart.vars() {
            if let Some(p) = &self.subs[v] {
                write!(f, ", {} -> {}", mpoly::VAR_NAMES[v], p)?;
            }
        }
        Ok(())
    }
}

/// Checks that the pulled-back chart equation lies in the ideal of the chart
/// equation, modulo the relation on `a`.
pub fn verify_coaction(model: &WeierstrassModel, c: &Coaction) -> Result<ActionCheck> {
    if c.field() != model.field() {
        return Err(Error::FieldMismatch);
    }
    let w = chart_polynomial(model, c.chart())?;
    let pulled = c.relation().reduce(&w.subst(&c.images()));
    let r = c.relation().reduce(&pulled.rem_monic(&w, X)?);
    Ok(ActionCheck::from_residual(r))
}

/// The same check at a single point `a = value` of the group, with `value`
/// in any extension of the coefficient field.
pub fn verify_coaction_at(model: &WeierstrassModel, c: &Coaction, value: &Fe) -> Result<ActionCheck> {
    if !c.relation().admits(value) {
        return Err(Error::NotApplicable(format!("{} is not a point of the group {}", value, c.relation())));
    }
    let emb = crate::algebra::Embedding::find(model.field(), value.field())?;
    let w = chart_polynomial(model, c.chart())?.embed(&emb);
    let subs: [Option<MPoly>; NVARS] =
        core::array::from_fn(|v| c.images()[v].as_ref().map(|p| p.eval_var(A, value)));
    let r = w.subst(&subs).rem_monic(&w, X)?;
    Ok(ActionCheck::from_residual(r))
}

/// Checks `sigma(sigma(P; a); b) = sigma(P; a * b)`, where `*` is the group
/// law attached to the relation.
pub fn coaction_group_law(c: &Coaction) -> Result<ActionCheck> {
    let f = c.field();
    let mut to_b: [Option<MPoly>; NVARS] = Default::default();
    to_b[A] = Some(MPoly::var(f, B));
    let mut to_ab: [Option<MPoly>; NVARS] = Default::default();
    let (a, b) = (MPoly::var(f, A), MPoly::var(f, B));
    to_ab[A] = Some(if c.relation().is_multiplicative() { &a * &b } else { &a + &b });
    let first = c.images();
    let mut residual = MPoly::zero(f);
    for &v in c.chart().vars() {
        let lhs = c.image(v).subst(&to_b).subst(&first);
        let rhs = c.image(v).subst(&to_ab);
        let d = c.relation().reduce(&(&lhs - &rhs));
        if !d.is_zero() {
            residual = d;
            break;
        }
    }
    Ok(ActionCheck::from_residual(residual))
}

/// A coordinate change `x = u^2 x' + r`, `y = u^3 y' + u^2 s x' + w` with
/// constant `u` and polynomial `r, s, w`, as polynomial maps on the affine
/// chart: the old coordinates in terms of the new ones, and back.
pub(crate) struct AffineChange {
    pub forward: [Option<MPoly>; NVARS],
    pub backward: [Option<MPoly>; NVARS],
}

pub(crate) fn affine_change(f: &Field, ch: &CoordinateChange) -> Result<AffineChange> {
    let u = ch
        .u
        .constant_value()
        .filter(|u| !u.is_zero())
        .ok_or_else(|| Error::NotApplicable(String::from("coordinate changes on a chart need a nonzero constant u")))?;
    let poly = |r: &Rf| -> Result<MPoly> {
        if !r.is_polynomial() {
            return Err(Error::NotApplicable(String::from("coordinate changes on a chart need polynomial r, s, w")));
        }
        Ok(MPoly::from_poly(r.num(), T))
    };
    let (r, s, w) = (poly(&ch.r)?, poly(&ch.s)?, poly(&ch.w)?);
    let (x, y) = (MPoly::var(f, X), MPoly::var(f, Y));
    let u2 = &u * &u;
    let u3 = &u2 * &u;
    let mut forward: [Option<MPoly>; NVARS] = Default::default();
    forward[X] = Some(&x.scale(&u2) + &r);
    forward[Y] = Some(&(&y.scale(&u3) + &(&s * &x).scale(&u2)) + &w);
    let mut backward: [Option<MPoly>; NVARS] = Default::default();
    let xr = &x - &r;
    backward[X] = Some(xr.scale(&u2.inv()?));
    backward[Y] = Some((&(&y - &(&s * &xr)) - &w).scale(&u3.inv()?));
    Ok(AffineChange { forward, backward })
}

/// Transports an affine coaction along a coordinate change. Returns the new
/// model together with the coaction in the new coordinates.
pub fn conjugate_coaction(model: &WeierstrassModel, c: &Coaction, ch: &CoordinateChange) -> Result<(WeierstrassModel, Coaction)> {
    if c.chart() != Chart::Affine {
        return Err(Error::NotApplicable(String::from("coordinate changes act on the affine chart")));
    }
    let f = model.field();
    let change = affine_change(f, ch)?;
    let images = c.images();
    let mut subs = Vec::new();
    for &v in Chart::Affine.vars() {
        let back = change.backward[v].clone().unwrap_or_else(|| MPoly::var(f, v));
        let new = back.subst(&images).subst(&change.forward);
        if new != MPoly::var(f, v) {
            subs.push((v, new));
        }
    }
    Ok((model.apply_change(ch)?, Coaction::new(Chart::Affine, c.relation(), f, subs)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::expr::parse_rf;
    use mpoly::parse_mpoly;

    pub(crate) fn model(p: u64, a: [&str; 5]) -> WeierstrassModel {
        let f = Field::prime(p).unwrap();
        WeierstrassModel::new(&f, a.map(|s| parse_rf(s, &f).unwrap())).unwrap()
    }

    pub(crate) fn coaction(m: &WeierstrassModel, chart: Chart, rel: &str, subs: &[(usize, &str)]) -> Result<Coaction> {
        let f = m.field();
        let subs = subs.iter().map(|(v, s)| (*v, parse_mpoly(s, f).unwrap())).collect();
        Coaction::new(chart, rel.parse().unwrap(), f, subs)
    }

    #[test]
    fn chart_equations() {
        let m = model(2, ["0", "0", "t^4", "0", "t"]);
        let w = chart_polynomial(&m, Chart::Planar).unwrap();
        assert_eq!(w, parse_mpoly("y^2 z + t^4 y z^2 + x^3 + t z^3", m.field()).unwrap());
        let m = model(3, ["0", "0", "0", "t", "t^2"]);
        let w = chart_polynomial(&m, Chart::Weighted).unwrap();
        assert_eq!(w, parse_mpoly("y^2 - x^3 - t s^3 x - t^2 s^4", m.field()).unwrap());
        assert_eq!(w.to_string(), "2*s^4*t^2 + 2*s^3*t*x + 2*x^3 + y^2");
    }

    #[test]
    fn relations_parse() {
        assert_eq!("a^4 = 0".parse::<Relation>().unwrap(), Relation::Nilpotent(4));
        assert_eq!("a^3=1".parse::<Relation>().unwrap(), Relation::RootOfUnity(3));
        assert_eq!("free".parse::<Relation>().unwrap(), Relation::Free);
        assert!("a^0=1".parse::<Relation>().is_err());
        assert!("b^2=1".parse::<Relation>().is_err());
        for r in [Relation::Nilpotent(4), Relation::RootOfUnity(9), Relation::Free] {
            assert_eq!(r.to_string().parse::<Relation>().unwrap(), r);
        }
    }

    #[test]
    fn alpha4_on_plane_cubics() {
        let m = model(2, ["0", "0", "t^4", "0", "t"]);
        let good = coaction(&m, Chart::Planar, "a^4=0", &[(Y, "y + a z"), (T, "t + a^2 + a t^4")]).unwrap();
        assert!(verify_coaction(&m, &good).unwrap().holds());
        assert!(coaction_group_law(&good).unwrap().holds());
        let bad = coaction(&m, Chart::Planar, "a^4=0", &[(Y, "y + a z"), (T, "t + a^2 + a t^3")]).unwrap();
        assert!(!coaction_group_law(&bad).unwrap().holds());
        match verify_coaction(&m, &bad).unwrap() {
            ActionCheck::Fails { witness, residual } => {
                assert!(!residual.is_zero());
                assert!(!witness.is_empty());
            }
            ActionCheck::Verified => panic!("corrupted action verified"),
        }
    }

    #[test]
    fn mu3_and_additive_actions() {
        let m = model(3, ["0", "1", "0", "0", "t^9"]);
        let c = coaction(&m, Chart::Affine, "a^3=1", &[(T, "a t")]).unwrap();
        assert!(verify_coaction(&m, &c).unwrap().holds());
        assert!(coaction_group_law(&c).unwrap().holds());
        let m = model(3, ["0", "t", "0", "0", "t^6"]);
        let c = coaction(&m, Chart::Affine, "a^3=1", &[(T, "a t"), (X, "a x")]).unwrap();
        assert!(verify_coaction(&m, &c).unwrap().holds());
        let m = model(3, ["0", "0", "0", "1", "t"]);
        let c = coaction(&m, Chart::Affine, "free", &[(T, "t + a^3 + a"), (X, "x - a")]).unwrap();
        assert!(verify_coaction(&m, &c).unwrap().holds());
        assert!(coaction_group_law(&c).unwrap().holds());
        let f9 = Field::extension_of_degree(3, 2).unwrap();
        for v in f9.elements() {
            assert!(verify_coaction_at(&m, &c, &v).unwrap().holds());
        }
    }

    #[test]
    fn weighted_mu3_literal_and_corrected() {
        let m = model(3, ["0", "0", "0", "t", "t"]);
        let literal = coaction(&m, Chart::Weighted, "a^3=1", &[(T, "a t"), (X, "a^2 x + (1 - a) s^2")]).unwrap();
        assert!(!verify_coaction(&m, &literal).unwrap().holds());
        let fixed = coaction(&m, Chart::Weighted, "a^3=1", &[(T, "a t"), (X, "a^2 x + (a^2 - 1) s^2")]).unwrap();
        assert!(verify_coaction(&m, &fixed).unwrap().holds());
        assert!(coaction_group_law(&fixed).unwrap().holds());
    }

    #[test]
    fn malformed_rejected() {
        let m = model(3, ["0", "1", "0", "0", "t^9"]);
        assert!(matches!(coaction(&m, Chart::Affine, "a^3=1", &[(T, "a t + 1")]), Err(Error::Malformed(_))));
        assert!(matches!(coaction(&m, Chart::Affine, "a^3=1", &[(Z, "z")]), Err(Error::Malformed(_))));
        assert!(matches!(coaction(&m, Chart::Affine, "free", &[(T, "t + s")]), Err(Error::Malformed(_))));
    }

    #[test]
    fn conjugation_preserves_verdict() {
        let m = model(3, ["0", "0", "0", "1", "t"]);
        let c = coaction(&m, Chart::Affine, "free", &[(T, "t + a^3 + a"), (X, "x - a")]).unwrap();
        let f = m.field();
        let ch = CoordinateChange {
            u: Rf::from_int(f, 2),
            r: parse_rf("t + 1", f).unwrap(),
            s: parse_rf("t^2", f).unwrap(),
            w: parse_rf("1", f).unwrap(),
        };
        let (m2, c2) = conjugate_coaction(&m, &c, &ch).unwrap();
        assert!(verify_coaction(&m2, &c2).unwrap().holds());
        assert!(coaction_group_law(&c2).unwrap().holds());
    }
}
