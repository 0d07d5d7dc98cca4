//! Weierstrass models `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over
//! `F_q(t)`.

use alloc::string::{String, ToString};
use core::fmt;

use crate::algebra::{Field, LocalContext, Place, Poly, Rf};
use crate::error::{Error, Result};
use crate::tate;

/// A Weierstrass model with nonzero discriminant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassModel {
    field: Field,
    a: [Rf; 5],
}

/// The standard quantities attached to a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quantities {
    pub b2: Rf,
    pub b4: Rf,
    pub b6: Rf,
    pub b8: Rf,
    pub c4: Rf,
    pub c6: Rf,
    pub delta: Rf,
    pub j: Rf,
}

/// The substitution `x = u^2 x' + r`, `y = u^3 y' + u^2 s x' + w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateChange {
    pub u: Rf,
    pub r: Rf,
    pub s: Rf,
    pub w: Rf,
}

const WEIGHTS: [i64; 5] = [1, 2, 3, 4, 6];

fn b_values(a: &[Rf; 5]) -> [Rf; 4] {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = &(a1 * a1) + &a2.scale_int(4);
    let b4 = &a4.scale_int(2) + &(a1 * a3);
    let b6 = &(a3 * a3) + &a6.scale_int(4);
    let b8 = &(&(&(&(a1 * a1) * a6) + &(a2 * a6).scale_int(4)) - &(&(a1 * a3) * a4)) + &(&(a2 * &(a3 * a3)) - &(a4 * a4));
    [b2, b4, b6, b8]
}

fn discriminant_of(b: &[Rf; 4]) -> Rf {
    let [b2, b4, b6, b8] = b;
    let t1 = -&(&(b2 * b2) * b8);
    let t2 = (&(b4 * b4) * b4).scale_int(-8);
    let t3 = (b6 * b6).scale_int(-27);
    let t4 = (&(b2 * b4) * b6).scale_int(9);
    &(&t1 + &t2) + &(&t3 + &t4)
}

impl WeierstrassModel {
    /// `a = [a1, a2, a3, a4, a6]`.
    pub fn new(field: &Field, a: [Rf; 5]) -> Result<WeierstrassModel> {
        if a.iter().any(|x| x.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let m = WeierstrassModel { field: field.clone(), a };
        if m.discriminant().is_zero() {
            return Err(Error::SingularModel);
        }
        Ok(m)
    }

    /// Convenience constructor from polynomial coefficient lists (constant first).
    pub fn from_int_coeffs(field: &Field, a: [&[i64]; 5]) -> Result<WeierstrassModel> {
        Self::new(field, a.map(|c| Rf::from_poly(Poly::from_ints(field, c))))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn characteristic(&self) -> u64 {
        self.field.characteristic()
    }

    /// `[a1, a2, a3, a4, a6]`.
    pub fn coeffs(&self) -> &[Rf; 5] {
        &self.a
    }

    pub fn a1(&self) -> &Rf {
        &self.a[0]
    }

    pub fn a2(&self) -> &Rf {
        &self.a[1]
    }

    pub fn a3(&self) -> &Rf {
        &self.a[2]
    }

    pub fn a4(&self) -> &Rf {
        &self.a[3]
    }

    pub fn a6(&self) -> &Rf {
        &self.a[4]
    }

    pub fn quantities(&self) -> Quantities {
        let b = b_values(&self.a);
        let b2 = &b[0];
        let c4 = &(b2 * b2) - &b[1].scale_int(24);
        let c6 = &(&(-&(&(b2 * b2) * b2)) + &(b2 * &b[1]).scale_int(36)) - &b[2].scale_int(216);
        let delta = discriminant_of(&b);
        let j = (&(&c4 * &c4) * &c4).try_div(&delta).expect("nonzero discriminant");
        let [b2, b4, b6, b8] = b;
        Quantities { b2, b4, b6, b8, c4, c6, delta, j }
    }

    pub fn discriminant(&self) -> Rf {
        discriminant_of(&b_values(&self.a))
    }

    pub fn j_invariant(&self) -> Rf {
        self.quantities().j
    }

    pub fn apply_change(&self, c: &CoordinateChange) -> Result<WeierstrassModel> {
        if c.u.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let [a1, a2, a3, a4, a6] = &self.a;
        let CoordinateChange { u, r, s, w } = c;
        let n1 = a1 + &s.scale_int(2);
        let n2 = &(&(a2 - &(s * a1)) + &r.scale_int(3)) - &(s * s);
        let n3 = &(a3 + &(r * a1)) + &w.scale_int(2);
        let n4 = &(&(&(a4 - &(s * a3)) + &(r * a2).scale_int(2)) - &(&(w + &(r * s)) * a1))
            + &(&(r * r).scale_int(3) - &(s * w).scale_int(2));
        let n6 = &(&(&(a6 + &(r * a4)) + &(&(r * r) * a2)) + &(&(r * r) * r))
            - &(&(&(w * a3) + &(w * w)) + &(&(w * r) * a1));
        let uinv = u.inv()?;
        let mut out = [n1, n2, n3, n4, n6];
        for (x, k) in out.iter_mut().zip(WEIGHTS) {
            *x = &*x * &uinv.pow(k)?;
        }
        Self::new(&self.field, out)
    }

    /// Least `w` with `s^(i w) a_i(1/s)` integral at `s = 0` for every `i`.
    pub fn infinity_weight(&self) -> i64 {
        self.a
            .iter()
            .zip(WEIGHTS)
            .filter_map(|(x, k)| x.valuation(&Place::Infinity).map(|v| (-v).div_euclid(k) + i64::from((-v).rem_euclid(k) != 0)))
            .max()
            .unwrap_or(0)
    }

    /// The model in the coordinate `s = 1/t`, rescaled to be integral and
    /// minimally weighted at `s = 0`. Its variable is again written `t`.
    pub fn chart_at_infinity(&self) -> WeierstrassModel {
        let w = self.infinity_weight();
        let f = &self.field;
        let inv = Rf::t(f).inv().expect("t is nonzero");
        let a = core::array::from_fn(|i| {
            let k = WEIGHTS[i];
            &self.a[i].compose(&inv).expect("substitution") * &Rf::t(f).pow(k * w).expect("t is nonzero")
        });
        Self::new(f, a).expect("rescaling preserves nonsingularity")
    }

    pub fn is_integral_at(&self, v: &Place) -> bool {
        self.a.iter().all(|x| x.valuation(v).is_none_or(|n| n >= 0))
    }

    /// An integral model that is minimal at `v`, and the change producing it.
    pub fn integral_minimal_at(&self, v: &Place) -> Result<(WeierstrassModel, CoordinateChange)> {
        let f = &self.field;
        let change = match v {
            Place::Infinity => {
                let w = self.infinity_weight();
                let chart = self.chart_at_infinity();
                let (_, local) = chart.integral_minimal_at(&Place::origin(f))?;
                let inv = Rf::t(f).inv().expect("t is nonzero");
                let back = CoordinateChange {
                    u: local.u.compose(&inv)?,
                    r: local.r.compose(&inv)?,
                    s: local.s.compose(&inv)?,
                    w: local.w.compose(&inv)?,
                };
                CoordinateChange::scaling(Rf::t(f).pow(w)?).then(&back)
            }
            Place::Finite(pi) => {
                let run = tate::run(self, v)?;
                let ctx = LocalContext::new(f, v)?;
                if ctx.is_rational() {
                    let lift = |l: &tate::LaurentPoly| -> Result<Rf> {
                        match l.min_exp() {
                            None => Ok(Rf::zero(f)),
                            Some(lo) => ctx.from_local(lo, &l.dense_from(lo)),
                        }
                    };
                    CoordinateChange {
                        u: ctx.from_local(run.u_exp, &[f.one()])?,
                        r: lift(&run.r)?,
                        s: lift(&run.s)?,
                        w: lift(&run.w)?,
                    }
                } else if run.r.is_zero() && run.s.is_zero() && run.w.is_zero() {
                    CoordinateChange::scaling(Rf::from_poly(pi.clone()).pow(run.u_exp)?)
                } else {
                    return Err(Error::Unsupported(String::from(
                        "minimal model at a place of degree > 1 needing a translation",
                    )));
                }
            }
        };
        let out = self.apply_change(&change)?;
        Ok((out, change))
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2")?;
        let [a1, a2, a3, a4, a6] = &self.a;
        let term = |c: &Rf, m: &str| -> Option<String> {
            if c.is_zero() {
                None
            } else if c.is_one() {
                Some(String::from(if m.is_empty() { "1" } else { m }))
            } else {
                let s = c.to_string();
                let s = if s.contains(' ') || s.contains('/') { alloc::format!("({})", s) } else { s };
                Some(if m.is_empty() { s } else { alloc::format!("{}*{}", s, m) })
            }
        };
        for t in [term(a1, "x*y"), term(a3, "y")].into_iter().flatten() {
            write!(f, " + {}", t)?;
        }
        write!(f, " = x^3")?;
        for t in [term(a2, "x^2"), term(a4, "x"), term(a6, "")].into_iter().flatten() {
            write!(f, " + {}", t)?;
        }
        Ok(())
    }
}

impl fmt::Debug for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl CoordinateChange {
    pub fn identity(f: &Field) -> CoordinateChange {
        CoordinateChange { u: Rf::one(f), r: Rf::zero(f), s: Rf::zero(f), w: Rf::zero(f) }
    }

    pub fn scaling(u: Rf) -> CoordinateChange {
        let f = u.field().clone();
        CoordinateChange { u, r: Rf::zero(&f), s: Rf::zero(&f), w: Rf::zero(&f) }
    }

    pub fn is_identity(&self) -> bool {
        self.u.is_one() && self.r.is_zero() && self.s.is_zero() && self.w.is_zero()
    }

    /// The change equivalent to applying `self` and then `next`.
    pub fn then(&self, next: &CoordinateChange) -> CoordinateChange {
        let (u1, r1, s1, w1) = (&self.u, &self.r, &self.s, &self.w);
        let (u2, r2, s2, w2) = (&next.u, &next.r, &next.s, &next.w);
        let u1sq = u1 * u1;
        CoordinateChange {
            u: u1 * u2,
            r: r1 + &(&u1sq * r2),
            s: s1 + &(u1 * s2),
            w: &(w1 + &(&(&u1sq * s1) * r2)) + &(&(&u1sq * u1) * w2),
        }
    }

    pub fn inverse(&self) -> Result<CoordinateChange> {
        let ui = self.u.inv()?;
        let ui2 = &ui * &ui;
        Ok(CoordinateChange {
            r: -&(&self.r * &ui2),
            s: -&(&self.s * &ui),
            w: &(&(&self.r * &self.s) - &self.w) * &(&ui2 * &ui),
            u: ui,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::expr::parse_rf;

    fn model(p: u64, a: [&str; 5]) -> WeierstrassModel {
        let f = Field::prime(p).unwrap();
        WeierstrassModel::new(&f, a.map(|s| parse_rf(s, &f).unwrap())).unwrap()
    }

    #[test]
    fn quantities_in_small_characteristic() {
        let m = model(2, ["1", "0", "0", "0", "t^3 + t"]);
        let q = m.quantities();
        assert_eq!(q.delta, m.a6().clone());
        assert_eq!(q.j, m.a6().inv().unwrap());
        let m = model(5, ["0", "0", "0", "0", "t"]);
        assert_eq!(m.discriminant().to_string(), "3*t^2");
        assert!(m.j_invariant().is_zero());
        let m = model(2, ["1", "t", "0", "1", "0"]);
        assert!(m.discriminant().is_one());
    }

    #[test]
    fn singular_models_are_rejected() {
        let f = Field::prime(5).unwrap();
        let z = Rf::zero(&f);
        assert_eq!(
            WeierstrassModel::new(&f, [z.clone(), z.clone(), z.clone(), z.clone(), z]),
            Err(Error::SingularModel)
        );
    }

    #[test]
    fn changes_scale_discriminant() {
        let m = model(5, ["0", "0", "0", "0", "t"]);
        let f = m.field().clone();
        let c = CoordinateChange::scaling(Rf::t(&f));
        let m2 = m.apply_change(&c).unwrap();
        assert_eq!(m2.discriminant(), &m.discriminant() * &Rf::t(&f).pow(-12).unwrap());
        assert_eq!(m.apply_change(&CoordinateChange::identity(&f)).unwrap(), m);
        let c = CoordinateChange {
            u: parse_rf("t+1", &f).unwrap(),
            r: parse_rf("t^2", &f).unwrap(),
            s: parse_rf("3", &f).unwrap(),
            w: parse_rf("1/t", &f).unwrap(),
        };
        let m3 = m.apply_change(&c).unwrap();
        assert_eq!(m3.apply_change(&c.inverse().unwrap()).unwrap(), m);
        assert_eq!(m3.j_invariant(), m.j_invariant());
        let id = c.then(&c.inverse().unwrap());
        assert!(id.is_identity());
    }

    #[test]
    fn charts_at_infinity() {
        let m = model(5, ["0", "0", "0", "0", "t"]);
        assert_eq!(m.chart_at_infinity(), model(5, ["0", "0", "0", "0", "t^5"]));
        let c = model(5, ["0", "0", "0", "0", "1"]);
        assert_eq!(c.chart_at_infinity(), c);
        let m = model(3, ["0", "0", "0", "t", "t"]);
        assert_eq!(m.chart_at_infinity(), model(3, ["0", "0", "0", "t^3", "t^5"]));
    }

    #[test]
    fn minimal_models() {
        let m = model(5, ["0", "0", "0", "0", "t^13"]);
        let f = m.field().clone();
        let (mm, c) = m.integral_minimal_at(&Place::origin(&f)).unwrap();
        assert_eq!(mm, model(5, ["0", "0", "0", "0", "t"]));
        assert_eq!(c.u, Rf::t(&f).pow(2).unwrap());
        let (again, c2) = mm.integral_minimal_at(&Place::origin(&f)).unwrap();
        assert_eq!(again, mm);
        assert!(c2.is_identity());
        // translations are needed here: a wild fiber at p = 2
        let m = model(2, ["0", "0", "t^3 + t^2", "t^4", "t^8 + t^7"]);
        let f2 = m.field().clone();
        let (mm, c) = m.integral_minimal_at(&Place::origin(&f2)).unwrap();
        assert_eq!(mm.discriminant(), &m.discriminant() * &c.u.pow(-12).unwrap());
        let d0 = crate::tate::tate_local(&m, &Place::origin(&f2)).unwrap();
        let v = mm.discriminant().valuation(&Place::origin(&f2)).unwrap();
        assert_eq!(v as u32, d0.v_delta);
        assert!(mm.is_integral_at(&Place::origin(&f2)));
    }

    #[test]
    fn fractional_coefficients_become_integral() {
        let m = model(7, ["0", "0", "0", "1/t^4", "1/t^6 + 1"]);
        let f = m.field().clone();
        let (mm, _) = m.integral_minimal_at(&Place::origin(&f)).unwrap();
        assert!(mm.is_integral_at(&Place::origin(&f)));
        let (mi, _) = m.integral_minimal_at(&Place::Infinity).unwrap();
        assert!(mi.is_integral_at(&Place::Infinity));
    }
}
