//! Quadratic twists in every characteristic, twist equivalence, Frobenius
//! base change, and the construction turning a wild type II fiber into a
//! type III fiber in characteristic 2.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{support, Fe, LocalContext, Place, Poly, Rf, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::tate::{tate_local, KodairaType, LocalFiberData};
use crate::weierstrass::WeierstrassModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwistMode {
    /// `p != 2`: classes in `K* / K*^2`.
    Multiplicative,
    /// `p = 2`: classes in `K / {c^2 + c}`.
    ArtinSchreier,
}

/// A twist parameter `d` in `F_q(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistParameter {
    pub d: Rf,
    pub mode: TwistMode,
}

impl TwistParameter {
    pub fn new(d: Rf) -> Result<TwistParameter> {
        let mode = if d.field().characteristic() == 2 { TwistMode::ArtinSchreier } else { TwistMode::Multiplicative };
        if mode == TwistMode::Multiplicative && d.is_zero() {
            return Err(Error::NotApplicable(String::from("twist parameter must be nonzero for p != 2")));
        }
        Ok(TwistParameter { d, mode })
    }
}

/// `y^2 = x^3 + a2 x^2 + a4 x + a6` with the same generic fiber, `p != 2`.
pub fn complete_square(model: &WeierstrassModel) -> Result<WeierstrassModel> {
    let f = model.field();
    if f.characteristic() == 2 {
        return Err(Error::NotApplicable(String::from("cannot complete the square in characteristic 2")));
    }
    let [a1, a2, a3, a4, a6] = model.coeffs();
    if a1.is_zero() && a3.is_zero() {
        return Ok(model.clone());
    }
    let half = f.from_int(2).inv()?;
    let quarter = &half * &half;
    let z = Rf::zero(f);
    WeierstrassModel::new(
        f,
        [
            z.clone(),
            a2 + &(a1 * a1).scale(&quarter),
            z,
            a4 + &(a1 * a3).scale(&half),
            a6 + &(a3 * a3).scale(&quarter),
        ],
    )
}

/// The quadratic twist by `d`. For `p != 2` the model is first put in the
/// form `y^2 = x^3 + a2 x^2 + a4 x + a6` and the twist is
/// `y^2 = x^3 + d a2 x^2 + d^2 a4 x + d^3 a6`. For `p = 2` the twist replaces
/// `a2` by `a2 + d a1^2` and `a6` by `a6 + d a3^2`.
pub fn quadratic_twist(model: &WeierstrassModel, d: &TwistParameter) -> Result<WeierstrassModel> {
    let f = model.field();
    if d.d.field() != f {
        return Err(Error::FieldMismatch);
    }
    match d.mode {
        TwistMode::Multiplicative => {
            let m = complete_square(model)?;
            let [_, a2, _, a4, a6] = m.coeffs();
            let d1 = &d.d;
            let d2 = d1 * d1;
            let d3 = &d2 * d1;
            let z = Rf::zero(f);
            WeierstrassModel::new(f, [z.clone(), a2 * d1, z, a4 * &d2, a6 * &d3])
        }
        TwistMode::ArtinSchreier => {
            let [a1, a2, a3, a4, a6] = model.coeffs();
            WeierstrassModel::new(
                f,
                [a1.clone(), a2 + &(&d.d * &(a1 * a1)), a3.clone(), a4.clone(), a6 + &(&d.d * &(a3 * a3))],
            )
        }
    }
}

/// Whether the twists by `d1` and `d2` agree over the algebraic closure of
/// the constant field. For `p != 2` this asks that `d1/d2` have even
/// valuation everywhere; for `p = 2` that `d1 + d2 = c^2 + c` for some `c`.
pub fn twist_is_trivial(d1: &TwistParameter, d2: &TwistParameter) -> Result<bool> {
    if d1.mode != d2.mode || d1.d.field() != d2.d.field() {
        return Err(Error::FieldMismatch);
    }
    match d1.mode {
        TwistMode::Multiplicative => {
            let q = d1.d.try_div(&d2.d)?;
            if (q.num().degree() - q.den().degree()) % 2 != 0 {
                return Ok(false);
            }
            for poly in [q.num(), q.den()] {
                if poly.is_constant() {
                    continue;
                }
                if poly.factor(DEFAULT_SEED)?.factors.iter().any(|(_, e)| e % 2 != 0) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        TwistMode::ArtinSchreier => Ok(artin_schreier_reduce(&d1.d.try_add(&d2.d)?)?.is_constant()),
    }
}

/// Subtracts elements `c^2 + c` from `e` until every pole has odd order.
/// The result is constant exactly when `e` lies in `{c^2 + c} + F_q`.
pub fn artin_schreier_reduce(e: &Rf) -> Result<Rf> {
    let f = e.field().clone();
    let mut e = e.clone();
    loop {
        let mut changed = false;
        // Pole at infinity.
        let k = e.num().degree() - e.den().degree();
        if !e.is_zero() && k > 0 && k % 2 == 0 {
            let lead = e.num().leading().try_div(&e.den().leading())?;
            let c = Rf::monomial(&lead.pth_root(), k / 2);
            e = &e + &(&(&c * &c) + &c);
            changed = true;
        }
        if !e.den().is_constant() {
            for (pi, mult) in e.den().factor(DEFAULT_SEED)?.factors {
                if mult % 2 != 0 {
                    continue;
                }
                let i = mult / 2;
                let rest = e.den().div_exact(&pi.pow(mult as u64))?;
                let r = e.num().rem(&pi)?.try_mul(&rest.inv_mod(&pi)?)?.rem(&pi)?;
                // Square root in F_q[t]/(pi): r^(Q/2) with Q = q^deg(pi).
                let order = f.order().and_then(|q| q.checked_pow(pi.degree() as u32)).ok_or(Error::Overflow)?;
                let s = r.powmod(order / 2, &pi);
                let c = Rf::new(s, pi.pow(i as u64))?;
                e = &e + &(&(&c * &c) + &c);
                changed = true;
                break;
            }
        }
        if !changed {
            return Ok(e);
        }
    }
}

/// Base change along the `n`-fold Frobenius `t -> t^(p^n)`.
pub fn frobenius_pullback(model: &WeierstrassModel, n: u32) -> Result<WeierstrassModel> {
    let p = model.characteristic() as usize;
    let k = p.checked_pow(n).ok_or(Error::Overflow)?;
    if k == 1 {
        return Ok(model.clone());
    }
    let a = model.coeffs().clone().map(|x| x.inflate(k));
    WeierstrassModel::new(model.field(), a)
}

/// The place lying under `v` for the `n`-fold Frobenius pullback.
pub fn frobenius_place(v: &Place, n: u32) -> Result<Place> {
    match v {
        Place::Infinity => Ok(Place::Infinity),
        Place::Finite(pi) => {
            let f = pi.field();
            let coeffs: Vec<Fe> = pi
                .coeffs()
                .into_iter()
                .map(|c| (0..n).fold(c, |x, _| x.pth_root()))
                .collect();
            Place::finite(Poly::from_coeffs(f, &coeffs))
        }
    }
}

/// Fiber data before and after a Frobenius pullback at one place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusStep {
    pub before: LocalFiberData,
    pub after: LocalFiberData,
    /// `v(Delta)` multiplied by `p^n` (expected at tame places).
    pub v_delta_scaled: bool,
    pub swan_preserved: bool,
}

/// Compares the singular fibers of `model` with those of its pullback.
pub fn frobenius_comparison(model: &WeierstrassModel, n: u32) -> Result<Vec<FrobeniusStep>> {
    let pulled = frobenius_pullback(model, n)?;
    let pn = (model.characteristic() as u32).checked_pow(n).ok_or(Error::Overflow)?;
    let mut out = Vec::new();
    for before in crate::tate::bad_fibers(model)? {
        let after = tate_local(&pulled, &frobenius_place(&before.place, n)?)?;
        out.push(FrobeniusStep {
            v_delta_scaled: after.v_delta == before.v_delta * pn,
            swan_preserved: after.swan == before.swan,
            before,
            after,
        });
    }
    Ok(out)
}

/// Builds `d` with a simple pole at `v` and no other pole such that the
/// twist turns a type II fiber with swan 2 at `v` into type III with swan 1.
///
/// On a minimal model at `v` with `v(a3) = v(a6) = 1` and leading local
/// coefficients `c3`, `c6`, this is `d = (c6 / c3^2) / pi`. The factor `1/pi`
/// is what makes `a6 + d a3^2` vanish to order 2 at `v`. The result is type
/// III only when `v(b8) = 2`; otherwise this returns `NotApplicable`.
pub fn construct_twist_ii_to_iii(model: &WeierstrassModel, v: &Place) -> Result<TwistParameter> {
    let f = model.field();
    if f.characteristic() != 2 {
        return Err(Error::NotApplicable(String::from("construction needs p = 2")));
    }
    if let Place::Infinity = v {
        let chart = model.chart_at_infinity();
        let local = construct_twist_ii_to_iii(&chart, &Place::origin(f))?;
        let inv = Rf::t(f).inv()?;
        return TwistParameter::new(local.d.compose(&inv)?);
    }
    let data = tate_local(model, v)?;
    if data.kind != KodairaType::II || data.swan != 2 {
        return Err(Error::NotApplicable(format!(
            "fiber at {} is {} with swan {}, need II with swan 2",
            v, data.kind, data.swan
        )));
    }
    let (m, _) = model.integral_minimal_at(v)?;
    for (name, a) in [("a3", m.a3()), ("a6", m.a6())] {
        let val = a.valuation(v);
        if val != Some(1) {
            return Err(Error::NotApplicable(format!(
                "v({}) = {} at {} after minimization, need 1",
                name,
                val.map_or(String::from("inf"), |x| format!("{}", x)),
                v
            )));
        }
    }
    let b8 = m.quantities().b8;
    if b8.valuation(v).is_none_or(|k| k >= 3) {
        return Err(Error::NotApplicable(format!(
            "v(b8) >= 3 at {}: b8 is unchanged by the twist, so the twisted fiber is IV rather than III",
            v
        )));
    }
    let ctx = LocalContext::new(f, v)?;
    let pi = v.poly().expect("finite place");
    let lead = |a: &Rf| -> Result<Fe> {
        let l = ctx.expand(a, 1)?;
        l.leading().cloned().ok_or(Error::PrecisionExhausted)
    };
    let c3 = lead(m.a3())?;
    let c6 = lead(m.a6())?;
    let theta = ctx.theta().expect("finite place").clone();
    // Leading coefficients are taken in u = t - theta; convert to pi.
    let dpi = pi.derivative().eval_in(ctx.embedding(), &theta);
    let unit = c6.try_mul(&dpi)?.try_div(&c3.try_mul(&c3)?)?;
    let numer = if ctx.is_rational() {
        Poly::constant(&unit)
    } else if f.is_prime_field() {
        // The residue field is F_p[t]/(pi) with generator t.
        Poly::from_coeffs(f, &unit.coeffs().iter().map(|c| f.from_int(*c as i64)).collect::<Vec<_>>())
    } else {
        return Err(Error::Unsupported(String::from(
            "twist construction at a place of degree > 1 over an extension field",
        )));
    };
    TwistParameter::new(Rf::new(numer, pi.clone())?)
}

/// Places at which a twist by `d` may change the fiber: zeros and poles for
/// `p != 2`, poles for `p = 2`.
pub fn twist_support(d: &TwistParameter) -> Vec<Place> {
    let all = support(&[&d.d], DEFAULT_SEED);
    all.into_iter()
        .filter(|v| match d.d.valuation(v) {
            None => false,
            Some(k) => match d.mode {
                TwistMode::Multiplicative => k != 0,
                TwistMode::ArtinSchreier => k < 0,
            },
        })
        .collect()
}

/// Image of a fiber type under twisting by a uniformizer when `p > 3`.
pub fn swapped_type(kind: KodairaType) -> KodairaType {
    use KodairaType::*;
    match kind {
        I0 => I0Star,
        I0Star => I0,
        In(n) => InStar(n),
        InStar(n) => In(n),
        II => IVStar,
        IVStar => II,
        III => IIIStar,
        IIIStar => III,
        IV => IIStar,
        IIStar => IV,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::expr::parse_rf;
    use crate::algebra::Field;
    use KodairaType::*;

    fn model(p: u64, a: [&str; 5]) -> WeierstrassModel {
        let f = Field::prime(p).unwrap();
        WeierstrassModel::new(&f, a.map(|s| parse_rf(s, &f).unwrap())).unwrap()
    }

    fn param(p: u64, s: &str) -> TwistParameter {
        let f = Field::prime(p).unwrap();
        TwistParameter::new(parse_rf(s, &f).unwrap()).unwrap()
    }

    fn kind_at_origin(m: &WeierstrassModel) -> KodairaType {
        tate_local(m, &Place::origin(m.field())).unwrap().kind
    }

    #[test]
    fn twist_examples() {
        let m = model(5, ["0", "0", "0", "0", "t"]);
        let tw = quadratic_twist(&m, &param(5, "t")).unwrap();
        assert_eq!(tw, model(5, ["0", "0", "0", "0", "t^4"]));
        assert_eq!(kind_at_origin(&tw), IVStar);
        assert_eq!(quadratic_twist(&m, &param(5, "1")).unwrap(), m);

        let m = model(2, ["0", "0", "t", "0", "t"]);
        let tw = quadratic_twist(&m, &param(2, "1/t")).unwrap();
        assert_eq!(tw, model(2, ["0", "0", "t", "0", "0"]));
        let d = tate_local(&tw, &Place::origin(tw.field())).unwrap();
        assert_eq!((d.kind, d.v_delta, d.swan), (IV, 4, 0));

        let m = model(2, ["0", "0", "t", "t", "t"]);
        let tw = quadratic_twist(&m, &param(2, "1/t")).unwrap();
        let d = tate_local(&tw, &Place::origin(tw.field())).unwrap();
        assert_eq!((d.kind, d.swan), (III, 1));

        let f = Field::prime(5).unwrap();
        assert!(TwistParameter::new(Rf::zero(&f)).is_err());
    }

    #[test]
    fn long_form_twist_keeps_j() {
        let m = model(7, ["t", "1", "t^2 + 1", "t", "3"]);
        let tw = quadratic_twist(&m, &param(7, "(t + 1)/t^3")).unwrap();
        assert_eq!(tw.j_invariant(), m.j_invariant());
    }

    #[test]
    fn triviality() {
        assert!(twist_is_trivial(&param(5, "t^2"), &param(5, "1")).unwrap());
        assert!(!twist_is_trivial(&param(5, "t"), &param(5, "1")).unwrap());
        assert!(twist_is_trivial(&param(5, "3*(t+1)^2/t^4"), &param(5, "2")).unwrap());
        assert!(!twist_is_trivial(&param(5, "t^2 + 1"), &param(5, "1")).unwrap());
        assert!(twist_is_trivial(&param(2, "1/t^2 + 1/t"), &param(2, "0")).unwrap());
        assert!(twist_is_trivial(&param(2, "t^4 + t^2 + 1"), &param(2, "0")).unwrap());
        assert!(!twist_is_trivial(&param(2, "1/t"), &param(2, "0")).unwrap());
        assert!(!twist_is_trivial(&param(2, "t^3"), &param(2, "0")).unwrap());
        assert!(twist_is_trivial(&param(2, "1/(t^2+t+1)^2 + 1/(t^2 + t + 1) + t"), &param(2, "t")).unwrap());
        assert!(!twist_is_trivial(&param(2, "1/(t^2+t+1)^2"), &param(2, "0")).unwrap());
        assert!(twist_is_trivial(&param(5, "t"), &param(2, "t")).is_err());
    }

    #[test]
    fn frobenius() {
        let m = model(3, ["0", "1", "0", "0", "t"]);
        assert_eq!(frobenius_pullback(&m, 0).unwrap(), m);
        let m2 = frobenius_pullback(&m, 2).unwrap();
        assert_eq!(m2, model(3, ["0", "1", "0", "0", "t^9"]));
        assert_eq!(kind_at_origin(&m), In(1));
        assert_eq!(kind_at_origin(&m2), In(9));

        let m = model(2, ["1", "0", "0", "t^4", "0"]);
        let m2 = frobenius_pullback(&m, 2).unwrap();
        assert_eq!(m2, model(2, ["1", "0", "0", "t^16", "0"]));
        assert_eq!(kind_at_origin(&m), In(8));
        assert_eq!(kind_at_origin(&m2), In(32));

        let steps = frobenius_comparison(&model(3, ["0", "1", "0", "0", "t"]), 1).unwrap();
        let at_zero = steps.iter().find(|s| !s.before.place.is_infinity()).unwrap();
        assert!(at_zero.v_delta_scaled && at_zero.swan_preserved);
    }

    #[test]
    fn frobenius_place_over_f4() {
        let f = Field::extension(2, &[1, 1, 1]).unwrap();
        let g = f.generator();
        let v = Place::at(&g);
        let w = frobenius_place(&v, 1).unwrap();
        let pi = w.poly().unwrap();
        assert_eq!(pi.pow(2), Place::at(&g).poly().unwrap().inflate(2).compose(&Poly::x(&f)));
    }

    #[test]
    fn ii_to_iii() {
        let m = model(2, ["0", "0", "t", "t", "t"]);
        let d = construct_twist_ii_to_iii(&m, &Place::origin(m.field())).unwrap();
        assert_eq!(d.d, parse_rf("1/t", m.field()).unwrap());

        // v(b8) >= 3: every twist with a simple pole gives IV.
        let m = model(2, ["0", "0", "t", "0", "t"]);
        let err = construct_twist_ii_to_iii(&m, &Place::origin(m.field())).unwrap_err();
        assert!(matches!(err, Error::NotApplicable(ref s) if s.contains("b8")));

        let f = Field::extension(2, &[1, 1, 1]).unwrap();
        let u = f.generator();
        let a = [Rf::zero(&f), Rf::zero(&f), Rf::t(&f), Rf::t(&f), Rf::t(&f).scale(&u)];
        let m = WeierstrassModel::new(&f, a).unwrap();
        let d = construct_twist_ii_to_iii(&m, &Place::origin(&f)).unwrap();
        assert_eq!(d.d, Rf::t(&f).inv().unwrap().scale(&u));
        let tw = quadratic_twist(&m, &d).unwrap();
        let data = tate_local(&tw, &Place::origin(&f)).unwrap();
        assert_eq!((data.kind, data.swan), (III, 1));

        let m = model(2, ["0", "0", "t", "0", "0"]);
        assert!(matches!(construct_twist_ii_to_iii(&m, &Place::origin(m.field())), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn ii_to_iii_degree_two() {
        let f = Field::prime(2).unwrap();
        let pi = parse_rf("t^2 + t + 1", &f).unwrap();
        let m = WeierstrassModel::new(&f, [Rf::zero(&f), Rf::zero(&f), pi.clone(), pi.clone(), &pi * &Rf::t(&f)]).unwrap();
        let v = Place::finite(pi.num().clone()).unwrap();
        let before = tate_local(&m, &v).unwrap();
        assert_eq!((before.kind, before.swan), (II, 2));
        let d = construct_twist_ii_to_iii(&m, &v).unwrap();
        assert_eq!(d.d.valuation(&v), Some(-1));
        let tw = quadratic_twist(&m, &d).unwrap();
        let after = tate_local(&tw, &v).unwrap();
        assert_eq!((after.kind, after.swan), (III, 1));
    }

    #[test]
    fn swap_table_p5() {
        let mut witnesses = alloc::vec![
            model(5, ["0", "0", "0", "1", "1"]),
            model(5, ["0", "0", "0", "0", "t"]),
            model(5, ["0", "0", "0", "t", "0"]),
            model(5, ["0", "0", "0", "0", "t^2"]),
        ];
        for n in 1..=5 {
            let s = format!("t^{}", n);
            witnesses.push(model(5, ["0", "1", "0", "0", s.as_str()]));
        }
        let d = param(5, "t");
        let mut seen = Vec::new();
        for w in witnesses {
            let k = kind_at_origin(&w);
            let tw = quadratic_twist(&w, &d).unwrap();
            let k2 = kind_at_origin(&tw);
            assert_eq!(k2, swapped_type(k), "{}", w);
            assert_eq!(kind_at_origin(&quadratic_twist(&tw, &d).unwrap()), k);
            seen.push(k);
            seen.push(k2);
        }
        assert!(seen.contains(&IIStar) && seen.contains(&InStar(5)));
    }
}
