//! Zeros of a vector field on the smooth surface, away from one fiber.
//!
//! For a derivation `D` of the affine chart with `D(t) = T(t)` and simple
//! zeros of `T`, all zeros of `D` on the resolved surface lie in the fibers
//! over the roots of `T`. Where such a fiber is `I_n` with its node a
//! singular point of the chart, `D` is multiplicative and vanishes to order
//! one along the fiber, the resolution of the `A_(n-1)` point is toric and
//! `D` acts on the chain of exceptional curves with weights `-j T'(theta)`.
//! A component of weight zero lies in the divisorial part; a node between
//! two components of nonzero weight is a simple isolated zero.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::derivation::{Derivation, PClosure};
use super::mpoly::{MPoly, T, X, Y};
use super::{chart_polynomial, Chart};
use crate::algebra::{Fe, Place, Poly, Rf, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::invariants::analyze;
use crate::tate::{bad_fibers, tate_local, KodairaType};
use crate::weierstrass::WeierstrassModel;

/// One fiber component with its multiplicity in the divisorial part.
/// Components of an `I_n` fiber are numbered around the cycle starting from
/// the one that meets the zero section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorialComponent {
    pub place: Place,
    pub component: u32,
    pub multiplicity: u32,
}

/// Whether the numbers force the vector field to extend over the excluded
/// fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionVerdict {
    /// Excluded fiber of type II and `margin > c2 - 4 |S|`.
    ExtendsTypeII,
    /// `p = 2`, excluded fiber of type III, at least two sections,
    /// `margin > c2 - 6` and `D^2 = D`.
    ExtendsTypeIII,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginReport {
    pub divisorial: Vec<DivisorialComponent>,
    pub isolated_length: u64,
    /// Self-intersection of the divisorial part.
    pub self_intersection: i64,
    /// `isolated_length - self_intersection`.
    pub margin: i64,
    pub c2: u64,
    pub verdict: ExtensionVerdict,
}

/// Computes `length(zeros) - Z^2` for `D` on the surface minus the fiber at
/// `excluded`, which must be the place at infinity. `sections` is the number
/// of sections of the fibration known to the caller.
pub fn zero_scheme_margin(model: &WeierstrassModel, d: &Derivation, excluded: &Place, sections: u32) -> Result<MarginReport> {
    if d.chart() != Chart::Affine {
        return Err(Error::NotApplicable(String::from("the margin is computed on the affine chart")));
    }
    if !excluded.is_infinity() {
        return Err(Error::NotApplicable(String::from("the excluded fiber must be the one at infinity")));
    }
    d.check_tangent(model)?;
    let f = model.field();
    let p = f.characteristic();
    let tpoly = d
        .component(T)
        .to_poly(T)
        .filter(|q| !q.is_zero())
        .ok_or_else(|| Error::NotApplicable(String::from("D(t) must be a nonzero polynomial in t")))?;
    let weights = [0, 0, 2, 3, 0, 0, 0];
    if d.component(X).weighted_degree(&weights).is_some_and(|k| k > 2) || d.component(Y).weighted_degree(&weights).is_some_and(|k| k > 3) {
        return Err(Error::NotApplicable(String::from("D has a pole along the zero section")));
    }
    let closure = d.classify_p_closed(model)?;
    let w = chart_polynomial(model, Chart::Affine)?;
    let reduced: Vec<MPoly> =
        [T, X, Y].iter().map(|&v| d.component(v).rem_monic(&w, X)).collect::<Result<_>>()?;

    let mut zeros: Vec<(Place, Fe)> = Vec::new();
    for (pi, mult) in tpoly.factor(DEFAULT_SEED)?.factors {
        if pi.degree() != 1 {
            return Err(Error::NotApplicable(format!("D(t) vanishes at the place {} of degree > 1", pi.to_string_in("t"))));
        }
        if mult > 1 {
            return Err(Error::NotApplicable(format!("D(t) has a multiple zero at {}", pi.to_string_in("t"))));
        }
        let theta = -&pi.coeff(0).try_div(&pi.leading())?;
        let slope = tpoly.derivative().eval(&theta);
        zeros.push((Place::at(&theta), slope));
    }

    let mut divisorial = Vec::new();
    let mut isolated = 0u64;
    let mut self_int = 0i64;
    for (v, slope) in &zeros {
        let e = reduced.iter().filter_map(|r| valuation_along(r, v)).min().unwrap_or(0);
        if e != 1 {
            return Err(Error::NotApplicable(format!(
                "D vanishes to order {} along the fiber at {} but D(t) only to order 1",
                e,
                v.to_string_in("t")
            )));
        }
        let fd = tate_local(model, v)?;
        let vd = model.discriminant().valuation(v).unwrap_or(0);
        if !model.is_integral_at(v) || vd != fd.v_delta as i64 {
            return Err(Error::NotApplicable(format!("the chart is not minimal at {}", v.to_string_in("t"))));
        }
        match fd.kind {
            KodairaType::I0 | KodairaType::II | KodairaType::In(1) => {
                divisorial.push(DivisorialComponent { place: v.clone(), component: 0, multiplicity: 1 });
            }
            KodairaType::In(n) => {
                if n as u64 % p != 0 {
                    return Err(Error::NotApplicable(format!("D vanishes along an I{} fiber with p not dividing {}", n, n)));
                }
                if !matches!(closure, PClosure::Multiplicative | PClosure::Scaled(_)) {
                    return Err(Error::NotApplicable(String::from("the toric model needs a multiplicative derivation")));
                }
                let weight = |j: u32| slope.scale_int(-(j as i64));
                let mut z = BTreeMap::new();
                for j in 0..n {
                    if weight(j).is_zero() {
                        z.insert(j, 1i64);
                        divisorial.push(DivisorialComponent { place: v.clone(), component: j, multiplicity: 1 });
                    } else if !weight(j + 1).is_zero() {
                        isolated += 1;
                    }
                }
                self_int += cycle_self_intersection(n, &z);
            }
            other => {
                return Err(Error::NotApplicable(format!("the chart is singular along the {} fiber at {}", other, v.to_string_in("t"))));
            }
        }
    }

    for fd in bad_fibers(model)? {
        if fd.place == *excluded || zeros.iter().any(|(v, _)| *v == fd.place) {
            continue;
        }
        if !matches!(fd.kind, KodairaType::In(1) | KodairaType::II) {
            return Err(Error::NotApplicable(format!(
                "the chart is singular along the {} fiber at {}",
                fd.kind,
                fd.place.to_string_in("t")
            )));
        }
    }

    let margin = isolated as i64 - self_int;
    let c2 = analyze(model)?.c2;
    let far = tate_local(model, excluded)?;
    let verdict = if far.kind == KodairaType::II && margin > c2 as i64 - 4 * sections as i64 {
        ExtensionVerdict::ExtendsTypeII
    } else if p == 2 && far.kind == KodairaType::III && sections >= 2 && margin > c2 as i64 - 6 && closure == PClosure::Multiplicative {
        ExtensionVerdict::ExtendsTypeIII
    } else {
        ExtensionVerdict::Inconclusive
    };
    Ok(MarginReport { divisorial, isolated_length: isolated, self_intersection: self_int, margin, c2, verdict })
}

/// Largest `e` with `pi^e` dividing every coefficient of a normal form.
fn valuation_along(r: &MPoly, v: &Place) -> Option<i64> {
    let f = r.field();
    let mut groups: BTreeMap<(u32, u32), Vec<Fe>> = BTreeMap::new();
    for (m, c) in r.terms() {
        let g = groups.entry((m[X], m[Y])).or_default();
        let k = m[T] as usize;
        if g.len() <= k {
            g.resize(k + 1, f.zero());
        }
        g[k] = c.clone();
    }
    groups.values().filter_map(|c| Rf::from_poly(Poly::from_coeffs(f, c)).valuation(v)).min()
}

/// `Z^2` for `Z = sum z_j E_j` on a cycle of `n` rational curves.
fn cycle_self_intersection(n: u32, z: &BTreeMap<u32, i64>) -> i64 {
    let get = |j: u32| z.get(&(j % n)).copied().unwrap_or(0);
    match n {
        1 => 0,
        2 => -2 * (get(0).pow(2) + get(1).pow(2)) + 4 * get(0) * get(1),
        _ => (0..n).map(|j| -2 * get(j).pow(2) + 2 * get(j) * get(j + 1)).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::super::mpoly::parse_mpoly;
    use super::super::tests::model;
    use super::*;

    fn t_dt(m: &WeierstrassModel) -> Derivation {
        Derivation::with_solved_y(m, alloc::vec![(T, parse_mpoly("t", m.field()).unwrap())]).unwrap()
    }

    #[test]
    fn margin_nine_at_three() {
        let m = model(3, ["0", "1", "0", "0", "t^9"]);
        let r = zero_scheme_margin(&m, &t_dt(&m), &Place::Infinity, 1).unwrap();
        assert_eq!(r.isolated_length, 3);
        assert_eq!(r.self_intersection, -6);
        assert_eq!(r.margin, 9);
        assert_eq!(r.c2, 12);
        assert_eq!(r.verdict, ExtensionVerdict::ExtendsTypeII);
        let comps: Vec<u32> = r.divisorial.iter().map(|c| c.component).collect();
        assert_eq!(comps, [0, 3, 6]);
    }

    #[test]
    fn margin_eight_at_two() {
        let m = model(2, ["1", "0", "0", "t^4", "0"]);
        let r = zero_scheme_margin(&m, &t_dt(&m), &Place::Infinity, 2).unwrap();
        assert_eq!(r.isolated_length, 0);
        assert_eq!(r.margin, 8);
        assert_eq!(r.verdict, ExtensionVerdict::ExtendsTypeIII);
        let r1 = zero_scheme_margin(&m, &t_dt(&m), &Place::Infinity, 1).unwrap();
        assert_eq!(r1.verdict, ExtensionVerdict::Inconclusive);
    }

    #[test]
    fn nowhere_vanishing_field() {
        let m = model(3, ["0", "0", "0", "2", "1"]);
        let d = Derivation::with_solved_y(&m, alloc::vec![(T, parse_mpoly("1", m.field()).unwrap())]).unwrap();
        let r = zero_scheme_margin(&m, &d, &Place::Infinity, 1).unwrap();
        assert_eq!(r.margin, 0);
        assert!(r.divisorial.is_empty());
        // no zeros on the chart, but the resolution of the I9 point is not modelled
        let m = model(3, ["0", "1", "0", "0", "t^9"]);
        let d = Derivation::with_solved_y(&m, alloc::vec![(T, parse_mpoly("1", m.field()).unwrap())]).unwrap();
        assert!(matches!(zero_scheme_margin(&m, &d, &Place::Infinity, 1), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn unsupported_cases() {
        let m = model(3, ["0", "1", "0", "0", "t^9"]);
        let d = t_dt(&m);
        assert!(matches!(zero_scheme_margin(&m, &d, &Place::origin(m.field()), 1), Err(Error::NotApplicable(_))));
        let m = model(5, ["0", "0", "0", "0", "t"]);
        let d = Derivation::with_solved_y(&m, alloc::vec![(T, parse_mpoly("t", m.field()).unwrap()), (X, parse_mpoly("2 x", m.field()).unwrap())]).unwrap();
        assert!(matches!(zero_scheme_margin(&m, &d, &Place::Infinity, 1), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn cycle_intersections() {
        let z: BTreeMap<u32, i64> = (0..5).map(|j| (j, 1)).collect();
        assert_eq!(cycle_self_intersection(5, &z), 0);
        let z: BTreeMap<u32, i64> = [(0, 1), (1, 1)].into_iter().collect();
        assert_eq!(cycle_self_intersection(2, &z), 0);
        assert_eq!(cycle_self_intersection(4, &z), -2);
    }
}
