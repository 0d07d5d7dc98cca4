use std::collections::BTreeMap;

use kodaira::actions::mpoly::{MPoly, T, X};
use kodaira::actions::{conjugate_coaction, verify_coaction, ActionCheck, Chart, Coaction, Derivation, Relation};
use kodaira::algebra::{Field, LocalContext, Place, Poly, Rf};
use kodaira::invariants::{fixed_point_assignments, LedgerVerdict};
use kodaira::tate::{bad_fibers, swan_constraint_holds, tate_local, KodairaType};
use kodaira::twists::{quadratic_twist, twist_support, TwistParameter};
use kodaira::weierstrass::{CoordinateChange, WeierstrassModel};
use proptest::prelude::*;

const PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

fn poly(f: &Field, c: &[u64]) -> Poly {
    let p = f.characteristic();
    Poly::from_ints(f, &c.iter().map(|x| (x % p) as i64).collect::<Vec<_>>())
}

fn rf(f: &Field, n: &[u64], d: &[u64]) -> Option<Rf> {
    let den = poly(f, d);
    if den.is_zero() {
        return None;
    }
    Some(Rf::new(poly(f, n), den).unwrap())
}

fn coeffs(deg: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..1000, 1..=deg + 1)
}

fn field() -> impl Strategy<Value = Field> {
    (0..PRIMES.len()).prop_map(|i| Field::prime(PRIMES[i]).unwrap())
}

fn model_in(f: &Field, a: &[Vec<u64>; 5]) -> Option<WeierstrassModel> {
    WeierstrassModel::new(f, std::array::from_fn(|i| Rf::from_poly(poly(f, &a[i])))).ok()
}

fn model_coeffs(deg: usize) -> impl Strategy<Value = [Vec<u64>; 5]> {
    [coeffs(deg), coeffs(deg), coeffs(deg), coeffs(deg), coeffs(deg)]
}

fn factor_map(g: &Poly) -> BTreeMap<Poly, u32> {
    let mut out = BTreeMap::new();
    if g.degree() > 0 {
        for (h, e) in g.factor(0).unwrap().factors {
            *out.entry(h).or_insert(0) += e;
        }
    }
    out
}

fn places_of(r: &Rf) -> Vec<Place> {
    let mut out = vec![Place::Infinity];
    for g in [r.num(), r.den()] {
        out.extend(factor_map(g).into_keys().map(|h| Place::finite(h).unwrap()));
    }
    out
}

fn change(f: &Field, u: u64, r: &[u64], s: &[u64], w: &[u64]) -> Option<CoordinateChange> {
    let u = f.from_int((u % f.characteristic()) as i64);
    if u.is_zero() {
        return None;
    }
    Some(CoordinateChange {
        u: Rf::constant(&u),
        r: Rf::from_poly(poly(f, r)),
        s: Rf::from_poly(poly(f, s)),
        w: Rf::from_poly(poly(f, w)),
    })
}

fn fiber_summary(m: &WeierstrassModel) -> Vec<(Place, KodairaType, u32, u32)> {
    bad_fibers(m).unwrap().into_iter().map(|d| (d.place, d.kind, d.v_delta, d.swan)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn factorization_is_multiplicative(f in field(), a in coeffs(6), b in coeffs(6)) {
        let (g, h) = (poly(&f, &a), poly(&f, &b));
        prop_assume!(!g.is_zero() && !h.is_zero());
        let mut union = factor_map(&g);
        for (k, e) in factor_map(&h) {
            *union.entry(k).or_insert(0) += e;
        }
        prop_assert_eq!(factor_map(&(&g * &h)), union);
    }

    #[test]
    fn valuations_add(f in field(), a in coeffs(4), b in coeffs(3), c in coeffs(4), d in coeffs(3), root in 0u64..1000) {
        let (Some(x), Some(y)) = (rf(&f, &a, &b), rf(&f, &c, &d)) else { return Ok(()) };
        prop_assume!(!x.is_zero() && !y.is_zero());
        let xy = &x * &y;
        let mut places = places_of(&xy);
        places.push(Place::at(&f.from_int((root % f.characteristic()) as i64)));
        for v in places {
            prop_assert_eq!(xy.valuation(&v), Some(x.valuation(&v).unwrap() + y.valuation(&v).unwrap()));
        }
    }

    #[test]
    fn degree_formula(f in field(), a in coeffs(7), b in coeffs(7)) {
        let Some(x) = rf(&f, &a, &b) else { return Ok(()) };
        prop_assume!(!x.is_zero());
        let total: i64 = places_of(&x).iter().map(|v| v.degree() as i64 * x.valuation(v).unwrap()).sum();
        prop_assert_eq!(total, 0);
    }

    #[test]
    fn expansions_are_coherent(f in field(), a in coeffs(5), b in coeffs(4), pi in coeffs(2), lo in 1usize..6, extra in 1usize..6) {
        let Some(x) = rf(&f, &a, &b) else { return Ok(()) };
        let Some((h, _)) = factor_map(&poly(&f, &pi)).into_iter().next() else { return Ok(()) };
        for v in [Place::finite(h).unwrap(), Place::Infinity] {
            let ctx = LocalContext::new(&f, &v).unwrap();
            let high = ctx.expand(&x, lo + extra).unwrap();
            prop_assert!(high.truncate(lo) == ctx.expand(&x, lo).unwrap());
        }
    }

    #[test]
    fn changes_keep_j_and_scale_delta(
        f in field(), a in model_coeffs(3), u in 1u64..1000, r in coeffs(2), s in coeffs(2), w in coeffs(2)
    ) {
        let Some(m) = model_in(&f, &a) else { return Ok(()) };
        let Some(ch) = change(&f, u, &r, &s, &w) else { return Ok(()) };
        let moved = m.apply_change(&ch).unwrap();
        prop_assert_eq!(moved.j_invariant(), m.j_invariant());
        let u12 = ch.u.pow(12).unwrap();
        prop_assert_eq!(&moved.discriminant() * &u12, m.discriminant());
    }

    #[test]
    fn b_identity(f in field(), a in model_coeffs(3)) {
        let Some(m) = model_in(&f, &a) else { return Ok(()) };
        let q = m.quantities();
        prop_assert_eq!(q.b8.scale_int(4), &(&q.b2 * &q.b6) - &(&q.b4 * &q.b4));
    }

    #[test]
    fn minimization_is_idempotent(f in field(), a in model_coeffs(4)) {
        let Some(m) = model_in(&f, &a) else { return Ok(()) };
        for v in [Place::origin(&f), Place::Infinity] {
            let (once, _) = m.integral_minimal_at(&v).unwrap();
            let (twice, ch) = once.integral_minimal_at(&v).unwrap();
            prop_assert_eq!(&twice, &once);
            prop_assert!(ch.is_identity());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn local_data_is_consistent(f in field(), a in model_coeffs(3)) {
        let Some(m) = model_in(&f, &a) else { return Ok(()) };
        let p = f.characteristic();
        for d in bad_fibers(&m).unwrap() {
            prop_assert_eq!(d.v_delta, d.euler + d.swan);
            prop_assert_eq!(d.euler, d.kind.euler());
            prop_assert!(swan_constraint_holds(d.kind, d.swan, p), "{} swan {} at p = {}", d.kind, d.swan, p);
            if d.kind.is_multiplicative() {
                prop_assert_eq!(d.swan, 0);
            }
        }
    }

    #[test]
    fn classification_ignores_coordinates(
        f in field(), a in model_coeffs(3), u in 1u64..1000, r in coeffs(2), s in coeffs(2), w in coeffs(2)
    ) {
        let Some(m) = model_in(&f, &a) else { return Ok(()) };
        let Some(ch) = change(&f, u, &r, &s, &w) else { return Ok(()) };
        let moved = m.apply_change(&ch).unwrap();
        prop_assert_eq!(fiber_summary(&m), fiber_summary(&moved));
    }

    #[test]
    fn base_change_keeps_fibers_at_rational_places(p_idx in 0usize..3, a in model_coeffs(3), root in 0u64..1000) {
        let p = PRIMES[p_idx];
        let f = Field::prime(p).unwrap();
        let Some(m) = model_in(&f, &a) else { return Ok(()) };
        let big = Field::extension_of_degree(p, 2).unwrap();
        let lifted = model_in(&big, &a).unwrap();
        for v in [Place::at(&f.from_int((root % p) as i64)), Place::Infinity] {
            let w = match &v {
                Place::Infinity => Place::Infinity,
                _ => Place::at(&big.from_int((root % p) as i64)),
            };
            let (x, y) = (tate_local(&m, &v).unwrap(), tate_local(&lifted, &w).unwrap());
            prop_assert_eq!((x.kind, x.v_delta, x.swan), (y.kind, y.v_delta, y.swan));
        }
    }

    #[test]
    fn twists_act_only_on_their_support(f in field(), a in model_coeffs(2), n in coeffs(2), d in coeffs(1)) {
        let Some(m) = model_in(&f, &a) else { return Ok(()) };
        let Some(d) = rf(&f, &n, &d) else { return Ok(()) };
        prop_assume!(!d.is_zero());
        let param = TwistParameter::new(d).unwrap();
        let tw = quadratic_twist(&m, &param).unwrap();
        prop_assert_eq!(tw.j_invariant(), m.j_invariant());
        let support = twist_support(&param);
        let keep = |x: &Vec<(Place, KodairaType, u32, u32)>| -> Vec<_> {
            x.iter().filter(|y| !support.contains(&y.0)).cloned().collect()
        };
        prop_assert_eq!(keep(&fiber_summary(&tw)), keep(&fiber_summary(&m)));
    }

    #[test]
    fn identity_coaction_holds(f in field(), a in model_coeffs(3)) {
        let Some(m) = model_in(&f, &a) else { return Ok(()) };
        for rel in [Relation::Free, Relation::RootOfUnity(f.characteristic() as u32), Relation::Nilpotent(f.characteristic() as u32)] {
            let id = Coaction::new(Chart::Affine, rel, &f, vec![]).unwrap();
            prop_assert_eq!(verify_coaction(&m, &id).unwrap(), ActionCheck::Verified);
        }
    }

    #[test]
    fn conjugation_keeps_the_verdict(u in 1u64..3, r in coeffs(2), s in coeffs(2), w in coeffs(2), corrupt in any::<bool>()) {
        let f = Field::prime(3).unwrap();
        let m = model_in(&f, &[vec![0], vec![0], vec![0], vec![1], vec![0, 1]]).unwrap();
        let shift = if corrupt { "t + a^3 + a + a t" } else { "t + a^3 + a" };
        let c = Coaction::new(
            Chart::Affine,
            Relation::Free,
            &f,
            vec![(T, kodaira::actions::mpoly::parse_mpoly(shift, &f).unwrap()), (X, kodaira::actions::mpoly::parse_mpoly("x - a", &f).unwrap())],
        )
        .unwrap();
        let Some(ch) = change(&f, u, &r, &s, &w) else { return Ok(()) };
        let (m2, c2) = conjugate_coaction(&m, &c, &ch).unwrap();
        prop_assert_eq!(verify_coaction(&m, &c).unwrap().holds(), !corrupt);
        prop_assert_eq!(verify_coaction(&m2, &c2).unwrap().holds(), !corrupt);
    }

    #[test]
    fn derivations_kill_pth_powers(f in field(), a in model_coeffs(2), dt in coeffs(2), dx in coeffs(2), g in coeffs(2), h in coeffs(2)) {
        let Some(m) = model_in(&f, &a) else { return Ok(()) };
        let d = Derivation::new(
            Chart::Affine,
            &f,
            vec![(T, MPoly::from_poly(&poly(&f, &dt), T)), (X, MPoly::from_poly(&poly(&f, &dx), T))],
        )
        .unwrap();
        let gens = [
            MPoly::from_poly(&poly(&f, &g), T),
            &MPoly::from_poly(&poly(&f, &h), T) * &MPoly::var(&f, X),
        ];
        prop_assert!(d.kills_frobenius_ideal(&m, &gens).unwrap());
    }

    #[test]
    fn smooth_fibers_do_not_change_the_ledger(
        picks in prop::collection::vec(0usize..10, 1..4), c2 in prop::sample::select(vec![12u64, 24, 36]), p_idx in 2usize..5
    ) {
        use KodairaType::*;
        let pool = [II, III, IV, I0Star, IVStar, IIIStar, IIStar, In(1), In(3), InStar(2)];
        let kinds: Vec<_> = picks.iter().map(|&i| pool[i]).collect();
        let pn = PRIMES[p_idx];
        let mut with_smooth = kinds.clone();
        with_smooth.push(I0);
        let base = fixed_point_assignments(&kinds, c2, pn);
        let more = fixed_point_assignments(&with_smooth, c2, pn);
        prop_assert_eq!(base == LedgerVerdict::Inconsistent, more == LedgerVerdict::Inconsistent);
    }
}
