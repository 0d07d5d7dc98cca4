//! Global invariants of an elliptic surface and the arithmetic checks built
//! on them: two-fiber lattice admissibility, restrictions on additive fibers
//! under a vertical `mu_p` action, and the fixed-point Euler-number ledger.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{Place, Rf};
use crate::error::{Error, Result};
use crate::tate::{bad_fibers, swan_constraint_holds, KodairaType, LocalFiberData};
use crate::weierstrass::WeierstrassModel;

/// Singular fibers and numerical invariants of a Weierstrass model.
#[derive(Clone, Debug)]
pub struct SurfaceReport {
    pub model: WeierstrassModel,
    pub fibers: Vec<LocalFiberData>,
    pub c2: u64,
    pub chi: u64,
    pub isotrivial: bool,
    pub j: Rf,
    pub notes: Vec<String>,
}

pub fn analyze(model: &WeierstrassModel) -> Result<SurfaceReport> {
    let fibers = bad_fibers(model)?;
    let c2: u64 = fibers.iter().map(|d| d.place_degree as u64 * d.v_delta as u64).sum();
    if c2 % 12 != 0 {
        return Err(Error::Internal(format!("c2 = {} is not divisible by 12", c2)));
    }
    let j = model.j_invariant();
    let isotrivial = j.is_constant();
    let notes = report_notes(model, &fibers);
    Ok(SurfaceReport { model: model.clone(), fibers, c2, chi: c2 / 12, isotrivial, j, notes })
}

fn report_notes(model: &WeierstrassModel, fibers: &[LocalFiberData]) -> Vec<String> {
    let mut notes = Vec::new();
    if fibers.iter().any(|d| d.place_degree > 1) {
        notes.push(String::from(
            "places of degree > 1 are classified geometrically; split and non-split multiplicative reduction are not distinguished",
        ));
    }
    if model.characteristic() == 2 {
        if let [d] = fibers {
            if let KodairaType::InStar(n) = d.kind {
                if n % 8 == 4 {
                    let k = (n - 4) / 8;
                    notes.push(format!(
                        "unique fiber I{}star with swan {}: the value 4k+2 = {} is forced by c2 = e + swan = 12 chi; 4k+8 = {} would give c2 = {}",
                        n,
                        d.swan,
                        4 * k + 2,
                        4 * k + 8,
                        n + 6 + 4 * k + 8
                    ));
                }
            }
        }
    }
    notes
}

/// The root lattice spanned by the non-identity components of a fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootLattice {
    Zero,
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

impl RootLattice {
    pub fn of(kind: KodairaType) -> RootLattice {
        use KodairaType::*;
        match kind {
            I0 | In(1) | II => RootLattice::Zero,
            In(n) => RootLattice::A(n - 1),
            III => RootLattice::A(1),
            IV => RootLattice::A(2),
            I0Star => RootLattice::D(4),
            InStar(n) => RootLattice::D(n + 4),
            IVStar => RootLattice::E6,
            IIIStar => RootLattice::E7,
            IIStar => RootLattice::E8,
        }
    }

    pub fn rank(&self) -> u32 {
        match *self {
            RootLattice::Zero => 0,
            RootLattice::A(n) | RootLattice::D(n) => n,
            RootLattice::E6 => 6,
            RootLattice::E7 => 7,
            RootLattice::E8 => 8,
        }
    }

    pub fn discriminant(&self) -> u64 {
        match *self {
            RootLattice::Zero | RootLattice::E8 => 1,
            RootLattice::A(n) => n as u64 + 1,
            RootLattice::D(_) => 4,
            RootLattice::E6 => 3,
            RootLattice::E7 => 2,
        }
    }
}

impl fmt::Display for RootLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLattice::Zero => f.write_str("0"),
            RootLattice::A(n) => write!(f, "A{}", n),
            RootLattice::D(n) => write!(f, "D{}", n),
            RootLattice::E6 => f.write_str("E6"),
            RootLattice::E7 => f.write_str("E7"),
            RootLattice::E8 => f.write_str("E8"),
        }
    }
}

/// An admissible configuration of exactly two singular fibers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoFiberCase {
    /// Tame pairs with trivial Swan conductors.
    IIWithIIStar,
    IIIWithIIIStar,
    IVWithIVStar,
    I0StarPair,
    /// `p = 3`, type II with swan 1 and a tame partner.
    IIWithIIIStar,
    IIWithPowerI { n: u32 },
    IIWithPowerIStar { n: u32 },
    /// `p = 2`, type II (swan 2) or III (swan 1) with a tame partner.
    WildWithIVStar { first: KodairaType },
    WildWithPowerI { first: KodairaType, n: u32 },
}

impl fmt::Display for TwoFiberCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoFiberCase::IIWithIIStar => f.write_str("(II, IIstar), swan 0"),
            TwoFiberCase::IIIWithIIIStar => f.write_str("(III, IIIstar), swan 0"),
            TwoFiberCase::IVWithIVStar => f.write_str("(IV, IVstar), swan 0"),
            TwoFiberCase::I0StarPair => f.write_str("(I0star, I0star), swan 0"),
            TwoFiberCase::IIWithIIIStar => f.write_str("(II, IIIstar), p = 3, isotrivial"),
            TwoFiberCase::IIWithPowerI { n } => write!(f, "(II, I{}), p = 3", n),
            TwoFiberCase::IIWithPowerIStar { n } => write!(f, "(II, I{}star), p = 3", n),
            TwoFiberCase::WildWithIVStar { first } => write!(f, "({}, IVstar), p = 2, isotrivial", first),
            TwoFiberCase::WildWithPowerI { first, n } => write!(f, "({}, I{}), p = 2", first, n),
        }
    }
}

/// The first condition a type pair fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exclusion {
    /// The fiber cannot have the Swan conductor the configuration requires.
    SwanForced { kind: KodairaType },
    /// Product of the lattice discriminants is not of the required class.
    DiscriminantClass { disc: u64 },
    /// `rk(T) = 2 + rk(T1) + rk(T2)` cannot equal `b2 = c2 - 2` with `12 | c2`.
    RankMismatch { rank: u32, c2: u32 },
    /// A quadratic twist supported at both fibers would produce a forbidden pair.
    QuadraticTwist { first: RootLattice, second: RootLattice },
}

impl fmt::Display for Exclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exclusion::SwanForced { kind } => write!(f, "swan conductor of {} cannot take the required value", kind),
            Exclusion::DiscriminantClass { disc } => write!(f, "discriminant {} has the wrong class", disc),
            Exclusion::RankMismatch { rank, c2 } => write!(f, "rank {} does not match b2 = c2 - 2 with c2 = {}", rank, c2),
            Exclusion::QuadraticTwist { first, second } => {
                write!(f, "quadratic twist of {} + {} gives a forbidden pair", first, second)
            }
        }
    }
}

impl Exclusion {
    pub fn code(&self) -> &'static str {
        match self {
            Exclusion::SwanForced { .. } => "swan_forced",
            Exclusion::DiscriminantClass { .. } => "discriminant_class",
            Exclusion::RankMismatch { .. } => "rank_mismatch",
            Exclusion::QuadraticTwist { .. } => "quadratic_twist",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeVerdict {
    Admissible(TwoFiberCase),
    Excluded(Exclusion),
    NotApplicable,
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

fn is_square(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}

fn p_power_times_square(mut n: u64, p: u64) -> bool {
    while n % p == 0 && n > 0 {
        n /= p;
    }
    n > 0 && is_square(n)
}

/// Decides whether two singular fibers can be the only singular fibers of
/// an elliptic surface over the projective line in characteristic `p`.
///
/// Pairs of additive fibers are tested with trivial Swan conductors. In
/// characteristic 3 a type II fiber is taken with swan 1, and in
/// characteristic 2 types II and III with swan 2 and 1; the partner must then
/// be tame. Any other shape is `NotApplicable`.
pub fn lattice_check(t1: KodairaType, t2: KodairaType, p: u64) -> LatticeVerdict {
    use KodairaType::*;
    let wild_first = |t: KodairaType| match p {
        3 => t == II,
        2 => matches!(t, II | III),
        _ => false,
    };
    if wild_first(t1) || wild_first(t2) {
        let (f1, f2) = if wild_first(t1) { (t1, t2) } else { (t2, t1) };
        return wild_pair(f1, f2, p);
    }
    if !t1.is_additive() || !t2.is_additive() {
        return LatticeVerdict::NotApplicable;
    }
    for t in [t1, t2] {
        if !swan_constraint_holds(t, 0, p) {
            return LatticeVerdict::Excluded(Exclusion::SwanForced { kind: t });
        }
    }
    let (l1, l2) = (RootLattice::of(t1), RootLattice::of(t2));
    let disc = l1.discriminant() * l2.discriminant();
    if !p_power_times_square(disc, p) {
        return LatticeVerdict::Excluded(Exclusion::DiscriminantClass { disc });
    }
    let rank = 2 + l1.rank() + l2.rank();
    let c2 = t1.euler() + t2.euler();
    if c2 % 12 != 0 || rank != c2 - 2 {
        return LatticeVerdict::Excluded(Exclusion::RankMismatch { rank, c2 });
    }
    let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
    let case = match (lo, hi) {
        (II, IIStar) => TwoFiberCase::IIWithIIStar,
        (III, IIIStar) => TwoFiberCase::IIIWithIIIStar,
        (IV, IVStar) => TwoFiberCase::IVWithIVStar,
        (I0Star, I0Star) => TwoFiberCase::I0StarPair,
        _ => return LatticeVerdict::Excluded(Exclusion::QuadraticTwist { first: l1, second: l2 }),
    };
    LatticeVerdict::Admissible(case)
}

fn wild_pair(f1: KodairaType, f2: KodairaType, p: u64) -> LatticeVerdict {
    use KodairaType::*;
    if f2 == I0 {
        return LatticeVerdict::NotApplicable;
    }
    if !swan_constraint_holds(f2, 0, p) || (p == 2 && matches!(f2, II | III)) || (p == 3 && f2 == II) {
        return LatticeVerdict::Excluded(Exclusion::SwanForced { kind: f2 });
    }
    let v1 = f1.euler() + if p == 3 { 1 } else if f1 == II { 2 } else { 1 };
    let c2 = v1 + f2.euler();
    let rank = 2 + RootLattice::of(f1).rank() + RootLattice::of(f2).rank();
    // After twisting the partner to I_n, its component group must be a p-group.
    let n = match f2 {
        In(n) => Some(n),
        InStar(n) => Some(n),
        _ => None,
    };
    if let Some(n) = n {
        if !is_power_of(n as u64, p) {
            return LatticeVerdict::Excluded(Exclusion::DiscriminantClass { disc: n as u64 });
        }
    }
    if c2 % 12 != 0 {
        return LatticeVerdict::Excluded(Exclusion::RankMismatch { rank, c2 });
    }
    let case = match (p, f2) {
        (3, IIIStar) => TwoFiberCase::IIWithIIIStar,
        (3, In(n)) => TwoFiberCase::IIWithPowerI { n },
        (3, InStar(n)) => TwoFiberCase::IIWithPowerIStar { n },
        (2, IVStar) => TwoFiberCase::WildWithIVStar { first: f1 },
        (2, In(n)) => TwoFiberCase::WildWithPowerI { first: f1, n },
        _ => {
            let l = RootLattice::of(f2);
            return LatticeVerdict::Excluded(Exclusion::DiscriminantClass { disc: l.discriminant() });
        }
    };
    LatticeVerdict::Admissible(case)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberRestriction {
    Allowed,
    Forbidden,
}

/// Additive fiber types compatible with `mu_p` inside the generic fiber's
/// automorphism scheme, for `p > 3`. For `p = 11 mod 12` only the exclusion
/// of `In*` with `n >= 1` applies.
pub fn mu_p_fiber_restrictions(kind: KodairaType, p: u64) -> Result<FiberRestriction> {
    use KodairaType::*;
    if p <= 3 {
        return Err(Error::NotApplicable(format!("restrictions need p > 3, got {}", p)));
    }
    if !kind.is_additive() {
        return Err(Error::NotApplicable(format!("{} is not additive", kind)));
    }
    let ok = match (kind, p % 12) {
        (InStar(_), _) => false,
        (I0Star, _) => true,
        (_, 1) => false,
        (III | IIIStar, 7) => true,
        (_, 7) => false,
        (II | IV | IVStar | IIStar, 5) => true,
        (_, 5) => false,
        _ => true,
    };
    Ok(if ok { FiberRestriction::Allowed } else { FiberRestriction::Forbidden })
}

/// Possible Euler numbers of the fixed locus of a `mu_{p^n}` action on a
/// fiber of the given type. Smooth fibers contribute 0.
pub fn fixed_locus_euler_options(kind: KodairaType, pn: u64) -> Vec<u32> {
    match kind {
        KodairaType::I0 => alloc::vec![0],
        KodairaType::II => {
            let mut v = alloc::vec![2];
            match pn {
                3 => v.push(3),
                2 => v.extend([3, 4]),
                _ => {}
            }
            v
        }
        KodairaType::III if pn == 2 => alloc::vec![3, 4],
        k => alloc::vec![k.euler()],
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LedgerVerdict {
    /// Every assignment of fixed-locus Euler numbers summing to `c2`.
    Consistent(Vec<Vec<u32>>),
    Inconsistent,
}

/// Enumerates fixed-locus Euler numbers `e_i` for the given fibers with
/// `sum e_i = c2`.
pub fn fixed_point_assignments(kinds: &[KodairaType], c2: u64, pn: u64) -> LedgerVerdict {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(kinds: &[KodairaType], pn: u64, left: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        match kinds.split_first() {
            None => {
                if left == 0 {
                    out.push(cur.clone());
                }
            }
            Some((k, rest)) => {
                for e in fixed_locus_euler_options(*k, pn) {
                    cur.push(e);
                    go(rest, pn, left - e as i64, cur, out);
                    cur.pop();
                }
            }
        }
    }
    go(kinds, pn, c2 as i64, &mut cur, &mut out);
    if out.is_empty() {
        LedgerVerdict::Inconsistent
    } else {
        LedgerVerdict::Consistent(out)
    }
}

/// Checks `c2 = e(F1^mu) + e(F2^mu)` for a surface with exactly two singular
/// fibers carrying a `mu_{p^n}` action, `pn = p^n`.
pub fn fixed_point_ledger(report: &SurfaceReport, pn: u64) -> Result<LedgerVerdict> {
    let p = report.model.characteristic();
    if !is_power_of(pn, p) || pn == 1 {
        return Err(Error::NotApplicable(format!("{} is not a power of {}", pn, p)));
    }
    let kinds: Vec<KodairaType> = report.fibers.iter().map(|d| d.kind).collect();
    if kinds.len() != 2 || report.fibers.iter().any(|d| d.place_degree != 1) {
        return Err(Error::NotApplicable(format!("{} singular fibers, need exactly two rational ones", kinds.len())));
    }
    Ok(fixed_point_assignments(&kinds, report.c2, pn))
}

impl SurfaceReport {
    pub fn fiber_at(&self, v: &Place) -> Option<&LocalFiberData> {
        self.fibers.iter().find(|d| &d.place == v)
    }

    pub fn kinds(&self) -> Vec<KodairaType> {
        self.fibers.iter().map(|d| d.kind).collect()
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

    fn summary(r: &SurfaceReport) -> Vec<(String, KodairaType, u32, u32)> {
        r.fibers.iter().map(|d| (d.place.to_string(), d.kind, d.v_delta, d.swan)).collect()
    }

    #[test]
    fn report_mult_and_wild() {
        let r = analyze(&model(3, ["0", "1", "0", "0", "t^9"])).unwrap();
        assert_eq!(summary(&r), [("t".into(), In(9), 9, 0), ("inf".into(), II, 3, 1)]);
        assert_eq!((r.c2, r.chi, r.isotrivial), (12, 1, false));

        let r = analyze(&model(5, ["0", "0", "0", "0", "t"])).unwrap();
        assert_eq!(r.kinds(), [II, IIStar]);
        assert!(r.isotrivial);

        let r = analyze(&model(5, ["0", "0", "0", "0", "1"])).unwrap();
        assert!(r.fibers.is_empty());
        assert_eq!((r.c2, r.isotrivial), (0, true));
    }

    #[test]
    fn unique_i4_star_note() {
        let f = Field::prime(2).unwrap();
        let m = WeierstrassModel::new(
            &f,
            [Rf::one(&f), parse_rf("t", &f).unwrap(), Rf::zero(&f), Rf::one(&f), Rf::zero(&f)],
        )
        .unwrap();
        let r = analyze(&m).unwrap();
        assert_eq!(summary(&r), [("inf".into(), InStar(4), 12, 2)]);
        assert_eq!(r.notes.len(), 1);
        assert!(r.notes[0].contains("4k+2 = 2"));
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(lattice_check(II, IIStar, 5), LatticeVerdict::Admissible(TwoFiberCase::IIWithIIStar));
        assert_eq!(lattice_check(I0Star, I0Star, 2), LatticeVerdict::Excluded(Exclusion::SwanForced { kind: I0Star }));
        assert_eq!(lattice_check(II, In(9), 3), LatticeVerdict::Admissible(TwoFiberCase::IIWithPowerI { n: 9 }));
        assert_eq!(lattice_check(III, IIStar, 5), LatticeVerdict::Excluded(Exclusion::DiscriminantClass { disc: 2 }));
        assert_eq!(lattice_check(In(3), In(9), 5), LatticeVerdict::NotApplicable);
        assert!(matches!(lattice_check(I0Star, InStar(12), 5), LatticeVerdict::Excluded(Exclusion::QuadraticTwist { .. })));
        assert!(matches!(lattice_check(II, InStar(4), 7), LatticeVerdict::Excluded(Exclusion::QuadraticTwist { .. })));
        assert_eq!(lattice_check(In(8), III, 2), LatticeVerdict::Admissible(TwoFiberCase::WildWithPowerI { first: III, n: 8 }));
        assert!(matches!(lattice_check(II, In(12), 2), LatticeVerdict::Excluded(Exclusion::DiscriminantClass { .. })));
        assert_eq!(lattice_check(II, InStar(3), 3), LatticeVerdict::Admissible(TwoFiberCase::IIWithPowerIStar { n: 3 }));
    }

    fn listed(t1: KodairaType, t2: KodairaType, p: u64) -> bool {
        let (a, b) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let pow = |n: u32, odd: bool, min: u32| {
            (min..12).any(|i| (i % 2 == 1) == odd && (p as u32).checked_pow(i) == Some(n))
        };
        match p {
            3 => match (a, b) {
                (III, IIIStar) | (I0Star, I0Star) => true,
                (In(n), II) => pow(n, false, 2),
                (II, IIIStar) => true,
                (II, InStar(n)) => pow(n, true, 1),
                _ => false,
            },
            2 => match (a, b) {
                (IV, IVStar) => true,
                (II | III, IVStar) => true,
                (In(n), II | III) => pow(n, true, 3),
                _ => false,
            },
            _ => matches!((a, b), (II, IIStar) | (III, IIIStar) | (IV, IVStar) | (I0Star, I0Star)),
        }
    }

    #[test]
    fn lattice_exhaustive() {
        for p in [2u64, 3, 5, 7, 13] {
            let types: Vec<_> = KodairaType::all_up_to(22).into_iter().filter(|t| RootLattice::of(*t).rank() <= 20).collect();
            for &a in &types {
                for &b in &types {
                    match lattice_check(a, b, p) {
                        LatticeVerdict::Admissible(_) => assert!(listed(a, b, p), "{} {} p={}", a, b, p),
                        LatticeVerdict::Excluded(_) => assert!(!listed(a, b, p), "{} {} p={}", a, b, p),
                        LatticeVerdict::NotApplicable => {
                            assert!(!listed(a, b, p));
                            assert!(!a.is_additive() || !b.is_additive());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mod_twelve_restrictions() {
        assert_eq!(mu_p_fiber_restrictions(InStar(1), 13).unwrap(), FiberRestriction::Forbidden);
        assert_eq!(mu_p_fiber_restrictions(III, 7).unwrap(), FiberRestriction::Allowed);
        assert_eq!(mu_p_fiber_restrictions(II, 7).unwrap(), FiberRestriction::Forbidden);
        assert_eq!(mu_p_fiber_restrictions(I0Star, 13).unwrap(), FiberRestriction::Allowed);
        assert_eq!(mu_p_fiber_restrictions(IV, 13).unwrap(), FiberRestriction::Forbidden);
        assert_eq!(mu_p_fiber_restrictions(IIStar, 5).unwrap(), FiberRestriction::Allowed);
        assert_eq!(mu_p_fiber_restrictions(IIStar, 11).unwrap(), FiberRestriction::Allowed);
        assert!(mu_p_fiber_restrictions(II, 3).is_err());
        assert!(mu_p_fiber_restrictions(In(2), 7).is_err());
    }

    #[test]
    fn ledger() {
        assert_eq!(fixed_point_assignments(&[II, In(9)], 12, 3), LedgerVerdict::Consistent(alloc::vec![alloc::vec![3, 9]]));
        assert_eq!(fixed_point_assignments(&[II, IIStar], 12, 5), LedgerVerdict::Consistent(alloc::vec![alloc::vec![2, 10]]));
        assert_eq!(fixed_point_assignments(&[II, II], 12, 5), LedgerVerdict::Inconsistent);
        assert_eq!(fixed_point_assignments(&[III, In(8)], 12, 2), LedgerVerdict::Consistent(alloc::vec![alloc::vec![4, 8]]));
        let r = analyze(&model(3, ["0", "1", "0", "0", "t^9"])).unwrap();
        assert!(matches!(fixed_point_ledger(&r, 3).unwrap(), LedgerVerdict::Consistent(_)));
        let r = analyze(&model(5, ["0", "0", "0", "0", "1"])).unwrap();
        assert!(fixed_point_ledger(&r, 5).is_err());
    }
}
