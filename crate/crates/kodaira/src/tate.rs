//! Tate's algorithm: the Kodaira type of the fiber at a place, in every
//! characteristic.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::algebra::{support, Fe, Field, LocalContext, Place, Series, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::weierstrass::WeierstrassModel;

/// Kodaira fiber types. `In(n)` and `InStar(n)` require `n >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaType {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Topological Euler number of the fiber.
    pub fn euler(&self) -> u32 {
        match *self {
            KodairaType::I0 => 0,
            KodairaType::In(n) => n,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::I0Star => 6,
            KodairaType::InStar(n) => n + 6,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    /// Number of irreducible components over the algebraic closure.
    pub fn components(&self) -> u32 {
        match *self {
            KodairaType::I0 | KodairaType::II => 1,
            KodairaType::In(n) => n,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::I0Star => 5,
            KodairaType::InStar(n) => n + 5,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }

    pub fn is_multiplicative(&self) -> bool {
        matches!(self, KodairaType::In(_))
    }

    pub fn is_additive(&self) -> bool {
        !matches!(self, KodairaType::I0 | KodairaType::In(_))
    }

    /// Every type with Euler number at most `max_euler`, in a fixed order.
    pub fn all_up_to(max_euler: u32) -> Vec<KodairaType> {
        let mut out = Vec::new();
        for t in [
            KodairaType::I0,
            KodairaType::II,
            KodairaType::III,
            KodairaType::IV,
            KodairaType::I0Star,
            KodairaType::IVStar,
            KodairaType::IIIStar,
            KodairaType::IIStar,
        ] {
            if t.euler() <= max_euler {
                out.push(t);
            }
        }
        for n in 1..=max_euler {
            out.push(KodairaType::In(n));
            if n + 6 <= max_euler {
                out.push(KodairaType::InStar(n));
            }
        }
        out
    }
}

impl fmt::Display for KodairaType {
    /// Report spelling: `I0`, `I9`, `II`, `I0star`, `I3star`, `IVstar`, ...
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I0 => f.write_str("I0"),
            KodairaType::In(n) => write!(f, "I{}", n),
            KodairaType::II => f.write_str("II"),
            KodairaType::III => f.write_str("III"),
            KodairaType::IV => f.write_str("IV"),
            KodairaType::I0Star => f.write_str("I0star"),
            KodairaType::InStar(n) => write!(f, "I{}star", n),
            KodairaType::IVStar => f.write_str("IVstar"),
            KodairaType::IIIStar => f.write_str("IIIstar"),
            KodairaType::IIStar => f.write_str("IIstar"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = Error;

    /// Accepts the report spelling, with `*` allowed in place of `star`.
    fn from_str(s: &str) -> Result<KodairaType> {
        let bad = || Error::Malformed(alloc::format!("unknown Kodaira type '{}'", s));
        let t = s.trim();
        let (core, star) = if let Some(c) = t.strip_suffix("star") {
            (c, true)
        } else if let Some(c) = t.strip_suffix('*') {
            (c, true)
        } else {
            (t, false)
        };
        let base = match core {
            "II" => Some(if star { KodairaType::IIStar } else { KodairaType::II }),
            "III" => Some(if star { KodairaType::IIIStar } else { KodairaType::III }),
            "IV" => Some(if star { KodairaType::IVStar } else { KodairaType::IV }),
            _ => None,
        };
        if let Some(b) = base {
            return Ok(b);
        }
        let digits = core.strip_prefix('I').or_else(|| core.strip_prefix("I_")).ok_or_else(bad)?;
        let digits = digits.strip_prefix('_').unwrap_or(digits);
        let n: u32 = digits.parse().map_err(|_| bad())?;
        Ok(match (n, star) {
            (0, false) => KodairaType::I0,
            (0, true) => KodairaType::I0Star,
            (n, false) => KodairaType::In(n),
            (n, true) => KodairaType::InStar(n),
        })
    }
}

/// Classification data at one place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFiberData {
    pub place: Place,
    pub place_degree: usize,
    pub kind: KodairaType,
    /// Valuation of the discriminant of a minimal model.
    pub v_delta: u32,
    pub euler: u32,
    pub swan: u32,
    pub components: u32,
}

/// Finite sum `sum c_k u^k` with residue-field coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct LaurentPoly {
    f: Field,
    terms: BTreeMap<i64, Fe>,
}

impl LaurentPoly {
    fn zero(f: &Field) -> Self {
        LaurentPoly { f: f.clone(), terms: BTreeMap::new() }
    }

    fn monomial(c: &Fe, k: i64) -> Self {
        let mut out = Self::zero(c.field());
        out.add_term(c, k);
        out
    }

    fn add_term(&mut self, c: &Fe, k: i64) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(|| self.f.zero());
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(c, *k);
        }
        out
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(&self.f);
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                out.add_term(&(a * b), i + j);
            }
        }
        out
    }

    /// Multiplies by `u^k`.
    fn shifted(&self, k: i64) -> Self {
        LaurentPoly { f: self.f.clone(), terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Dense coefficient list starting at exponent `lo`.
    pub(crate) fn dense_from(&self, lo: i64) -> Vec<Fe> {
        let hi = self.terms.keys().next_back().copied().unwrap_or(lo);
        (lo..=hi).map(|k| self.terms.get(&k).cloned().unwrap_or_else(|| self.f.zero())).collect()
    }
}

/// Outcome of the local algorithm: the type, the minimal discriminant
/// valuation and the change `(u^u_exp, r, s, w)` (in the local parameter `u`)
/// from the input model to a minimal one.
#[derive(Clone, Debug)]
pub(crate) struct LocalRun {
    pub kind: KodairaType,
    pub v_delta: u32,
    pub u_exp: i64,
    pub r: LaurentPoly,
    pub s: LaurentPoly,
    pub w: LaurentPoly,
}

struct Engine {
    f: Field,
    p: u64,
    a: [Series; 5],
    /// total change so far; `big_u = u^k`
    k: i64,
    r: LaurentPoly,
    s: LaurentPoly,
    w: LaurentPoly,
}

const WEIGHTS: [i64; 5] = [1, 2, 3, 4, 6];

impl Engine {
    fn c(&self, n: i64) -> Fe {
        self.f.from_int(n)
    }

    fn res(&self, i: usize) -> Fe {
        self.a[i].coeff(0)
    }

    /// Coefficient of `u^j` in `a_i`.
    fn at(&self, i: usize, j: usize) -> Result<Fe> {
        if j >= self.a[i].prec() {
            return Err(Error::PrecisionExhausted);
        }
        Ok(self.a[i].coeff(j))
    }

    fn val(&self, s: &Series, bound: usize) -> Result<usize> {
        // smallest valuation, or `bound` if it is at least that
        match s.valuation() {
            Some(v) if v < bound => Ok(v),
            _ if s.prec() >= bound => Ok(bound),
            _ => Err(Error::PrecisionExhausted),
        }
    }

    fn b(&self) -> [Series; 4] {
        let [a1, a2, a3, a4, a6] = &self.a;
        let four = self.c(4);
        let b2 = a1.mul(a1).add(&a2.scale(&four));
        let b4 = a4.scale(&self.c(2)).add(&a1.mul(a3));
        let b6 = a3.mul(a3).add(&a6.scale(&four));
        let b8 = a1.mul(a1).mul(a6).add(&a2.mul(a6).scale(&four)).sub(&a1.mul(a3).mul(a4)).add(&a2.mul(a3).mul(a3)).sub(&a4.mul(a4));
        [b2, b4, b6, b8]
    }

    /// Applies the translation with `r = rc u^rk`, `s = sc u^sk`, `w = wc u^wk`.
    fn rst(&mut self, r: (Fe, i64), s: (Fe, i64), w: (Fe, i64)) {
        let prec = self.a.iter().map(|x| x.prec()).max().unwrap_or(0);
        let mono = |c: &Fe, k: i64| {
            let mut m = Series::zero(&self.f, prec);
            if (k as usize) < prec && !c.is_zero() {
                m.c[k as usize] = c.c.clone();
            }
            m
        };
        let rs = mono(&r.0, r.1);
        let ss = mono(&s.0, s.1);
        let ws = mono(&w.0, w.1);
        let [a1, a2, a3, a4, a6] = self.a.clone();
        let two = self.c(2);
        let three = self.c(3);
        let n1 = a1.add(&ss.scale(&two));
        let n2 = a2.sub(&ss.mul(&a1)).add(&rs.scale(&three)).sub(&ss.mul(&ss));
        let n3 = a3.add(&rs.mul(&a1)).add(&ws.scale(&two));
        let n4 = a4
            .sub(&ss.mul(&a3))
            .add(&rs.mul(&a2).scale(&two))
            .sub(&ws.add(&rs.mul(&ss)).mul(&a1))
            .add(&rs.mul(&rs).scale(&three))
            .sub(&ss.mul(&ws).scale(&two));
        let n6 = a6
            .add(&rs.mul(&a4))
            .add(&rs.mul(&rs).mul(&a2))
            .add(&rs.mul(&rs).mul(&rs))
            .sub(&ws.mul(&a3))
            .sub(&ws.mul(&ws))
            .sub(&ws.mul(&rs).mul(&a1));
        self.a = [n1, n2, n3, n4, n6];
        // compose with the running change: R += U^2 r, S += U s, W += U^2 S r + U^3 w
        let lr = LaurentPoly::monomial(&r.0, r.1);
        let ls = LaurentPoly::monomial(&s.0, s.1);
        let lw = LaurentPoly::monomial(&w.0, w.1);
        let k = self.k;
        let w_new = self.w.add(&self.s.mul(&lr).shifted(2 * k)).add(&lw.shifted(3 * k));
        self.r = self.r.add(&lr.shifted(2 * k));
        self.s = self.s.add(&ls.shifted(k));
        self.w = w_new;
    }

    fn zero(&self) -> (Fe, i64) {
        (self.f.zero(), 0)
    }

    fn sqrt(&self, a: &Fe) -> Fe {
        // characteristic 2: the Frobenius inverse
        a.pth_root()
    }

    fn cbrt(&self, a: &Fe) -> Fe {
        // characteristic 3
        a.pth_root()
    }

    fn inv(&self, a: &Fe) -> Result<Fe> {
        a.inv().map_err(|_| Error::Internal(String::from("unexpected zero residue")))
    }

    fn classify(&mut self, mut v_delta: u32) -> Result<KodairaType> {
        let p = self.p;
        loop {
            if v_delta == 0 {
                return Ok(KodairaType::I0);
            }
            let [b2, b4, b6, _] = self.b();
            let (r, w);
            if p == 2 {
                if self.val(&b2, 1)? >= 1 {
                    let rr = self.sqrt(&self.res(3));
                    let t = &(&(&(&rr + &self.res(1)) * &rr) + &self.res(3)) * &rr + self.res(4);
                    r = rr;
                    w = self.sqrt(&t);
                } else {
                    let a1inv = self.inv(&self.res(0))?;
                    let rr = &a1inv * &self.res(2);
                    w = &a1inv * &(&self.res(3) + &(&rr * &rr));
                    r = rr;
                }
            } else if p == 3 {
                if self.val(&b2, 1)? >= 1 {
                    r = self.cbrt(&-b6.coeff(0));
                } else {
                    r = -&(&b4.coeff(0) * &self.inv(&b2.coeff(0))?);
                }
                w = &(&self.res(0) * &r) + &self.res(2);
            } else {
                let b2r = b2.coeff(0);
                let c4r = &(&b2r * &b2r) - &b4.coeff(0).scale_int(24);
                if c4r.is_zero() {
                    r = -&(&b2r * &self.inv(&self.c(12))?);
                } else {
                    let c6r = &(&(-&(&(&b2r * &b2r) * &b2r)) + &(&b2r * &b4.coeff(0)).scale_int(36)) - &b6.coeff(0).scale_int(216);
                    r = -&(&(&c6r + &(&b2r * &c4r)) * &self.inv(&c4r.scale_int(12))?);
                }
                w = -&(&(&(&self.res(0) * &r) + &self.res(2)) * &self.inv(&self.c(2))?);
            }
            self.rst((r, 0), self.zero(), (w, 0));
            let [b2, _, b6, b8] = self.b();
            if self.val(&b2, 1)? == 0 {
                return Ok(KodairaType::In(v_delta));
            }
            if self.val(&self.a[4], 2)? < 2 {
                return Ok(KodairaType::II);
            }
            if self.val(&b8, 3)? < 3 {
                return Ok(KodairaType::III);
            }
            if self.val(&b6, 3)? < 3 {
                return Ok(KodairaType::IV);
            }
            // make u | a1, a2; u^2 | a3, a4; u^3 | a6
            let (s, w) = if p == 2 {
                (self.sqrt(&self.res(1)), self.sqrt(&self.at(4, 2)?))
            } else {
                let half = self.inv(&self.c(2))?;
                let s = -&(&self.res(0) * &half);
                let w = -&(&self.at(2, 1)? * &half);
                (s, w)
            };
            self.rst(self.zero(), (s, 0), (w, 1));
            let b = self.at(1, 1)?;
            let c = self.at(3, 2)?;
            let d = self.at(4, 3)?;
            let bb = &b * &b;
            let disc = &(&(&(&(&d * &d).scale_int(27) - &(&bb * &(&c * &c))) + &(&(&bb * &b) * &d).scale_int(4))
                - &(&(&b * &c) * &d).scale_int(18))
                + &(&(&c * &c) * &c).scale_int(4);
            let x = &c.scale_int(3) - &bb;
            if !disc.is_zero() {
                return Ok(KodairaType::I0Star);
            }
            if !x.is_zero() {
                // double root: move it to 0 and run the I_n^* subprocedure
                let root = if p == 2 {
                    self.sqrt(&c)
                } else if p == 3 {
                    &c * &self.inv(&b)?
                } else {
                    &(&(&b * &c) - &d.scale_int(9)) * &self.inv(&x.scale_int(2))?
                };
                self.rst((root, 1), self.zero(), self.zero());
                let n = self.star_chain()?;
                return Ok(KodairaType::InStar(n));
            }
            // triple root
            let root = if p == 2 {
                b.clone()
            } else if p == 3 {
                self.cbrt(&-&d)
            } else {
                -&(&b * &self.inv(&self.c(3))?)
            };
            self.rst((root, 1), self.zero(), self.zero());
            let a3t = self.at(2, 2)?;
            let a6t = self.at(4, 4)?;
            if !(&(&a3t * &a3t) + &a6t.scale_int(4)).is_zero() {
                return Ok(KodairaType::IVStar);
            }
            let wt = if p == 2 { self.sqrt(&a6t) } else { -&(&a3t * &self.inv(&self.c(2))?) };
            self.rst(self.zero(), self.zero(), (wt, 2));
            if self.val(&self.a[3], 4)? < 4 {
                return Ok(KodairaType::IIIStar);
            }
            if self.val(&self.a[4], 6)? < 6 {
                return Ok(KodairaType::IIStar);
            }
            // not minimal: divide a_i by u^i and start over
            for (i, k) in WEIGHTS.iter().enumerate() {
                self.a[i] = self.a[i].shift_down(*k as usize)?;
            }
            self.k += 1;
            v_delta = v_delta.checked_sub(12).ok_or_else(|| Error::Internal(String::from("discriminant valuation went negative")))?;
        }
    }

    /// After the double root of the cubic sits at 0, returns `n` for `I_n^*`.
    fn star_chain(&mut self) -> Result<u32> {
        let p = self.p;
        let (mut ix, mut iy) = (3usize, 3usize);
        // mx = u^(ix - 1), my = u^(iy - 1)
        loop {
            let a2t = self.at(1, 1)?;
            let a3t = self.at(2, iy - 1)?;
            let a6t = self.at(4, ix - 1 + iy - 1)?;
            if !(&(&a3t * &a3t) + &a6t.scale_int(4)).is_zero() {
                break;
            }
            let y0 = if p == 2 { self.sqrt(&a6t) } else { -&(&a3t * &self.inv(&self.c(2))?) };
            self.rst(self.zero(), self.zero(), (y0, iy as i64 - 1));
            iy += 1;
            let a2t2 = self.at(1, 1)?;
            let a4t = self.at(3, ix)?;
            let a6t = self.at(4, ix - 1 + iy - 1)?;
            if !(&(&a4t * &a4t) - &(&a2t2 * &a6t).scale_int(4)).is_zero() {
                break;
            }
            let x0 = if p == 2 {
                self.sqrt(&(&a6t * &self.inv(&a2t)?))
            } else {
                -&(&a4t * &self.inv(&a2t.scale_int(2))?)
            };
            self.rst((x0, ix as i64 - 1), self.zero(), self.zero());
            ix += 1;
        }
        Ok((ix + iy - 5) as u32)
    }
}

fn scaling_exponent(model: &WeierstrassModel, v: &Place) -> i64 {
    model
        .coeffs()
        .iter()
        .zip(WEIGHTS)
        .filter_map(|(a, k)| a.valuation(v).map(|n| (-n).div_euclid(k) + i64::from((-n).rem_euclid(k) != 0)))
        .max()
        .unwrap_or(0)
        .max(0)
}

/// Runs the algorithm at a finite place.
pub(crate) fn run(model: &WeierstrassModel, v: &Place) -> Result<LocalRun> {
    if v.is_infinity() {
        return Err(Error::Internal(String::from("run expects a finite place")));
    }
    let f = model.field();
    let k0 = scaling_exponent(model, v);
    let vd = model.discriminant().valuation(v).expect("nonzero discriminant") + 12 * k0;
    if vd < 0 {
        return Err(Error::Internal(String::from("negative discriminant valuation of an integral model")));
    }
    let ctx = LocalContext::new(f, v)?;
    let mut prec = vd as usize + 24;
    loop {
        let mut a = Vec::with_capacity(5);
        for (i, c) in model.coeffs().iter().enumerate() {
            a.push(ctx.series(c, WEIGHTS[i] * k0, prec)?);
        }
        let a: [Series; 5] = a.try_into().expect("five coefficients");
        let rf = ctx.residue_field().clone();
        let mut eng = Engine {
            p: f.characteristic(),
            a,
            k: -k0,
            r: LaurentPoly::zero(&rf),
            s: LaurentPoly::zero(&rf),
            w: LaurentPoly::zero(&rf),
            f: rf,
        };
        match eng.classify(vd as u32) {
            Ok(kind) => {
                let v_delta = (vd - 12 * (eng.k + k0)) as u32;
                return Ok(LocalRun { kind, v_delta, u_exp: eng.k, r: eng.r, s: eng.s, w: eng.w });
            }
            Err(Error::PrecisionExhausted) if prec < 1 << 14 => prec *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// Classifies the fiber of `model` at `v`.
pub fn tate_local(model: &WeierstrassModel, v: &Place) -> Result<LocalFiberData> {
    let run = match v {
        Place::Infinity => run(&model.chart_at_infinity(), &Place::origin(model.field()))?,
        Place::Finite(_) => run(model, v)?,
    };
    let euler = run.kind.euler();
    let swan = run
        .v_delta
        .checked_sub(euler)
        .ok_or_else(|| Error::Internal(alloc::format!("v(Delta) = {} below Euler number {}", run.v_delta, euler)))?;
    Ok(LocalFiberData {
        place: v.clone(),
        place_degree: v.degree(),
        kind: run.kind,
        v_delta: run.v_delta,
        euler,
        swan,
        components: run.kind.components(),
    })
}

/// The places with a singular fiber, sorted (infinity last).
pub fn bad_places(model: &WeierstrassModel) -> Result<Vec<Place>> {
    Ok(bad_fibers(model)?.into_iter().map(|d| d.place).collect())
}

/// Local data at every place with a singular fiber, sorted by place.
pub fn bad_fibers(model: &WeierstrassModel) -> Result<Vec<LocalFiberData>> {
    let delta = model.discriminant();
    let mut cands: Vec<&crate::algebra::Rf> = model.coeffs().iter().collect();
    cands.push(&delta);
    let mut out = Vec::new();
    for v in support(&cands, DEFAULT_SEED) {
        let d = tate_local(model, &v)?;
        if d.kind != KodairaType::I0 {
            out.push(d);
        }
    }
    Ok(out)
}

/// Checks the wild-conductor constraints on a fiber.
pub fn swan_constraint_holds(kind: KodairaType, swan: u32, p: u64) -> bool {
    use KodairaType::*;
    if p > 3 || kind.is_multiplicative() || kind == I0 {
        return swan == 0;
    }
    match (p, kind) {
        (3, III | IIIStar | I0Star | InStar(_)) => swan == 0,
        (2, IV | IVStar) => swan == 0,
        (2, II | I0Star) => swan >= 2,
        (2, InStar(n)) if n != 1 => swan >= 2,
        _ => swan >= 1,
    }
}

impl fmt::Display for LocalFiberData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {} (v(Delta) = {}, e = {}, swan = {})", self.kind, self.place, self.v_delta, self.euler, self.swan)
    }
}

impl LocalFiberData {
    pub fn place_text(&self) -> String {
        self.place.to_string()
    }

    pub fn type_text(&self) -> String {
        self.kind.to_string()
    }
}
