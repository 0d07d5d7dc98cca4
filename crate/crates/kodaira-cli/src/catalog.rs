//! Built-in regression catalog: surfaces with known singular fibers and,
//! where one is known, a group-scheme action on a chart.

use kodaira::actions::{coaction_group_law, verify_coaction, verify_coaction_at, ActionCheck, Relation};
use kodaira::algebra::Field;
use kodaira::invariants::analyze;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::format::{parse_coaction, parse_model, render_model};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Holds,
    Fails,
}

#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub model: &'static str,
    /// `place type vDelta swan`, one fiber per `;`, in report order.
    pub fibers: &'static str,
    pub c2: u64,
    pub coaction: Option<(&'static str, Expect)>,
    /// Set when the action is not yet encoded; the fibers are still checked.
    pub pending: Option<&'static str>,
}

/// Points of `G_a` tried for each free-parameter action.
pub const SAMPLED_POINTS: usize = 20;

macro_rules! model {
    ($name:literal) => {
        include_str!(concat!("../models/", $name, ".model"))
    };
}

macro_rules! coaction {
    ($name:literal, $e:ident) => {
        Some((include_str!(concat!("../models/", $name, ".coaction")), Expect::$e))
    };
}

const fn entry(
    id: &'static str,
    model: &'static str,
    fibers: &'static str,
    c2: u64,
    coaction: Option<(&'static str, Expect)>,
) -> CatalogEntry {
    CatalogEntry { id, model, fibers, c2, coaction, pending: None }
}

static ENTRIES: &[CatalogEntry] = &[
    entry("p5-ii-iistar", model!("p5-ii-iistar"), "t II 2 0; inf IIstar 10 0", 12, coaction!("p5-ii-iistar", Holds)),
    entry("p5-iii-iiistar", model!("p5-iii-iiistar"), "t III 3 0; inf IIIstar 9 0", 12, coaction!("p5-iii-iiistar", Holds)),
    entry("p5-iv-ivstar", model!("p5-iv-ivstar"), "t IV 4 0; inf IVstar 8 0", 12, coaction!("p5-iv-ivstar", Holds)),
    entry("p5-i0star-pair", model!("p5-i0star-pair"), "t I0star 6 0; inf I0star 6 0", 12, coaction!("p5-i0star-pair", Holds)),
    entry("p7-ii-iistar", model!("p7-ii-iistar"), "t II 2 0; inf IIstar 10 0", 12, coaction!("p7-ii-iistar", Holds)),
    entry("p7-iii-iiistar", model!("p7-iii-iiistar"), "t III 3 0; inf IIIstar 9 0", 12, coaction!("p7-iii-iiistar", Holds)),
    entry("p7-iv-ivstar", model!("p7-iv-ivstar"), "t IV 4 0; inf IVstar 8 0", 12, coaction!("p7-iv-ivstar", Holds)),
    entry("p7-i0star-pair", model!("p7-i0star-pair"), "t I0star 6 0; inf I0star 6 0", 12, coaction!("p7-i0star-pair", Holds)),
    entry("p3-iii-iiistar", model!("p3-iii-iiistar"), "t III 3 0; inf IIIstar 9 0", 12, coaction!("p3-iii-iiistar", Holds)),
    entry("p3-ii-iiistar", model!("p3-ii-iiistar"), "t II 3 1; inf IIIstar 9 0", 12, coaction!("p3-ii-iiistar", Holds)),
    entry(
        "p3-ii-iiistar-literal",
        model!("p3-ii-iiistar"),
        "t II 3 1; inf IIIstar 9 0",
        12,
        coaction!("p3-ii-iiistar-literal", Fails),
    ),
    entry("p3-ii-i9", model!("p3-ii-i9"), "t I9 9 0; inf II 3 1", 12, coaction!("p3-ii-in", Holds)),
    entry("p3-ii-i81", model!("p3-ii-i81"), "t I81 81 0; inf II 3 1", 84, coaction!("p3-ii-in", Holds)),
    entry("p3-ii-i3star", model!("p3-ii-i3star"), "t I3star 9 0; inf II 3 1", 12, coaction!("p3-ii-instar", Holds)),
    entry("p3-ii-i27star", model!("p3-ii-i27star"), "t I27star 33 0; inf II 3 1", 36, coaction!("p3-ii-instar", Holds)),
    entry("p2-ii-ivstar", model!("p2-ii-ivstar"), "t II 4 2; inf IVstar 8 0", 12, coaction!("p2-ii-ivstar", Holds)),
    entry("p2-iv-ivstar", model!("p2-iv-ivstar"), "t IV 4 0; inf IVstar 8 0", 12, coaction!("p2-iv-ivstar", Holds)),
    entry("p2-iii-i8", model!("p2-iii-i8"), "t I8 8 0; inf III 4 1", 12, coaction!("p2-in", Holds)),
    entry("p2-iii-i32", model!("p2-iii-i32"), "t I32 32 0; inf III 4 1", 36, coaction!("p2-in", Holds)),
    entry("p2-ii-i8", model!("p2-ii-i8"), "t I8 8 0; inf II 4 2", 12, coaction!("p2-in", Holds)),
    entry("p2-ii-i32", model!("p2-ii-i32"), "t I32 32 0; inf II 4 2", 36, coaction!("p2-in", Holds)),
    entry("p3-unique-iistar", model!("p3-unique-iistar"), "inf IIstar 12 2", 12, coaction!("p3-unique-iistar", Holds)),
    entry("p2-unique-iistar", model!("p2-unique-iistar"), "inf IIstar 12 2", 12, coaction!("p2-unique-iistar", Holds)),
    entry(
        "p2-unique-i4star-u1",
        model!("p2-unique-i4star-u1"),
        "inf I4star 12 2",
        12,
        coaction!("p2-unique-i4star-u1", Holds),
    ),
    entry(
        "p2-unique-i4star-ug",
        model!("p2-unique-i4star-ug"),
        "inf I4star 12 2",
        12,
        coaction!("p2-unique-i4star-ug", Holds),
    ),
    entry(
        "p2-alpha4-plane-cubic",
        model!("p2-alpha4-plane-cubic"),
        "t II 16 14; inf IVstar 8 0",
        24,
        coaction!("p2-alpha4-plane-cubic", Holds),
    ),
    entry(
        "p2-alpha4-corrupted",
        model!("p2-alpha4-plane-cubic"),
        "t II 16 14; inf IVstar 8 0",
        24,
        coaction!("p2-alpha4-corrupted", Fails),
    ),
    CatalogEntry {
        id: "p3-alpha9-surface",
        model: model!("p3-alpha9-surface"),
        fibers: "t II 27 25; inf IIIstar 9 0",
        c2: 36,
        coaction: None,
        pending: Some("an alpha_9 coaction on a chart of this surface is not encoded"),
    },
];

pub fn entries() -> &'static [CatalogEntry] {
    ENTRIES
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryOutcome {
    pub id: &'static str,
    pub diffs: Vec<String>,
    pub pending: Option<&'static str>,
}

impl EntryOutcome {
    pub fn passed(&self) -> bool {
        self.diffs.is_empty()
    }

    pub fn status(&self) -> &'static str {
        match (self.passed(), self.pending) {
            (false, _) => "FAIL",
            (true, Some(_)) => "PEND",
            (true, None) => "PASS",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "status": self.status().to_lowercase(),
            "diffs": self.diffs,
            "pending": self.pending,
        })
    }
}

fn fiber_line(place: &str, kind: &str, v_delta: u32, swan: u32) -> String {
    format!("{} {} {} {}", place, kind, v_delta, swan)
}

/// Checks one entry. Every mismatch becomes a line of the diff.
pub fn run(e: &CatalogEntry, seed: u64) -> EntryOutcome {
    let mut diffs = Vec::new();
    let out = |diffs| EntryOutcome { id: e.id, diffs, pending: e.pending };
    let m = match parse_model(e.model) {
        Ok(m) => m,
        Err(err) => return out(vec![format!("model does not parse: {}", err)]),
    };
    match parse_model(&render_model(&m)) {
        Ok(back) if back == m => {}
        _ => diffs.push("model does not survive render and parse".to_string()),
    }
    match analyze(&m) {
        Ok(r) => {
            let got: Vec<String> =
                r.fibers.iter().map(|d| fiber_line(&d.place.to_string(), &d.kind.to_string(), d.v_delta, d.swan)).collect();
            let want: Vec<String> = e.fibers.split(';').map(|s| s.split_whitespace().collect::<Vec<_>>().join(" ")).collect();
            if got != want {
                diffs.push(format!("fibers: expected [{}], got [{}]", want.join("; "), got.join("; ")));
            }
            if r.c2 != e.c2 {
                diffs.push(format!("c2: expected {}, got {}", e.c2, r.c2));
            }
        }
        Err(err) => diffs.push(format!("analysis failed: {}", err)),
    }
    if let Some((text, expect)) = e.coaction {
        diffs.extend(check_action(&m, text, expect, seed));
    }
    out(diffs)
}

fn check_action(m: &kodaira::weierstrass::WeierstrassModel, text: &str, expect: Expect, seed: u64) -> Vec<String> {
    let mut diffs = Vec::new();
    let c = match parse_coaction(text, m.field()) {
        Ok(c) => c,
        Err(err) => return vec![format!("coaction does not parse: {}", err)],
    };
    match (verify_coaction(m, &c), expect) {
        (Ok(ActionCheck::Verified), Expect::Holds) | (Ok(ActionCheck::Fails { .. }), Expect::Fails) => {}
        (Ok(ActionCheck::Fails { witness, .. }), Expect::Holds) => {
            diffs.push(format!("coaction: expected to hold, fails with term {}", witness))
        }
        (Ok(ActionCheck::Verified), Expect::Fails) => diffs.push("coaction: expected to fail, holds".to_string()),
        (Err(err), _) => diffs.push(format!("coaction check failed: {}", err)),
    }
    if expect == Expect::Fails {
        return diffs;
    }
    match coaction_group_law(&c) {
        Ok(ActionCheck::Verified) => {}
        Ok(ActionCheck::Fails { witness, .. }) => diffs.push(format!("group law fails with term {}", witness)),
        Err(err) => diffs.push(format!("group law check failed: {}", err)),
    }
    if c.relation() == Relation::Free {
        let ext = Field::extension_of_degree(m.characteristic(), 4 * m.field().degree());
        match ext {
            Ok(ext) => {
                let order = ext.order().expect("finite extension");
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..SAMPLED_POINTS {
                    let a = ext.from_index(rng.random_range(0..order));
                    match verify_coaction_at(m, &c, &a) {
                        Ok(ActionCheck::Verified) => {}
                        Ok(ActionCheck::Fails { witness, .. }) => {
                            diffs.push(format!("coaction fails at a = {} with term {}", a, witness))
                        }
                        Err(err) => diffs.push(format!("coaction check at a = {} failed: {}", a, err)),
                    }
                }
            }
            Err(err) => diffs.push(format!("no sampling field: {}", err)),
        }
    }
    diffs
}

/// Runs entries on scoped threads; results come back in input order.
pub fn run_all(entries: &[&CatalogEntry], seed: u64) -> Vec<EntryOutcome> {
    std::thread::scope(|s| {
        let handles: Vec<_> = entries.iter().map(|e| s.spawn(move || run(e, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("catalog worker panicked")).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = entries().iter().map(|e| e.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), entries().len());
    }

    #[test]
    fn every_model_round_trips() {
        for e in entries() {
            let m = parse_model(e.model).unwrap();
            assert_eq!(parse_model(&render_model(&m)).unwrap(), m, "{}", e.id);
        }
    }
}
