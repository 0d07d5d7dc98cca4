//! One function per subcommand. Each returns the JSON value and a text
//! rendering; `main` picks one.

use kodaira::actions::{coaction_group_law, verify_coaction, ActionCheck, PClosure};
use kodaira::algebra::expr::parse_rf;
use kodaira::invariants::{analyze, lattice_check, LatticeVerdict};
use kodaira::tate::KodairaType;
use kodaira::twists::{frobenius_comparison, frobenius_pullback, quadratic_twist, TwistParameter};
use kodaira::{igusa, Error};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{self, EntryOutcome};
use crate::format::{parse_coaction, parse_model, ErrorCode, InputError};
use crate::report::{ErrorJson, FiberJson, ReportJson};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(#[from] InputError),
    #[error("{0}")]
    Library(#[from] Error),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn to_json(&self) -> Value {
        let body = match self {
            CliError::Input(e) => ErrorJson::from(e),
            CliError::Library(e) => ErrorJson::from(e),
            CliError::Io { path, message } => ErrorJson {
                code: "io".into(),
                message: format!("{}: {}", path, message),
                line: None,
                column: None,
                token: None,
            },
        };
        json!({ "error": body })
    }
}

pub struct Output {
    pub json: Value,
    pub text: String,
    /// False when the command ran but its checks did not all pass.
    pub success: bool,
}

impl Output {
    fn ok<T: Serialize>(v: &T, text: String) -> Output {
        Output { json: serde_json::to_value(v).expect("report serializes"), text, success: true }
    }
}

pub fn analyze_text(model: &str) -> Result<Output, CliError> {
    let m = parse_model(model)?;
    let r = ReportJson::from(&analyze(&m)?);
    let text = r.to_text();
    Ok(Output::ok(&r, text))
}

pub fn twist(model: &str, d: &str) -> Result<Output, CliError> {
    let m = parse_model(model)?;
    let d = parse_rf(d, m.field()).map_err(|e| InputError {
        code: ErrorCode::BadExpression,
        line: 1,
        column: e.offset + 1,
        token: e.token,
        message: e.message,
    })?;
    let param = TwistParameter::new(d)?;
    let twisted = quadratic_twist(&m, &param)?;
    let mut r = ReportJson::from(&analyze(&twisted)?);
    r.notes.insert(0, format!("quadratic twist by d = {}", param.d.to_string_in("t")));
    let text = r.to_text();
    Ok(Output::ok(&r, text))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct StepJson {
    before: FiberJson,
    after: FiberJson,
    v_delta_scaled: bool,
    swan_preserved: bool,
}

pub fn frobenius(model: &str, iters: u32) -> Result<Output, CliError> {
    let m = parse_model(model)?;
    let steps: Vec<StepJson> = frobenius_comparison(&m, iters)?
        .iter()
        .map(|s| StepJson {
            before: (&s.before).into(),
            after: (&s.after).into(),
            v_delta_scaled: s.v_delta_scaled,
            swan_preserved: s.swan_preserved,
        })
        .collect();
    let report = ReportJson::from(&analyze(&frobenius_pullback(&m, iters)?)?);
    let mut text = String::new();
    for s in &steps {
        text.push_str(&format!(
            "{} {} vDelta {} swan {} -> {} {} vDelta {} swan {}\n",
            s.before.place, s.before.kind, s.before.v_delta, s.before.swan, s.after.place, s.after.kind, s.after.v_delta, s.after.swan
        ));
    }
    text.push('\n');
    text.push_str(&report.to_text());
    Ok(Output::ok(&json!({ "iters": iters, "steps": steps, "report": report }), text))
}

fn check_json(c: &ActionCheck) -> (bool, Option<String>, Option<String>) {
    match c {
        ActionCheck::Verified => (true, None, None),
        ActionCheck::Fails { witness, residual } => (false, Some(witness.clone()), Some(residual.to_string())),
    }
}

fn p_closure_name(p: &PClosure) -> String {
    match p {
        PClosure::Multiplicative => "multiplicative".into(),
        PClosure::Additive => "additive".into(),
        PClosure::Scaled(c) => format!("scaled({})", c),
        PClosure::NotClosed => "not_closed".into(),
    }
}

pub fn action(model: &str, coaction: &str) -> Result<Output, CliError> {
    let m = parse_model(model)?;
    let c = parse_coaction(coaction, m.field())?;
    let (verified, witness, residual) = check_json(&verify_coaction(&m, &c)?);
    let (group_law, _, _) = check_json(&coaction_group_law(&c)?);
    let (derivation, p_closure) = match c.induced_derivation() {
        Ok(d) => {
            let pc = match d.classify_p_closed(&m) {
                Ok(pc) => p_closure_name(&pc),
                Err(Error::NotApplicable(_)) => "not_tangent".into(),
                Err(e) => return Err(e.into()),
            };
            (d.to_string(), pc)
        }
        Err(Error::NotApplicable(msg)) => (String::new(), format!("not_applicable: {}", msg)),
        Err(e) => return Err(e.into()),
    };
    let v = json!({
        "verified": verified,
        "witness": witness,
        "residual": residual,
        "groupLaw": group_law,
        "derivation": derivation,
        "pClosure": p_closure,
    });
    let mut text = format!("verified: {}\n", verified);
    if let Some(w) = &witness {
        text.push_str(&format!("witness: {}\n", w));
    }
    text.push_str(&format!("group law: {}\nderivation: {}\np-closure: {}\n", group_law, derivation, p_closure));
    Ok(Output { json: v, text, success: verified && group_law })
}

pub fn igusa_cmd(p: u64, n: u32, g: u64) -> Result<Output, CliError> {
    let d = igusa::igusa_datum(p, n)?;
    let max_n = igusa::max_admissible_n(p, g)?;
    let v = json!({
        "p": p,
        "n": n,
        "ssCount": d.ss_count,
        "hP": d.h_p.to_string(),
        "genus": d.genus,
        "bound": d.bound.to_string(),
        "baseGenus": g,
        "maxAdmissibleN": max_n,
    });
    let genus = d.genus.map_or_else(|| "undefined (p^n < 3)".to_string(), |g| g.to_string());
    let text = format!(
        "p = {}, n = {}\nsupersingular j: {}\nh_p = {}\ngenus of Ig(p^n) = {}\nbound = {}\nlargest n for base genus {}: {}\n",
        p, n, d.ss_count, d.h_p, genus, d.bound, g, max_n
    );
    Ok(Output::ok(&v, text))
}

fn fiber_type(s: &str) -> Result<KodairaType, CliError> {
    s.parse().map_err(|e: Error| {
        CliError::Input(InputError { code: ErrorCode::BadExpression, line: 1, column: 1, token: s.to_string(), message: e.to_string() })
    })
}

pub fn lattice(t1: &str, t2: &str, p: u64) -> Result<Output, CliError> {
    let (a, b) = (fiber_type(t1)?, fiber_type(t2)?);
    if !kodaira::algebra::is_prime(p) {
        return Err(Error::NotPrime(p).into());
    }
    let v = match lattice_check(a, b, p) {
        LatticeVerdict::Admissible(case) => json!({ "verdict": "admissible", "case": case.to_string() }),
        LatticeVerdict::Excluded(ex) => json!({ "verdict": "excluded", "reason": ex.code(), "detail": ex.to_string() }),
        LatticeVerdict::NotApplicable => json!({ "verdict": "not_applicable" }),
    };
    let mut text = format!("({}, {}) at p = {}: {}", a, b, p, v["verdict"].as_str().unwrap_or(""));
    for k in ["case", "detail"] {
        if let Some(s) = v[k].as_str() {
            text.push_str(&format!(", {}", s));
        }
    }
    text.push('\n');
    Ok(Output::ok(&v, text))
}

pub fn catalog_cmd(filter: Option<&str>, seed: u64) -> Result<Output, CliError> {
    let pattern = match filter {
        Some(f) => Some(glob::Pattern::new(f).map_err(|e| {
            CliError::Input(InputError {
                code: ErrorCode::BadExpression,
                line: 1,
                column: e.pos + 1,
                token: f.to_string(),
                message: e.msg.to_string(),
            })
        })?),
        None => None,
    };
    let entries: Vec<_> = catalog::entries().iter().filter(|e| pattern.as_ref().is_none_or(|p| p.matches(e.id))).collect();
    let outcomes = catalog::run_all(&entries, seed);
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    let mut text = String::new();
    for o in &outcomes {
        text.push_str(&format!("{:<6} {}\n", o.status(), o.id));
        for d in &o.diffs {
            text.push_str(&format!("       {}\n", d));
        }
    }
    text.push_str(&format!("{} entries, {} failed\n", outcomes.len(), failed));
    let v = json!({
        "seed": seed,
        "entries": outcomes.iter().map(EntryOutcome::to_json).collect::<Vec<_>>(),
        "total": outcomes.len(),
        "failed": failed,
    });
    Ok(Output { json: v, text, success: failed == 0 })
}
