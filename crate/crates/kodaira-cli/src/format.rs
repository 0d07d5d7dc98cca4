//! Text formats for models and coactions.
//!
//! Both are `key = value` stanzas, one per line. `#` starts a comment.
//!
//! ```text
//! p = 2
//! fieldmod = x^2 + x + 1
//! a1 = g
//! a2 = t
//! a4 = 1
//! ```
//!
//! ```text
//! chart = affine
//! relation = a^3=1
//! act.t = a*t
//! ```

use std::collections::BTreeMap;
use std::fmt;

use kodaira::actions::mpoly::{parse_mpoly, var_index, VAR_NAMES};
use kodaira::actions::{Chart, Coaction, Relation};
use kodaira::algebra::expr::{parse, parse_rf, Evaluator};
use kodaira::algebra::{Field, Poly, Rf};
use kodaira::weierstrass::WeierstrassModel;
use kodaira::Error;
use serde::Serialize;

/// Stable error codes, shared by the JSON error stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    UnknownKey,
    DuplicateKey,
    MissingKey,
    MissingEquals,
    NotPrime,
    PrimeTooLarge,
    BadFieldModulus,
    SingularModel,
    BadExpression,
    BadRelation,
    BadChart,
    MalformedCoaction,
}

impl ErrorCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorCode::UnknownKey => "unknown_key",
            ErrorCode::DuplicateKey => "duplicate_key",
            ErrorCode::MissingKey => "missing_key",
            ErrorCode::MissingEquals => "missing_equals",
            ErrorCode::NotPrime => "not_prime",
            ErrorCode::PrimeTooLarge => "prime_too_large",
            ErrorCode::BadFieldModulus => "bad_field_modulus",
            ErrorCode::SingularModel => "singular_model",
            ErrorCode::BadExpression => "bad_expression",
            ErrorCode::BadRelation => "bad_relation",
            ErrorCode::BadChart => "bad_chart",
            ErrorCode::MalformedCoaction => "malformed_coaction",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A rejected input, located by 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("{code} at line {line}, column {column}: {message} (near '{token}')")]
pub struct InputError {
    pub code: ErrorCode,
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub message: String,
}

struct Entry<'a> {
    line: usize,
    key: &'a str,
    key_col: usize,
    value: &'a str,
    value_col: usize,
}

impl Entry<'_> {
    fn err(&self, code: ErrorCode, message: impl Into<String>) -> InputError {
        InputError { code, line: self.line, column: self.value_col, token: self.value.to_string(), message: message.into() }
    }

    fn key_err(&self, code: ErrorCode, message: impl Into<String>) -> InputError {
        InputError { code, line: self.line, column: self.key_col, token: self.key.to_string(), message: message.into() }
    }

    fn expr_err(&self, e: kodaira::algebra::expr::ParseError) -> InputError {
        InputError {
            code: ErrorCode::BadExpression,
            line: self.line,
            column: self.value_col + self.value[..e.offset.min(self.value.len())].chars().count(),
            token: e.token,
            message: e.message,
        }
    }
}

fn entries(text: &str) -> Result<Vec<Entry<'_>>, InputError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let Some(eq) = line.find('=') else {
            let lead = line.len() - line.trim_start().len();
            return Err(InputError {
                code: ErrorCode::MissingEquals,
                line: i + 1,
                column: line[..lead].chars().count() + 1,
                token: line.trim().to_string(),
                message: "expected 'key = value'".into(),
            });
        };
        let (k, v) = (&line[..eq], &line[eq + 1..]);
        let key_lead = k.len() - k.trim_start().len();
        let val_lead = v.len() - v.trim_start().len();
        out.push(Entry {
            line: i + 1,
            key: k.trim(),
            key_col: k[..key_lead].chars().count() + 1,
            value: v.trim(),
            value_col: line[..eq + 1 + val_lead].chars().count() + 1,
        });
    }
    Ok(out)
}

const COEFF_KEYS: [&str; 5] = ["a1", "a2", "a3", "a4", "a6"];

/// Integer polynomials in `x`, coefficients reduced mod `p`.
struct IntPolyEvaluator {
    p: i64,
}

impl IntPolyEvaluator {
    fn norm(&self, mut v: Vec<i64>) -> Vec<i64> {
        for c in v.iter_mut() {
            *c = c.rem_euclid(self.p);
        }
        while v.len() > 1 && v.last() == Some(&0) {
            v.pop();
        }
        v
    }
}

impl Evaluator for IntPolyEvaluator {
    type Value = Vec<i64>;

    fn int(&self, n: u64) -> Result<Vec<i64>, String> {
        Ok(vec![(n % self.p as u64) as i64])
    }

    fn var(&self, c: char) -> Result<Vec<i64>, String> {
        if c == 'x' {
            Ok(vec![0, 1])
        } else {
            Err(format!("the field modulus is a polynomial in x, not '{}'", c))
        }
    }

    fn add(&self, a: &Vec<i64>, b: &Vec<i64>) -> Result<Vec<i64>, String> {
        let n = a.len().max(b.len());
        Ok(self.norm((0..n).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect()))
    }

    fn sub(&self, a: &Vec<i64>, b: &Vec<i64>) -> Result<Vec<i64>, String> {
        let n = a.len().max(b.len());
        Ok(self.norm((0..n).map(|i| a.get(i).unwrap_or(&0) - b.get(i).unwrap_or(&0)).collect()))
    }

    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Result<Vec<i64>, String> {
        let mut out = vec![0i64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        Ok(self.norm(out))
    }

    fn div(&self, _: &Vec<i64>, _: &Vec<i64>) -> Result<Vec<i64>, String> {
        Err("division is not allowed in a field modulus".into())
    }

    fn neg(&self, a: &Vec<i64>) -> Result<Vec<i64>, String> {
        Ok(self.norm(a.iter().map(|c| -c).collect()))
    }

    fn pow(&self, a: &Vec<i64>, e: i64) -> Result<Vec<i64>, String> {
        if !(0..=64).contains(&e) {
            return Err("exponent out of range in a field modulus".into());
        }
        let mut out = vec![1];
        for _ in 0..e {
            out = self.mul(&out, a)?;
        }
        Ok(out)
    }
}

/// Parses a model stanza.
pub fn parse_model(text: &str) -> Result<WeierstrassModel, InputError> {
    let es = entries(text)?;
    let mut seen: BTreeMap<&str, &Entry> = BTreeMap::new();
    for e in &es {
        if e.key != "p" && e.key != "fieldmod" && !COEFF_KEYS.contains(&e.key) {
            return Err(e.key_err(ErrorCode::UnknownKey, format!("unknown key '{}'", e.key)));
        }
        if seen.insert(e.key, e).is_some() {
            return Err(e.key_err(ErrorCode::DuplicateKey, format!("'{}' is given twice", e.key)));
        }
    }
    let pe = seen.get("p").ok_or_else(|| InputError {
        code: ErrorCode::MissingKey,
        line: 1,
        column: 1,
        token: String::new(),
        message: "the characteristic 'p' is required".into(),
    })?;
    let p: u64 = pe.value.parse().map_err(|_| pe.err(ErrorCode::NotPrime, "p must be a prime integer"))?;
    let prime = Field::prime(p).map_err(|e| match e {
        Error::PrimeTooLarge { .. } => pe.err(ErrorCode::PrimeTooLarge, e.to_string()),
        _ => pe.err(ErrorCode::NotPrime, format!("{} is not prime", p)),
    })?;
    let field = match seen.get("fieldmod") {
        None => prime,
        Some(fe) => {
            let expr = parse(fe.value).map_err(|e| fe.expr_err(e))?;
            let coeffs = expr.eval(&IntPolyEvaluator { p: p as i64 }, fe.value).map_err(|e| fe.expr_err(e))?;
            Field::extension(p, &coeffs).map_err(|e| fe.err(ErrorCode::BadFieldModulus, e.to_string()))?
        }
    };
    let mut a: [Rf; 5] = std::array::from_fn(|_| Rf::zero(&field));
    for (i, k) in COEFF_KEYS.iter().enumerate() {
        if let Some(e) = seen.get(k) {
            a[i] = parse_rf(e.value, &field).map_err(|err| e.expr_err(err))?;
        }
    }
    WeierstrassModel::new(&field, a).map_err(|e| match e {
        Error::SingularModel => pe.key_err(ErrorCode::SingularModel, "the discriminant vanishes identically"),
        other => pe.key_err(ErrorCode::BadExpression, other.to_string()),
    })
}

/// The field modulus as a polynomial in `x`, for non-prime fields.
pub fn field_modulus_text(f: &Field) -> Option<String> {
    if f.is_prime_field() {
        return None;
    }
    let prime = f.prime_subfield();
    let coeffs: Vec<_> = f.modulus().iter().map(|&c| prime.from_int(c as i64)).collect();
    Some(Poly::from_coeffs(&prime, &coeffs).to_string_in("x"))
}

/// A coefficient in the expression grammar, constants without parentheses.
pub fn coeff_text(a: &Rf) -> String {
    match a.constant_value() {
        Some(c) => c.to_string(),
        None => a.to_string_in("t"),
    }
}

/// Inverse of [`parse_model`]; every key is written.
pub fn render_model(m: &WeierstrassModel) -> String {
    let mut out = format!("p = {}\n", m.characteristic());
    if let Some(fm) = field_modulus_text(m.field()) {
        out.push_str(&format!("fieldmod = {}\n", fm));
    }
    for (k, a) in COEFF_KEYS.iter().zip(m.coeffs()) {
        out.push_str(&format!("{} = {}\n", k, coeff_text(a)));
    }
    out
}

/// Parses a coaction stanza for a model over `field`.
pub fn parse_coaction(text: &str, field: &Field) -> Result<Coaction, InputError> {
    let es = entries(text)?;
    let mut relation: Option<(Relation, &Entry)> = None;
    let mut chart: Option<Chart> = None;
    let mut subs = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for e in &es {
        if !seen.insert(e.key) {
            return Err(e.key_err(ErrorCode::DuplicateKey, format!("'{}' is given twice", e.key)));
        }
        match e.key {
            "relation" => relation = Some((e.value.parse().map_err(|err: Error| e.err(ErrorCode::BadRelation, err.to_string()))?, e)),
            "chart" => chart = Some(e.value.parse().map_err(|err: Error| e.err(ErrorCode::BadChart, err.to_string()))?),
            k => {
                let v = k
                    .strip_prefix("act.")
                    .and_then(|v| {
                        let mut cs = v.chars();
                        match (cs.next(), cs.next()) {
                            (Some(c), None) => var_index(c),
                            _ => None,
                        }
                    })
                    .ok_or_else(|| e.key_err(ErrorCode::UnknownKey, format!("unknown key '{}'", k)))?;
                let poly = parse_mpoly(e.value, field).map_err(|err| e.expr_err(err))?;
                subs.push((v, poly));
            }
        }
    }
    let (relation, rel_entry) = relation.ok_or_else(|| InputError {
        code: ErrorCode::MissingKey,
        line: 1,
        column: 1,
        token: String::new(),
        message: "a coaction needs 'relation'".into(),
    })?;
    Coaction::new(chart.unwrap_or(Chart::Affine), relation, field, subs)
        .map_err(|err| rel_entry.key_err(ErrorCode::MalformedCoaction, err.to_string()))
}

/// Inverse of [`parse_coaction`].
pub fn render_coaction(c: &Coaction) -> String {
    let mut out = format!("chart = {}\nrelation = {}\n", c.chart(), c.relation());
    for &v in c.chart().vars() {
        if let Some(s) = c.substitution(v) {
            out.push_str(&format!("act.{} = {}\n", VAR_NAMES[v], s));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_renders() {
        let m = parse_model("p=3\na4=t\na6=t").unwrap();
        assert_eq!(m.characteristic(), 3);
        assert_eq!(parse_model(&render_model(&m)).unwrap(), m);
        let m = parse_model("p = 2  # two\nfieldmod = x^2+x+1\na1 = g\na2 = t\na4 = 1\n").unwrap();
        assert_eq!(render_model(&m), "p = 2\nfieldmod = x^2 + x + 1\na1 = g\na2 = t\na3 = 0\na4 = 1\na6 = 0\n");
        assert_eq!(parse_model(&render_model(&m)).unwrap(), m);
    }

    #[test]
    fn error_codes() {
        let code = |s: &str| parse_model(s).unwrap_err().code;
        assert_eq!(code("p=4\na6=t"), ErrorCode::NotPrime);
        assert_eq!(code("p=5\na5=t"), ErrorCode::UnknownKey);
        assert_eq!(code("p=5\na6=t\na6=1"), ErrorCode::DuplicateKey);
        assert_eq!(code("a6=t"), ErrorCode::MissingKey);
        assert_eq!(code("p=5\na6"), ErrorCode::MissingEquals);
        assert_eq!(code("p=5\na4=0"), ErrorCode::SingularModel);
        assert_eq!(code("p=2\nfieldmod=x^2+1\na6=t"), ErrorCode::BadFieldModulus);
        let e = parse_model("p=5\na6 = t + )").unwrap_err();
        assert_eq!((e.code, e.line, e.column), (ErrorCode::BadExpression, 2, 10));
        assert_eq!(e.token, ")");
    }

    #[test]
    fn coactions_round_trip() {
        let f = Field::prime(2).unwrap();
        let c = parse_coaction("chart = planar\nrelation = a^4=0\nact.y = y + a*z\nact.t = t + a^2 + a*t^4\n", &f).unwrap();
        assert_eq!(parse_coaction(&render_coaction(&c), &f).unwrap(), c);
        let e = parse_coaction("relation = a^2=1\nact.w = a", &f).unwrap_err();
        assert_eq!(e.code, ErrorCode::UnknownKey);
        let e = parse_coaction("relation = a^2=1\nact.t = t + 1", &f).unwrap_err();
        assert_eq!(e.code, ErrorCode::MalformedCoaction);
        let e = parse_coaction("relation = a^2=2\nact.t = a*t", &f).unwrap_err();
        assert_eq!(e.code, ErrorCode::BadRelation);
    }
}
