//! JSON shapes emitted by the commands.

use kodaira::invariants::SurfaceReport;
use kodaira::tate::LocalFiberData;
use kodaira::weierstrass::WeierstrassModel;
use serde::Serialize;

use crate::format::{coeff_text, field_modulus_text, InputError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelJson {
    pub p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fieldmod: Option<String>,
    pub a1: String,
    pub a2: String,
    pub a3: String,
    pub a4: String,
    pub a6: String,
}

impl From<&WeierstrassModel> for ModelJson {
    fn from(m: &WeierstrassModel) -> ModelJson {
        let c = |i: usize| coeff_text(&m.coeffs()[i]);
        ModelJson {
            p: m.characteristic(),
            fieldmod: field_modulus_text(m.field()),
            a1: c(0),
            a2: c(1),
            a3: c(2),
            a4: c(3),
            a6: c(4),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiberJson {
    pub place: String,
    pub place_degree: usize,
    #[serde(rename = "type")]
    pub kind: String,
    pub v_delta: u32,
    pub euler: u32,
    pub swan: u32,
    pub components: u32,
}

impl From<&LocalFiberData> for FiberJson {
    fn from(d: &LocalFiberData) -> FiberJson {
        FiberJson {
            place: d.place.to_string(),
            place_degree: d.place_degree,
            kind: d.kind.to_string(),
            v_delta: d.v_delta,
            euler: d.euler,
            swan: d.swan,
            components: d.components,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportJson {
    pub model: ModelJson,
    pub fibers: Vec<FiberJson>,
    pub c2: u64,
    pub chi: u64,
    pub isotrivial: bool,
    pub notes: Vec<String>,
}

impl From<&SurfaceReport> for ReportJson {
    fn from(r: &SurfaceReport) -> ReportJson {
        ReportJson {
            model: (&r.model).into(),
            fibers: r.fibers.iter().map(FiberJson::from).collect(),
            c2: r.c2,
            chi: r.chi,
            isotrivial: r.isotrivial,
            notes: r.notes.clone(),
        }
    }
}

impl ReportJson {
    pub fn to_text(&self) -> String {
        let m = &self.model;
        let mut out = format!("p = {}", m.p);
        if let Some(fm) = &m.fieldmod {
            out.push_str(&format!(", field F_{}[g]/({})", m.p, fm.replace('x', "g")));
        }
        out.push_str(&format!("\n[a1, a2, a3, a4, a6] = [{}, {}, {}, {}, {}]\n", m.a1, m.a2, m.a3, m.a4, m.a6));
        out.push_str(&format!("{:<16} {:>3} {:<10} {:>6} {:>5} {:>5} {:>5}\n", "place", "deg", "type", "vDelta", "euler", "swan", "comps"));
        for f in &self.fibers {
            out.push_str(&format!(
                "{:<16} {:>3} {:<10} {:>6} {:>5} {:>5} {:>5}\n",
                f.place, f.place_degree, f.kind, f.v_delta, f.euler, f.swan, f.components
            ));
        }
        out.push_str(&format!("c2 = {}, chi = {}, isotrivial = {}\n", self.c2, self.chi, self.isotrivial));
        for n in &self.notes {
            out.push_str(&format!("note: {}\n", n));
        }
        out
    }
}

/// Body of `{"error": ...}` on stderr.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorJson {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub token: Option<String>,
}

impl From<&InputError> for ErrorJson {
    fn from(e: &InputError) -> ErrorJson {
        ErrorJson {
            code: e.code.as_str().into(),
            message: e.message.clone(),
            line: Some(e.line),
            column: Some(e.column),
            token: Some(e.token.clone()),
        }
    }
}

impl From<&kodaira::Error> for ErrorJson {
    fn from(e: &kodaira::Error) -> ErrorJson {
        use kodaira::Error::*;
        let code = match e {
            DivisionByZero => "division_by_zero",
            FieldMismatch => "field_mismatch",
            NotPrime(_) => "not_prime",
            PrimeTooLarge { .. } => "prime_too_large",
            ReducibleModulus => "bad_field_modulus",
            ZeroPolynomial => "zero_polynomial",
            InvalidPrecision => "invalid_precision",
            PrecisionExhausted => "precision_exhausted",
            SingularModel => "singular_model",
            NotApplicable(_) => "not_applicable",
            Malformed(_) => "malformed",
            Unsupported(_) => "unsupported",
            Overflow => "overflow",
            Internal(_) => "internal",
        };
        ErrorJson { code: code.into(), message: e.to_string(), line: None, column: None, token: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_model;

    #[test]
    fn schema_field_names() {
        let m = parse_model("p=3\na4=t\na6=t").unwrap();
        let r = kodaira::invariants::analyze(&m).unwrap();
        let v = serde_json::to_value(ReportJson::from(&r)).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["c2", "chi", "fibers", "isotrivial", "model", "notes"]);
        assert_eq!(
            v["fibers"][0],
            serde_json::json!({"place": "t", "placeDegree": 1, "type": "II", "vDelta": 3, "euler": 2, "swan": 1, "components": 1})
        );
        assert_eq!(v["fibers"][1]["place"], "inf");
        assert_eq!(v["fibers"][1]["type"], "IIIstar");
        assert_eq!(v["model"], serde_json::json!({"p": 3, "a1": "0", "a2": "0", "a3": "0", "a4": "t", "a6": "t"}));
        assert_eq!(v["c2"], 12);
    }
}
