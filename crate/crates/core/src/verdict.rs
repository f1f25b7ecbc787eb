//! Pass/fail results shared by the bilinear and operator verifiers.

use std::fmt;

use serde_json::{Map, Value};

use crate::exactalg::{format_rational, Monomial, Rational};

/// A nonzero coefficient that refutes an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub monomial: Monomial,
    pub coeff: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    pub witness: Option<Witness>,
    /// Index triples `(k, l, j)` that were checked (bilinear checks), or
    /// `(flow, order, 0)`-style labels for operator checks.
    pub checked: Vec<(i64, i64, i64)>,
    /// Free-form explanation of a failure, e.g. an operator mismatch.
    pub detail: Option<String>,
    /// Serialized operator coefficients at the first mismatch, if any.
    pub mismatch: Option<Value>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            pass: true,
            witness: None,
            checked: Vec::new(),
            detail: None,
            mismatch: None,
        }
    }

    pub fn fail(detail: impl Into<String>) -> Self {
        Verdict {
            pass: false,
            detail: Some(detail.into()),
            ..Verdict::pass()
        }
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_checked(mut self, checked: Vec<(i64, i64, i64)>) -> Self {
        self.checked = checked;
        self
    }

    pub fn with_mismatch(mut self, v: Value) -> Self {
        self.mismatch = Some(v);
        self
    }

    /// Combines verdicts: passes only if all pass; keeps the first failure's
    /// witness and detail and concatenates the checked lists.
    pub fn all(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::pass();
        for v in verdicts {
            out.checked.extend(v.checked.iter().copied());
            if out.pass && !v.pass {
                out.pass = false;
                out.witness = v.witness;
                out.detail = v.detail;
                out.mismatch = v.mismatch;
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("pass".into(), Value::Bool(self.pass));
        m.insert(
            "witness".into(),
            match &self.witness {
                None => Value::Null,
                Some(w) => {
                    let mut o = Map::new();
                    o.insert("monomial".into(), Value::String(w.monomial.to_string()));
                    o.insert("coeff".into(), Value::String(format_rational(&w.coeff)));
                    Value::Object(o)
                }
            },
        );
        m.insert(
            "checked".into(),
            Value::Array(
                self.checked
                    .iter()
                    .map(|&(a, b, c)| Value::Array(vec![a.into(), b.into(), c.into()]))
                    .collect(),
            ),
        );
        if let Some(d) = &self.detail {
            m.insert("detail".into(), Value::String(d.clone()));
        }
        if let Some(x) = &self.mismatch {
            m.insert("mismatch".into(), x.clone());
        }
        Value::Object(m)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.pass { "pass" } else { "FAIL" })?;
        if let Some(w) = &self.witness {
            write!(f, " (witness {} · {})", format_rational(&w.coeff), w.monomial)?;
        }
        if let Some(d) = &self.detail {
            write!(f, ": {d}")?;
        }
        if !self.checked.is_empty() {
            write!(f, " [{} checks]", self.checked.len())?;
        }
        Ok(())
    }
}
