use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{Map, Value};

use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Constants `(c_1, c_2, ...)` for the substitution `t_i -> t_i + c_i`.
/// Finite support; zero entries are not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShiftTable {
    entries: BTreeMap<u32, Rational>,
}

impl ShiftTable {
    pub fn new() -> Self {
        ShiftTable::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (u32, Rational)>>(entries: I) -> Self {
        let mut t = ShiftTable::new();
        for (i, c) in entries {
            t.set(i, c);
        }
        t
    }

    pub fn set(&mut self, index: u32, value: Rational) {
        assert!(index >= 1, "shift index must be >= 1");
        if value.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
    }

    /// Missing entries read as zero.
    pub fn get(&self, index: u32) -> Rational {
        self.entries.get(&index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn neg(&self) -> ShiftTable {
        ShiftTable {
            entries: self.entries.iter().map(|(i, c)| (*i, -c.clone())).collect(),
        }
    }

    /// Keeps only the entries with index `<= max_index`.
    pub fn truncated(&self, max_index: u32) -> ShiftTable {
        ShiftTable {
            entries: self
                .entries
                .range(..=max_index)
                .map(|(i, c)| (*i, c.clone()))
                .collect(),
        }
    }

    /// `{"1": "p/q", ...}`
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (i, c) in &self.entries {
            m.insert(i.to_string(), Value::String(format_rational(c)));
        }
        Value::Object(m)
    }

    /// Accepts keys `"3"` or `"t3"` and values as rational strings or integers.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("shift table must be a JSON object".into()))?;
        let mut t = ShiftTable::new();
        for (k, val) in obj {
            let key = k.strip_prefix('t').unwrap_or(k);
            let idx: u32 = key
                .parse()
                .map_err(|_| Error::Parse(format!("bad shift index {k:?}")))?;
            if idx == 0 {
                return Err(Error::Parse("shift index must be >= 1".into()));
            }
            let c = match val {
                Value::String(s) => parse_rational(s)?,
                Value::Number(n) if n.is_i64() => parse_rational(&n.to_string())?,
                _ => return Err(Error::Parse(format!("bad shift value for {k:?}"))),
            };
            t.set(idx, c);
        }
        Ok(t)
    }
}
