use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Variable family: the time variables `t` or the auxiliary `y` used on the
/// right-hand side of bilinear identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    T,
    Y,
}

impl Family {
    fn prefix(self) -> char {
        match self {
            Family::T => 't',
            Family::Y => 'y',
        }
    }
}

/// A variable `t_i` or `y_i` with `i >= 1`. Its weight is `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub family: Family,
    pub index: u32,
}

impl Var {
    pub fn new(family: Family, index: u32) -> Self {
        assert!(index >= 1, "variable index must be >= 1");
        Var { family, index }
    }

    pub fn t(index: u32) -> Self {
        Var::new(Family::T, index)
    }

    pub fn y(index: u32) -> Self {
        Var::new(Family::Y, index)
    }

    pub fn weight(self) -> u32 {
        self.index
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.prefix(), self.index)
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        let family = match chars.next() {
            Some('t') => Family::T,
            Some('y') => Family::Y,
            _ => return Err(Error::Parse(format!("unknown variable {s:?}"))),
        };
        let index: u32 = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Parse(format!("bad variable index in {s:?}")))?;
        if index == 0 {
            return Err(Error::Parse(format!("variable index must be >= 1 in {s:?}")));
        }
        Ok(Var { family, index })
    }
}
