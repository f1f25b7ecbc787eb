use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;
use serde_json::{Map, Value};

use super::monomial::Monomial;
use super::rational::{format_rational, parse_rational, Rational};
use super::shift::ShiftTable;
use super::var::{Family, Var};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial with rational coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by [`Monomial`], so iteration order
/// is the canonical weighted-graded lexicographic order and structural
/// equality is polynomial equality. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::term(Monomial::one(), c)
    }

    pub fn from_int(c: i64) -> Self {
        Polynomial::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Self {
        Polynomial::term(Monomial::var(v), Rational::one())
    }

    pub fn t(i: u32) -> Self {
        Polynomial::var(Var::t(i))
    }

    pub fn y(i: u32) -> Self {
        Polynomial::var(Var::y(i))
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending canonical order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn trailing_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next()
    }

    /// Largest monomial weight, `None` for the zero polynomial.
    pub fn weighted_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::weight).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp_of(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.exps().iter().map(|p| p.0))
            .collect()
    }

    /// Keeps the terms of exact weight `w`.
    pub fn homogeneous_part(&self, w: u32) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() == w)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `v`.
    pub fn diff(&self, v: Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.lower(v) {
                out.add_term(lowered, c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// `∂/∂t_j` (or `∂/∂y_j`).
    pub fn diff_index(&self, j: u32, family: Family) -> Polynomial {
        self.diff(Var::new(family, j))
    }

    /// Substitutes `x_i -> x_i + c_i` for the variables of `family`.
    pub fn shift(&self, c: &ShiftTable, family: Family) -> Polynomial {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Polynomial::zero();
        for (m, coef) in &self.terms {
            // expand each power (x_i + c_i)^e binomially
            let mut partial = Polynomial::constant(coef.clone());
            let mut rest = Vec::new();
            for &(v, e) in m.exps() {
                let ci = if v.family == family {
                    c.get(v.index)
                } else {
                    Rational::zero()
                };
                if ci.is_zero() {
                    rest.push((v, e));
                    continue;
                }
                let mut factor = Polynomial::zero();
                let mut binom = BigInt::one();
                let mut cpow = Rational::one();
                for r in 0..=e {
                    // C(e, r) x^{e-r} c^r
                    factor.add_term(
                        Monomial::var_pow(v, e - r),
                        Rational::from_integer(binom.clone()) * &cpow,
                    );
                    binom = binom * BigInt::from(e - r) / BigInt::from(r + 1);
                    cpow *= &ci;
                }
                partial = &partial * &factor;
            }
            let rest = Monomial::from_pairs(rest);
            for (pm, pc) in partial.terms {
                out.add_term(pm.mul(&rest), pc);
            }
        }
        out
    }

    /// Renames variables; `f` returns the new variable and whether the
    /// variable is negated. `f` must preserve weights and be injective.
    pub fn map_vars(&self, f: impl Fn(Var) -> (Var, bool)) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut negate = false;
            let mut pairs = Vec::with_capacity(m.exps().len());
            for &(v, e) in m.exps() {
                let (w, neg) = f(v);
                if neg && e % 2 == 1 {
                    negate = !negate;
                }
                pairs.push((w, e));
            }
            let c = if negate { -c.clone() } else { c.clone() };
            out.add_term(Monomial::from_pairs(pairs), c);
        }
        out
    }

    /// Moves every `t_i` to `y_i` (optionally negated).
    pub fn to_family(&self, family: Family, negate: bool) -> Polynomial {
        self.map_vars(|v| (Var::new(family, v.index), negate))
    }

    /// Substitutes rational values for some variables.
    pub fn evaluate_partial(&self, values: &BTreeMap<Var, Rational>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.exps() {
                match values.get(&v) {
                    Some(x) => coef *= num_traits::pow(x.clone(), e as usize),
                    None => rest.push((v, e)),
                }
            }
            out.add_term(Monomial::from_pairs(rest), coef);
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let (dlm, dlc) = d.leading_term()?;
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        if d.len() == 1 {
            let inv = dlc.recip();
            let mut terms = BTreeMap::new();
            for (m, c) in &self.terms {
                terms.insert(m.div(dlm)?, c * &inv);
            }
            return Some(Polynomial { terms });
        }
        if !self.quick_divisible(d) || !self.specialized_divisible(d) {
            return None;
        }
        let dlm = dlm.clone();
        // Work over the integers: with d scaled to a primitive integer
        // polynomial, Gauss's lemma makes the quotient of an integer dividend
        // integral, so every step is an exact integer division.
        let (nden, nterms) = self.integer_form();
        let (dden, dterms) = d.integer_form();
        let content = dterms.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
        let dlc = dterms.last()?.1.clone() / &content;
        let tail: Vec<(Monomial, BigInt)> = dterms
            .iter()
            .rev()
            .skip(1)
            .map(|(m, c)| ((*m).clone(), c / &content))
            .collect();
        // an exact quotient has weights and per-variable degrees inside
        // these bounds, so division stops as soon as it leaves them
        let wmin = self.trailing_term()?.0.weight() as i64 - d.trailing_term()?.0.weight() as i64;
        let caps: Vec<(Var, u32)> = self
            .vars()
            .into_iter()
            .map(|v| (v, self.degree_in(v) - d.degree_in(v)))
            .collect();
        let mut rem: BTreeMap<Monomial, BigInt> =
            nterms.into_iter().map(|(m, c)| (m.clone(), c)).collect();
        let mut quot = Vec::new();
        while let Some((lm, lc)) = rem.pop_last() {
            let qm = lm.div(&dlm)?;
            if (qm.weight() as i64) < wmin
                || qm.exps().iter().any(|&(v, e)| caps.iter().find(|c| c.0 == v).is_none_or(|c| e > c.1))
            {
                return None;
            }
            let (qc, r) = lc.div_rem(&dlc);
            if !r.is_zero() {
                return None;
            }
            for (m, c) in &tail {
                let key = m.mul(&qm);
                let delta = c * &qc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                }
            }
            quot.push((qm, qc));
        }
        // self = N / nden, d = content · D / dden, quotient = (N / D) · dden / (nden · content)
        let scale = Rational::new(dden, nden * content);
        let terms = quot
            .into_iter()
            .map(|(m, c)| (m, Rational::from_integer(c) * &scale))
            .collect();
        Some(Polynomial { terms })
    }

    /// Necessary condition for `d | self`: divisibility survives fixing every
    /// variable but one at a small integer point.
    fn specialized_divisible(&self, d: &Polynomial) -> bool {
        let Some(x) = d.vars().into_iter().max_by_key(|&v| (d.degree_in(v), std::cmp::Reverse(v))) else {
            return true;
        };
        let dd = d.univariate_image(x);
        if dd.len() < 2 {
            return true;
        }
        let mut rem = self.univariate_image(x);
        let lead_inv = dd.last().unwrap().recip();
        while rem.len() >= dd.len() {
            let q = rem.last().unwrap() * &lead_inv;
            let shift = rem.len() - dd.len();
            if !q.is_zero() {
                for (i, c) in dd.iter().enumerate() {
                    rem[shift + i] -= c * &q;
                }
            }
            rem.pop();
        }
        rem.iter().all(Zero::is_zero)
    }

    /// Coefficients in `x` after sending every other variable to a fixed
    /// small integer; trailing zeros trimmed.
    fn univariate_image(&self, x: Var) -> Vec<Rational> {
        let point = |v: Var| {
            let base = v.index as i64 * 7 + if v.family == Family::T { 3 } else { 5 };
            BigInt::from(2 + base % 11)
        };
        let (den, terms) = self.integer_form();
        let mut acc = vec![BigInt::zero(); self.degree_in(x) as usize + 1];
        for (m, c) in terms {
            let mut coef = c;
            let mut deg = 0;
            for &(v, e) in m.exps() {
                if v == x {
                    deg = e as usize;
                } else {
                    coef *= num_traits::pow(point(v), e as usize);
                }
            }
            acc[deg] += coef;
        }
        let mut out: Vec<Rational> = acc.into_iter().map(|c| Rational::new(c, den.clone())).collect();
        while out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }

    /// `(d, terms)` with `self = terms / d` and integer `terms`.
    fn integer_form(&self) -> (BigInt, Vec<(&Monomial, BigInt)>) {
        let mut den = BigInt::one();
        for c in self.terms.values() {
            if !c.denom().is_one() {
                den = den.lcm(c.denom());
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m, c.numer() * (&den / c.denom())))
            .collect();
        (den, terms)
    }

    /// Cheap necessary conditions for `d | self`.
    fn quick_divisible(&self, d: &Polynomial) -> bool {
        let (Some((lm, _)), Some((dlm, _))) = (self.leading_term(), d.leading_term()) else {
            return false;
        };
        if !dlm.divides(lm) {
            return false;
        }
        let (Some((tm, _)), Some((dtm, _))) = (self.trailing_term(), d.trailing_term()) else {
            return false;
        };
        if !dtm.divides(tm) {
            return false;
        }
        d.vars().into_iter().all(|v| d.degree_in(v) <= self.degree_in(v))
    }

    /// Greatest common monomial divisor of all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    /// Normalizes so that the leading coefficient is 1; returns the removed
    /// factor. Zero polynomial returns `(0, 0)`.
    pub fn make_monic(&self) -> (Rational, Polynomial) {
        match self.leading_term() {
            None => (Rational::zero(), Polynomial::zero()),
            Some((_, c)) => {
                let c = c.clone();
                (c.clone(), self.scale(&c.recip()))
            }
        }
    }

    /// Canonical JSON: a list of `{"coeff": "p/q", "exps": {"t3": 2}}` in
    /// ascending monomial order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let mut exps = Map::new();
                    for (v, e) in m.exps() {
                        exps.insert(v.to_string(), Value::from(*e));
                    }
                    let mut t = Map::new();
                    t.insert("coeff".into(), Value::String(format_rational(c)));
                    t.insert("exps".into(), Value::Object(exps));
                    Value::Object(t)
                })
                .collect(),
        )
    }

    pub fn to_json_string(&self) -> String {
        self.to_json().to_string()
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("polynomial must be a JSON array of terms".into()))?;
        let mut p = Polynomial::zero();
        for t in arr {
            let coeff = match t.get("coeff") {
                Some(Value::String(s)) => parse_rational(s)?,
                Some(Value::Number(n)) if n.is_i64() => parse_rational(&n.to_string())?,
                _ => return Err(Error::Parse("term is missing a rational \"coeff\"".into())),
            };
            let exps = match t.get("exps") {
                None => Map::new(),
                Some(Value::Object(o)) => o.clone(),
                Some(_) => return Err(Error::Parse("\"exps\" must be an object".into())),
            };
            let mut pairs = Vec::with_capacity(exps.len());
            for (k, e) in &exps {
                let v: Var = k.parse()?;
                let e = e
                    .as_u64()
                    .ok_or_else(|| Error::Parse(format!("bad exponent for {k}")))?;
                pairs.push((v, e as u32));
            }
            p.add_term(Monomial::from_pairs(pairs), coeff);
        }
        Ok(p)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Polynomial::from_json(&v)
    }
}

impl fmt::Display for Polynomial {
    /// Human-readable form, highest terms first, e.g. `1/3*t1^3 - t3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (mut big, small) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        big += small;
        big
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        if self.len() < rhs.len() {
            return rhs + self;
        }
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        if self.len() == 1 {
            let (m, c) = self.leading_term().unwrap();
            return rhs.mul_monomial(m, c);
        }
        if rhs.len() == 1 {
            let (m, c) = rhs.leading_term().unwrap();
            return self.mul_monomial(m, c);
        }
        // clear denominators so the inner loop is integer arithmetic with a
        // single normalization per output term
        let (da, ia) = self.integer_form();
        let (db, ib) = rhs.integer_form();
        let den = da * db;
        let cap = self.len() * rhs.len() / 2 + 1;
        if let Some(acc) = mul_small(&ia, &ib, cap) {
            return Polynomial {
                terms: acc
                    .into_iter()
                    .filter(|(_, c)| *c != 0)
                    .map(|(m, c)| (m, Rational::new(BigInt::from(c), den.clone())))
                    .collect(),
            };
        }
        let mut acc: FxHashMap<Monomial, BigInt> =
            FxHashMap::with_capacity_and_hasher(cap, Default::default());
        for (ma, ca) in &ia {
            for (mb, cb) in &ib {
                let c = ca * cb;
                acc.entry(ma.mul(mb))
                    .and_modify(|e| *e += &c)
                    .or_insert(c);
            }
        }
        Polynomial {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, Rational::new(c, den.clone())))
                .collect(),
        }
    }
}

/// Product of integer-coefficient term lists in `i128`, or `None` when a
/// coefficient does not fit.
fn mul_small(
    a: &[(&Monomial, BigInt)],
    b: &[(&Monomial, BigInt)],
    cap: usize,
) -> Option<FxHashMap<Monomial, i128>> {
    let small = |v: &[(&Monomial, BigInt)]| -> Option<Vec<i64>> {
        v.iter().map(|(_, c)| i64::try_from(c).ok()).collect()
    };
    let (sa, sb) = (small(a)?, small(b)?);
    let mut acc: FxHashMap<Monomial, i128> = FxHashMap::with_capacity_and_hasher(cap, Default::default());
    for ((ma, _), &ca) in a.iter().zip(&sa) {
        for ((mb, _), &cb) in b.iter().zip(&sb) {
            let c = ca as i128 * cb as i128;
            let e = acc.entry(ma.mul(mb)).or_insert(0);
            *e = e.checked_add(c)?;
        }
    }
    Some(acc)
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn s2() -> Polynomial {
        Polynomial::t(1).pow(2).scale(&rat(1, 2)) + Polynomial::t(2)
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&Polynomial::t(1) * &Polynomial::t(1), Polynomial::t(1).pow(2));
        assert_eq!(&s2() * &Polynomial::one(), s2());
        let a = &Polynomial::t(1) + &Polynomial::y(1);
        let b = &Polynomial::t(1) - &Polynomial::y(1);
        assert_eq!(&a * &b, &Polynomial::t(1).pow(2) - &Polynomial::y(1).pow(2));
    }

    #[test]
    fn shift_examples() {
        let p = Polynomial::t(1).pow(2);
        let c = ShiftTable::from_entries([(1, rat(1, 1))]);
        let expect = &(&p + &Polynomial::t(1).scale(&rat(2, 1))) + &Polynomial::one();
        assert_eq!(p.shift(&c, Family::T), expect);
        assert_eq!(p.shift(&ShiftTable::new(), Family::T), p);

        // s_2(t + c) = s_2 + c_1 s_1 + (c_1^2/2 + c_2)
        let (c1, c2) = (rat(3, 5), rat(-7, 2));
        let c = ShiftTable::from_entries([(1, c1.clone()), (2, c2.clone())]);
        let expect = &(&s2() + &Polynomial::t(1).scale(&c1))
            + &Polynomial::constant(&c1 * &c1 * rat(1, 2) + &c2);
        assert_eq!(s2().shift(&c, Family::T), expect);
    }

    #[test]
    fn diff_examples() {
        let p = &Polynomial::t(1).pow(3).scale(&rat(1, 3)) - &Polynomial::t(3);
        assert_eq!(p.diff(Var::t(1)), Polynomial::t(1).pow(2));
        assert_eq!(p.diff(Var::t(3)), Polynomial::from_int(-1));
        assert!(p.diff(Var::t(2)).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = &Polynomial::t(1) + &Polynomial::t(2).scale(&rat(3, 2));
        let b = &(&Polynomial::t(3) * &Polynomial::y(1)) - &Polynomial::from_int(5);
        let ab = &a * &b;
        assert_eq!(ab.div_exact(&a), Some(b.clone()));
        assert_eq!(ab.div_exact(&b), Some(a.clone()));
        assert_eq!((&ab + &Polynomial::one()).div_exact(&a), None);
        assert_eq!(Polynomial::zero().div_exact(&a), Some(Polynomial::zero()));
    }

    #[test]
    fn json_roundtrip_and_format() {
        let p = &Polynomial::t(1).pow(3).scale(&rat(1, 3)) - &Polynomial::t(3);
        let s = p.to_json_string();
        assert_eq!(
            s,
            r#"[{"coeff":"-1","exps":{"t3":1}},{"coeff":"1/3","exps":{"t1":3}}]"#
        );
        assert_eq!(Polynomial::from_json_str(&s).unwrap(), p);
        assert_eq!(p.to_string(), "1/3*t1^3 - t3");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn coeff() -> impl Strategy<Value = Rational> {
            prop_oneof![
                (-9i64..=9, 1i64..=6).prop_map(|(p, q)| rat(p, q)),
                // large numerators exercise the arbitrary-precision path
                (any::<i64>(), 1i64..=1_000_000).prop_map(|(p, q)| rat(p, q) * rat(i64::MAX, 3)),
            ]
        }

        fn poly() -> impl Strategy<Value = Polynomial> {
            let var = prop_oneof![Just(Var::t(1)), Just(Var::t(2)), Just(Var::t(3)), Just(Var::y(1))];
            let mono = proptest::collection::vec((var, 1u32..=3), 0..3).prop_map(Monomial::from_pairs);
            proptest::collection::vec((mono, coeff()), 0..6).prop_map(Polynomial::from_terms)
        }

        /// Term-by-term product with no denominator clearing.
        fn naive_mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
            let mut out = Polynomial::zero();
            for (ma, ca) in a.iter() {
                for (mb, cb) in b.iter() {
                    out.add_term(ma.mul(mb), ca * cb);
                }
            }
            out
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn product_matches_naive(a in poly(), b in poly()) {
                prop_assert_eq!(&a * &b, naive_mul(&a, &b));
            }

            #[test]
            fn ring_laws(a in poly(), b in poly(), c in poly()) {
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert!((&a - &a).is_zero());
            }

            #[test]
            fn division_is_exact(a in poly(), b in poly()) {
                prop_assume!(!b.is_zero());
                let ab = &a * &b;
                prop_assert_eq!(ab.div_exact(&b), Some(a.clone()));
                if let Some(q) = (&ab + &Polynomial::t(4)).div_exact(&b) {
                    prop_assert_eq!(&q * &b, &ab + &Polynomial::t(4));
                }
            }

            #[test]
            fn derivation_rule(a in poly(), b in poly()) {
                let v = Var::t(1);
                prop_assert_eq!((&a * &b).diff(v), &(&a.diff(v) * &b) + &(&a * &b.diff(v)));
            }
        }
    }
}
