//! Pseudodifferential operators `Σ_{j ≤ N} P_j(t) ∂^j` with `∂ = ∂/∂t_1`.
//!
//! Coefficients sit to the left of the powers of `∂`. An operator either is
//! exact (a finite sum, `floor() == None`) or carries a floor `f`: every
//! coefficient of order `≥ f` is exact and nothing below is stored. Each
//! operation computes the floor down to which its result is guaranteed.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::exactalg::{Polynomial, Rational, RationalFunction, Var};

/// Margin used when an infinite expansion must be truncated and no floor was
/// requested: the floor becomes `-(DEFAULT_MARGIN + max(0, order))`.
pub const DEFAULT_MARGIN: i64 = 6;

#[derive(Clone)]
pub struct PseudoDiffOp {
    coeffs: BTreeMap<i64, RationalFunction>,
    floor: Option<i64>,
}

/// Generalized binomial `k (k-1) ... (k-i+1) / i!`.
pub fn binomial(k: i64, i: u32) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for m in 0..i as i64 {
        num *= BigInt::from(k - m);
        den *= BigInt::from(m + 1);
    }
    Rational::new(num, den)
}

fn d1() -> Var {
    Var::t(1)
}

fn min_floor(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    }
}

fn default_floor(order: i64) -> i64 {
    -(DEFAULT_MARGIN + order.max(0))
}

/// Lazily computed `∂^i f`.
struct Derivs {
    list: Vec<RationalFunction>,
}

impl Derivs {
    fn new(f: RationalFunction) -> Self {
        Derivs { list: vec![f] }
    }

    fn get(&mut self, i: usize) -> &RationalFunction {
        while self.list.len() <= i {
            let next = self.list.last().unwrap().diff(d1());
            self.list.push(next);
        }
        &self.list[i]
    }

    /// True once some derivative up to `i` vanishes.
    fn vanishes_by(&mut self, i: usize) -> bool {
        (0..=i).any(|k| self.get(k).is_zero())
    }
}

impl PseudoDiffOp {
    pub fn zero() -> Self {
        PseudoDiffOp {
            coeffs: BTreeMap::new(),
            floor: None,
        }
    }

    pub fn identity() -> Self {
        PseudoDiffOp::d_pow(0)
    }

    /// `∂`.
    pub fn d() -> Self {
        PseudoDiffOp::d_pow(1)
    }

    /// `∂^k` for any integer `k`.
    pub fn d_pow(k: i64) -> Self {
        PseudoDiffOp::monomial(RationalFunction::one(), k)
    }

    /// `f ∂^k`.
    pub fn monomial(f: RationalFunction, k: i64) -> Self {
        PseudoDiffOp::from_coeffs([(k, f)], None)
    }

    /// Multiplication by `f`.
    pub fn scalar(f: RationalFunction) -> Self {
        PseudoDiffOp::monomial(f, 0)
    }

    pub fn from_poly(p: Polynomial) -> Self {
        PseudoDiffOp::scalar(p.into())
    }

    /// Builds an operator from `(order, coefficient)` pairs, dropping zero
    /// coefficients and anything below `floor`.
    pub fn from_coeffs<I: IntoIterator<Item = (i64, RationalFunction)>>(
        coeffs: I,
        floor: Option<i64>,
    ) -> Self {
        let mut op = PseudoDiffOp {
            coeffs: BTreeMap::new(),
            floor,
        };
        for (k, c) in coeffs {
            op.add_coeff(k, c);
        }
        op
    }

    fn add_coeff(&mut self, k: i64, c: RationalFunction) {
        if c.is_zero() || self.floor.is_some_and(|f| k < f) {
            return;
        }
        match self.coeffs.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_order(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_order(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn coeff(&self, k: i64) -> RationalFunction {
        self.coeffs.get(&k).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn coeffs(&self) -> impl DoubleEndedIterator<Item = (i64, &RationalFunction)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Highest order that an unknown tail or a stored term can reach.
    fn top(&self) -> Option<i64> {
        match (self.max_order(), self.floor) {
            (Some(m), Some(f)) => Some(m.max(f - 1)),
            (Some(m), None) => Some(m),
            (None, Some(f)) => Some(f - 1),
            (None, None) => None,
        }
    }

    /// Drops everything below `floor` (never lowers an existing floor).
    pub fn truncate(&self, floor: i64) -> Self {
        let f = min_floor(self.floor, Some(floor));
        PseudoDiffOp {
            coeffs: self
                .coeffs
                .range(f.unwrap()..)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            floor: f,
        }
    }

    pub fn is_differential(&self) -> bool {
        self.min_order().is_none_or(|m| m >= 0) && self.floor.is_none_or(|f| f <= 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let floor = min_floor(self.floor, other.floor);
        let mut out = PseudoDiffOp {
            coeffs: BTreeMap::new(),
            floor,
        };
        for (k, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_coeff(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        PseudoDiffOp {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.neg())).collect(),
            floor: self.floor,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `f ∘ self`.
    pub fn mul_left(&self, f: &RationalFunction) -> Self {
        PseudoDiffOp::from_coeffs(
            self.coeffs.iter().map(|(k, c)| (*k, f.mul(c))),
            self.floor,
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PseudoDiffOp::from_coeffs(self.coeffs.iter().map(|(k, a)| (*k, a.scale(c))), self.floor)
    }

    /// Floor forced by the inputs' own truncation.
    fn natural_floor(&self, other: &Self) -> Option<i64> {
        let from_a = self.floor.and_then(|fa| other.top().map(|t| fa + t));
        let from_b = other.floor.and_then(|fb| self.top().map(|t| fb + t));
        min_floor(from_a, from_b)
    }

    /// `self ∘ other`, truncated at the natural floor; an exact pair whose
    /// product is an infinite series gets the default floor.
    pub fn compose(&self, other: &Self) -> Self {
        self.compose_impl(other, None)
    }

    /// `self ∘ other` computed only down to `floor` (or the natural floor,
    /// whichever is higher).
    pub fn compose_to(&self, other: &Self, floor: i64) -> Self {
        self.compose_impl(other, Some(floor))
    }

    fn compose_impl(&self, other: &Self, target: Option<i64>) -> Self {
        if (self.is_zero() && self.floor.is_none()) || (other.is_zero() && other.floor.is_none()) {
            return PseudoDiffOp::zero();
        }
        let natural = self.natural_floor(other);
        let requested = min_floor(natural, target);
        let fallback = default_floor(
            self.max_order().unwrap_or(0) + other.max_order().unwrap_or(0),
        );
        let work_floor = requested.unwrap_or(fallback);
        let mut out = PseudoDiffOp {
            coeffs: BTreeMap::new(),
            floor: Some(work_floor),
        };
        let mut truncated = false;
        let mut derivs: BTreeMap<i64, Derivs> = other
            .coeffs
            .iter()
            .map(|(l, b)| (*l, Derivs::new(b.clone())))
            .collect();
        for (&k, a) in &self.coeffs {
            for (&l, db) in derivs.iter_mut() {
                let top = k + l;
                if top < work_floor {
                    truncated = true;
                    continue;
                }
                let last = (top - work_floor) as usize;
                let imax = if k >= 0 { (k as usize).min(last) } else { last };
                if k < 0 || (k as usize) > last {
                    // terms below the floor are dropped; note whether any survive
                    if !db.vanishes_by(imax + 1) {
                        truncated = true;
                    }
                }
                for i in 0..=imax {
                    let bi = db.get(i);
                    if bi.is_zero() {
                        break;
                    }
                    let c = binomial(k, i as u32);
                    out.add_coeff(top - i as i64, a.mul(bi).scale(&c));
                }
            }
        }
        if natural.is_none() && !truncated {
            out.floor = None;
        }
        out
    }

    /// `self^j` (`j = 0` gives the identity).
    pub fn power(&self, j: u32) -> Self {
        let mut acc = PseudoDiffOp::identity();
        for _ in 0..j {
            acc = acc.compose(self);
        }
        acc
    }

    pub fn power_to(&self, j: u32, floor: i64) -> Self {
        // intermediate powers are kept deep enough for the final floor
        let step = self.top().unwrap_or(0).max(0);
        let mut acc = PseudoDiffOp::identity();
        for s in 1..=j as i64 {
            acc = acc.compose_to(self, floor - (j as i64 - s) * step);
        }
        acc
    }

    /// Formal adjoint `Σ (-∂)^j ∘ P_j`, same floor as the input.
    pub fn adjoint(&self) -> Self {
        self.adjoint_impl(None)
    }

    pub fn adjoint_to(&self, floor: i64) -> Self {
        self.adjoint_impl(Some(floor))
    }

    fn adjoint_impl(&self, target: Option<i64>) -> Self {
        let requested = min_floor(self.floor, target);
        let mut out = PseudoDiffOp::zero();
        out.floor = requested;
        let mut any_floor = requested.is_some();
        for (&j, p) in &self.coeffs {
            let term = PseudoDiffOp::d_pow(j).compose_impl(&PseudoDiffOp::scalar(p.clone()), requested);
            let term = if j % 2 == 0 { term } else { term.neg() };
            if let Some(f) = term.floor {
                any_floor = true;
                out.floor = min_floor(out.floor, Some(f));
            }
            for (k, c) in term.coeffs {
                out.add_coeff(k, c);
            }
        }
        if !any_floor {
            out.floor = None;
        }
        if let Some(f) = out.floor {
            out = out.truncate(f);
        }
        out
    }

    /// Differential part `Σ_{j ≥ 0} P_j ∂^j`; exact whenever the input is
    /// known down to order 0.
    pub fn plus(&self) -> Self {
        let floor = match self.floor {
            Some(f) if f > 0 => Some(f),
            _ => None,
        };
        PseudoDiffOp {
            coeffs: self.coeffs.range(0..).map(|(k, c)| (*k, c.clone())).collect(),
            floor,
        }
    }

    /// `self - self.plus()`.
    pub fn minus(&self) -> Self {
        PseudoDiffOp {
            coeffs: self.coeffs.range(..0).map(|(k, c)| (*k, c.clone())).collect(),
            floor: match self.floor {
                Some(f) if f > 0 => Some(0),
                f => f,
            },
        }
    }

    /// Coefficient of `∂^{-1}`.
    pub fn residue(&self) -> Result<RationalFunction> {
        match self.floor {
            Some(f) if f > -1 => Err(Error::FloorTooHigh { floor: f }),
            _ => Ok(self.coeff(-1)),
        }
    }

    /// Coefficientwise `∂/∂t_j`.
    pub fn diff_t(&self, j: u32) -> Self {
        PseudoDiffOp::from_coeffs(
            self.coeffs.iter().map(|(k, c)| (*k, c.diff(Var::t(j)))),
            self.floor,
        )
    }

    fn leading_monic(&self) -> Result<i64> {
        let m = self.max_order().ok_or(Error::NotMonic)?;
        if self.floor.is_some_and(|f| f > m) || self.coeff(m) != RationalFunction::one() {
            return Err(Error::NotMonic);
        }
        Ok(m)
    }

    /// Inverse of a monic operator of order `m`, exact down to
    /// `floor - 2m` (or the default floor for exact input).
    pub fn inverse(&self) -> Result<Self> {
        let m = self.leading_monic()?;
        let f = self.floor.map_or(default_floor(-m), |fa| fa - 2 * m);
        self.inverse_to(f)
    }

    pub fn inverse_to(&self, floor: i64) -> Result<Self> {
        let m = self.leading_monic()?;
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(PseudoDiffOp::d_pow(-m));
        }
        let floor = match self.floor {
            Some(fa) => floor.max(fa - 2 * m),
            None => floor,
        };
        let mut inv = PseudoDiffOp::d_pow(-m);
        // running product self ∘ inv, needed only down to order floor + m
        let pfloor = floor + m;
        let mut prod = self.compose_to(&inv, pfloor);
        let mut o = -m - 1;
        while o >= floor {
            let target = if m + o == 0 {
                RationalFunction::one()
            } else {
                RationalFunction::zero()
            };
            let b = target.sub(&prod.coeff(m + o));
            if !b.is_zero() {
                let term = PseudoDiffOp::monomial(b.clone(), o);
                prod = prod.add(&self.compose_to(&term, pfloor));
                inv.add_coeff(o, b);
            }
            o -= 1;
        }
        inv.floor = Some(floor);
        Ok(inv)
    }

    /// Normalized `n`-th root `∂ + r_0 + r_{-1} ∂^{-1} + ...` of a monic
    /// operator of order `n`, exact down to `floor - (n - 1)`.
    pub fn nth_root(&self, n: u32) -> Result<Self> {
        let f = match self.floor {
            Some(fa) => fa - (n as i64 - 1),
            None => default_floor(1),
        };
        self.nth_root_to(n, f)
    }

    pub fn nth_root_to(&self, n: u32, floor: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotNormalizable {
                n,
                reason: "root index must be positive".into(),
            });
        }
        let m = self.max_order();
        if m != Some(n as i64) {
            return Err(Error::NotNormalizable {
                n,
                reason: format!("operator has order {:?}", m),
            });
        }
        if self.leading_monic().is_err() {
            return Err(Error::NotNormalizable {
                n,
                reason: "leading coefficient is not 1".into(),
            });
        }
        if n == 1 {
            return Ok(self.truncate(floor));
        }
        let n_i = n as i64;
        let floor = match self.floor {
            Some(fa) => floor.max(fa - (n_i - 1)),
            None => floor,
        };
        let mut root = PseudoDiffOp::d();
        let inv_n = Rational::new(BigInt::one(), BigInt::from(n));
        let mut j = 0;
        while j >= floor {
            let order = n_i - 1 + j;
            let pow = root.power_to(n, order);
            let r = self.coeff(order).sub(&pow.coeff(order)).scale(&inv_n);
            root.add_coeff(j, r);
            j -= 1;
        }
        root.floor = Some(floor);
        Ok(root)
    }

    /// Applies a differential operator to a function.
    pub fn apply(&self, f: &RationalFunction) -> Result<RationalFunction> {
        if !self.is_differential() {
            return Err(Error::NotDifferential);
        }
        let mut out = RationalFunction::zero();
        let mut deriv = f.clone();
        let mut k = 0;
        for (&order, c) in &self.coeffs {
            while k < order {
                deriv = deriv.diff(d1());
                k += 1;
            }
            out = out.add(&c.mul(&deriv));
        }
        Ok(out)
    }

    /// Lowest order down to which both operators are known.
    pub fn common_floor(&self, other: &Self) -> Option<i64> {
        min_floor(self.floor, other.floor)
    }

    /// First order (from the top) where the operators differ within their
    /// common exact range, with the two coefficients.
    pub fn first_mismatch(
        &self,
        other: &Self,
    ) -> Option<(i64, RationalFunction, RationalFunction)> {
        let floor = self.common_floor(other);
        let orders: std::collections::BTreeSet<i64> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .filter(|k| floor.is_none_or(|f| *k >= f))
            .collect();
        for k in orders.into_iter().rev() {
            let (a, b) = (self.coeff(k), other.coeff(k));
            if a != b {
                return Some((k, a, b));
            }
        }
        None
    }

    /// Equality on the common exact range.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_mismatch(other).is_none()
    }

    pub fn to_json(&self) -> Value {
        let mut coeffs = Map::new();
        for (k, c) in &self.coeffs {
            coeffs.insert(k.to_string(), c.to_json());
        }
        let mut m = Map::new();
        m.insert("floor".into(), self.floor.map_or(Value::Null, Value::from));
        m.insert("coeffs".into(), Value::Object(coeffs));
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let floor = match v.get("floor") {
            None | Some(Value::Null) => None,
            Some(f) => Some(
                f.as_i64()
                    .ok_or_else(|| Error::Parse("floor must be an integer".into()))?,
            ),
        };
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("missing \"coeffs\" object".into()))?;
        let mut pairs = Vec::new();
        for (k, c) in coeffs {
            let k: i64 = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad order {k:?}")))?;
            pairs.push((k, RationalFunction::from_json(c)?));
        }
        Ok(PseudoDiffOp::from_coeffs(pairs, floor))
    }
}

impl PartialEq for PseudoDiffOp {
    /// Equal floors and equal coefficients.
    fn eq(&self, other: &Self) -> bool {
        self.floor == other.floor && self.agrees_with(other)
    }
}

impl fmt::Display for PseudoDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (n, (k, c)) in self.coeffs.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            match *k {
                0 => write!(f, "[{c}]")?,
                1 => write!(f, "[{c}]∂")?,
                _ => write!(f, "[{c}]∂^{k}")?,
            }
        }
        if let Some(fl) = self.floor {
            write!(f, " + O(∂^{})", fl - 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PseudoDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PseudoDiffOp({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, Monomial};
    use proptest::prelude::*;

    fn rf(p: Polynomial) -> RationalFunction {
        p.into()
    }

    fn t(i: u32) -> Polynomial {
        Polynomial::t(i)
    }

    fn f() -> RationalFunction {
        // a coefficient with a non-terminating derivative sequence
        RationalFunction::new(t(2), &(&t(1) + &Polynomial::one())).unwrap()
    }

    #[test]
    fn leibniz() {
        let g = rf(&t(1).pow(2) + &t(2));
        let op = PseudoDiffOp::d().compose(&PseudoDiffOp::scalar(g.clone()));
        let expect = PseudoDiffOp::from_coeffs([(1, g.clone()), (0, g.diff(Var::t(1)))], None);
        assert_eq!(op, expect);
    }

    #[test]
    fn inverse_d_series() {
        let op = PseudoDiffOp::d_pow(-1).compose_to(&PseudoDiffOp::scalar(f()), -4);
        assert_eq!(op.floor(), Some(-4));
        let mut d = f();
        for k in 1..=4 {
            let sign = if k % 2 == 1 { rat(1, 1) } else { rat(-1, 1) };
            assert_eq!(op.coeff(-k), d.scale(&sign), "order {}", -k);
            d = d.diff(Var::t(1));
        }
        // polynomial coefficients terminate and stay exact
        let op = PseudoDiffOp::d_pow(-1).compose(&PseudoDiffOp::from_poly(t(1)));
        assert!(op.is_exact());
        assert_eq!(op.coeff(-1), rf(t(1)));
        assert_eq!(op.coeff(-2), rf(Polynomial::from_int(-1)));
        assert_eq!(op.residue().unwrap(), rf(t(1)));
    }

    #[test]
    fn factorized_second_order() {
        let v = f();
        let a = PseudoDiffOp::d().add(&PseudoDiffOp::scalar(v.clone()));
        let b = PseudoDiffOp::d().sub(&PseudoDiffOp::scalar(v.clone()));
        let expect = PseudoDiffOp::d_pow(2)
            .sub(&PseudoDiffOp::scalar(v.diff(Var::t(1)).add(&v.mul(&v))));
        assert_eq!(a.compose(&b), expect);
        let sq = a.power(2);
        let expect = PseudoDiffOp::from_coeffs(
            [
                (2, RationalFunction::one()),
                (1, v.scale(&rat(2, 1))),
                (0, v.diff(Var::t(1)).add(&v.mul(&v))),
            ],
            None,
        );
        assert_eq!(sq, expect);
        assert_eq!(PseudoDiffOp::d().power(3), PseudoDiffOp::d_pow(3));
        assert_eq!(a.power(0), PseudoDiffOp::identity());
    }

    #[test]
    fn adjoint_examples() {
        let g = f();
        let op = PseudoDiffOp::monomial(g.clone(), 1);
        let expect = PseudoDiffOp::from_coeffs([(1, g.neg()), (0, g.diff(Var::t(1)).neg())], None);
        assert_eq!(op.adjoint(), expect);
        assert_eq!(PseudoDiffOp::d().adjoint(), PseudoDiffOp::d().neg());
        let schr = PseudoDiffOp::d_pow(2).add(&PseudoDiffOp::scalar(g));
        assert_eq!(schr.adjoint(), schr);
    }

    #[test]
    fn projections_and_residue() {
        let u = f();
        let op = PseudoDiffOp::d().add(&PseudoDiffOp::monomial(u.clone(), -1));
        assert_eq!(op.plus(), PseudoDiffOp::d());
        assert_eq!(op.minus(), PseudoDiffOp::monomial(u.clone(), -1));
        assert_eq!(PseudoDiffOp::scalar(u.clone()).plus(), PseudoDiffOp::scalar(u.clone()));
        assert_eq!(op.residue().unwrap(), u);
        assert!(PseudoDiffOp::d_pow(2).residue().unwrap().is_zero());
        let res = PseudoDiffOp::d_pow(-1)
            .compose_to(&PseudoDiffOp::scalar(f()), -6)
            .residue()
            .unwrap();
        assert_eq!(res, f());
        assert_eq!(
            PseudoDiffOp::d().truncate(0).residue(),
            Err(Error::FloorTooHigh { floor: 0 })
        );
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(PseudoDiffOp::identity().inverse().unwrap(), PseudoDiffOp::identity());
        assert_eq!(PseudoDiffOp::d().inverse().unwrap(), PseudoDiffOp::d_pow(-1));
        let a = f();
        let op = PseudoDiffOp::identity().add(&PseudoDiffOp::monomial(a.clone(), -1));
        let inv = op.inverse_to(-4).unwrap();
        assert_eq!(inv.coeff(-1), a.neg());
        // Neumann series: ∂^{-2} coefficient a^2
        assert_eq!(inv.coeff(-2), a.mul(&a));
        // ∂^{-3}: -a^3 - a a'
        assert_eq!(
            inv.coeff(-3),
            a.pow(3).add(&a.mul(&a.diff(Var::t(1)))).neg()
        );
        let prod = op.compose_to(&inv, -4);
        assert!(prod.agrees_with(&PseudoDiffOp::identity()), "{prod}");
        assert_eq!(
            PseudoDiffOp::monomial(rf(Polynomial::from_int(2)), 1).inverse().err(),
            Some(Error::NotMonic)
        );
    }

    #[test]
    fn root_examples() {
        assert_eq!(PseudoDiffOp::d_pow(2).nth_root(2).unwrap().truncate(-4), PseudoDiffOp::d().truncate(-4));
        assert_eq!(PseudoDiffOp::d_pow(3).nth_root(3).unwrap().truncate(-4), PseudoDiffOp::d().truncate(-4));
        let u = f();
        let op = PseudoDiffOp::d_pow(2).add(&PseudoDiffOp::scalar(u.clone()));
        let r = op.nth_root_to(2, -4).unwrap();
        assert!(r.coeff(0).is_zero());
        assert_eq!(r.coeff(-1), u.scale(&rat(1, 2)));
        assert_eq!(r.coeff(-2), u.diff(Var::t(1)).scale(&rat(-1, 4)));
        assert!(r.power_to(2, -4).agrees_with(&op));
        assert!(matches!(
            PseudoDiffOp::d_pow(3).nth_root(2),
            Err(Error::NotNormalizable { .. })
        ));
    }

    #[test]
    fn diff_t_examples() {
        let op = PseudoDiffOp::monomial(rf(t(1)), -1);
        assert_eq!(op.diff_t(1), PseudoDiffOp::d_pow(-1));
        assert!(op.diff_t(2).is_zero());
        let inv_t1 = RationalFunction::new(Polynomial::one(), &t(1)).unwrap();
        let op = PseudoDiffOp::monomial(inv_t1, 1);
        let expect = PseudoDiffOp::monomial(
            RationalFunction::new(Polynomial::from_int(-1), &t(1).pow(2)).unwrap(),
            1,
        );
        assert_eq!(op.diff_t(1), expect);
    }

    #[test]
    fn apply_differential() {
        let op = PseudoDiffOp::d_pow(2).add(&PseudoDiffOp::scalar(rf(t(2))));
        let g = rf(t(1).pow(3));
        assert_eq!(
            op.apply(&g).unwrap(),
            rf(&t(1).scale(&rat(6, 1)) + &(&t(2) * &t(1).pow(3)))
        );
        assert_eq!(PseudoDiffOp::d_pow(-1).apply(&g), Err(Error::NotDifferential));
    }

    #[test]
    fn json_round_trip() {
        let op = PseudoDiffOp::d().add(&PseudoDiffOp::monomial(f(), -2)).truncate(-3);
        assert_eq!(PseudoDiffOp::from_json(&op.to_json()).unwrap(), op);
    }

    // random operators with polynomial coefficients in t1, t2

    fn coeff_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(((-3i64..=3), 0u32..=2, 0u32..=1), 0..=3).prop_map(|terms| {
            Polynomial::from_terms(terms.into_iter().map(|(c, e1, e2)| {
                let m = Monomial::from_pairs([(Var::t(1), e1), (Var::t(2), e2)]);
                (m, rat(c, 1))
            }))
        })
    }

    fn op_strategy(lo: i64, hi: i64) -> impl Strategy<Value = PseudoDiffOp> {
        prop::collection::vec((lo..=hi, coeff_poly()), 1..=3).prop_map(|cs| {
            PseudoDiffOp::from_coeffs(cs.into_iter().map(|(k, p)| (k, p.into())), None)
        })
    }

    fn monic_strategy(order: i64) -> impl Strategy<Value = PseudoDiffOp> {
        prop::collection::vec((-2i64..order, coeff_poly()), 0..=3).prop_map(move |cs| {
            PseudoDiffOp::d_pow(order).add(&PseudoDiffOp::from_coeffs(
                cs.into_iter().map(|(k, p)| (k, p.into())),
                None,
            ))
        })
    }

    /// Laurent-in-t1 coefficients: t1^e * p(t2), e in [-2, 2].
    fn laurent_op() -> impl Strategy<Value = PseudoDiffOp> {
        prop::collection::vec((-2i64..=2, -2i32..=2, -2i64..=2), 1..=3).prop_map(|cs| {
            PseudoDiffOp::from_coeffs(
                cs.into_iter().map(|(k, e, c)| {
                    let c = &Polynomial::from_int(c) + &t(2);
                    let coef = if e >= 0 {
                        (&c * &t(1).pow(e as u32)).into()
                    } else {
                        RationalFunction::new(c, &t(1).pow((-e) as u32)).unwrap()
                    };
                    (k, coef)
                }),
                None,
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn associativity(a in op_strategy(-2, 2), b in op_strategy(-2, 2), c in op_strategy(-2, 2)) {
            let f = -6;
            let left = a.compose_to(&b, f - 4).compose_to(&c, f);
            let right = a.compose_to(&b.compose_to(&c, f - 4), f);
            prop_assert!(left.truncate(f).agrees_with(&right.truncate(f)));
        }

        #[test]
        fn adjoint_antihomomorphism(a in op_strategy(-2, 2), b in op_strategy(-2, 2)) {
            let f = -6;
            let lhs = a.compose_to(&b, f - 4).adjoint();
            let rhs = b.adjoint_to(f - 4).compose_to(&a.adjoint_to(f - 4), f);
            prop_assert!(lhs.truncate(f).agrees_with(&rhs.truncate(f)));
        }

        #[test]
        fn adjoint_is_involution(a in op_strategy(-2, 2)) {
            let f = -6;
            prop_assert!(a.adjoint_to(f).adjoint().agrees_with(&a.truncate(f)));
        }

        #[test]
        fn inverse_two_sided(a in monic_strategy(1)) {
            let f = -6;
            let inv = a.inverse_to(f - 2).unwrap();
            prop_assert!(a.compose_to(&inv, f).agrees_with(&PseudoDiffOp::identity().truncate(f)));
            prop_assert!(inv.compose_to(&a, f).agrees_with(&PseudoDiffOp::identity().truncate(f)));
        }

        #[test]
        fn root_round_trip(a in monic_strategy(2)) {
            let f = -6;
            let r = a.nth_root_to(2, f - 1).unwrap();
            prop_assert!(r.power_to(2, f).agrees_with(&a.truncate(f)));
        }

        #[test]
        fn floor_bookkeeping(a in op_strategy(-3, 2), b in op_strategy(-3, 2)) {
            // truncated inputs: the reported floor must be exact against a deep recomputation
            let (fa, fb) = (-3, -2);
            let at = a.truncate(fa);
            let bt = b.truncate(fb);
            let shallow = at.compose(&bt);
            let deep = a.compose_to(&b, -14);
            prop_assert!(shallow.floor().is_some());
            prop_assert!(shallow.agrees_with(&deep));
        }

        #[test]
        fn commutator_residue_is_total_derivative(a in laurent_op(), b in laurent_op()) {
            // a Laurent series in t1 is a t1-derivative iff its t1^{-1} coefficient vanishes
            let comm = a.compose_to(&b, -2).sub(&b.compose_to(&a, -2));
            let r = comm.residue().unwrap();
            let k = r
                .denominator_factors()
                .iter()
                .map(|(g, e)| {
                    assert_eq!(**g, t(1));
                    *e
                })
                .sum::<u32>();
            if k > 0 {
                let hit = r
                    .numerator()
                    .iter()
                    .filter(|(m, _)| m.exp_of(Var::t(1)) == k - 1)
                    .count();
                prop_assert_eq!(hit, 0);
            }
        }
    }
}
