use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{Map, Value};

use super::polynomial::Polynomial;
use super::rational::Rational;
use super::var::Var;
use crate::error::{Error, Result};

/// Quotient of polynomials with a factored denominator.
///
/// The denominator is a product of monic factors raised to positive powers;
/// any scalar lives in the numerator. Factors are never split further than
/// they were supplied (apart from monomial content, which is broken into
/// single-variable factors), so cancellation is by trial division against
/// the known factors. Equality is decided by the numerator of the difference,
/// which makes it exact regardless of how reduced either side is.
#[derive(Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Vec<(Arc<Polynomial>, u32)>,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        RationalFunction::from_poly(Polynomial::one())
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunction::from_poly(Polynomial::constant(c))
    }

    pub fn from_poly(num: Polynomial) -> Self {
        RationalFunction { num, den: Vec::new() }
    }

    /// `num / den`; fails when `den` is zero.
    pub fn new(num: Polynomial, den: &Polynomial) -> Result<Self> {
        let (scalar, factors) = factor_denominator(den)?;
        let mut r = RationalFunction {
            num: num.scale(&scalar.recip()),
            den: factors,
        };
        r.reduce();
        Ok(r)
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(Arc<Polynomial>, u32)] {
        &self.den
    }

    pub fn denominator(&self) -> Polynomial {
        let mut d = Polynomial::one();
        for (f, e) in &self.den {
            d = &d * &f.pow(*e);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// The polynomial value, if the denominator has cancelled completely.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lcm = lcm_factors(&self.den, &other.den);
        let a = &self.num * &cofactor(&lcm, &self.den);
        let b = &other.num * &cofactor(&lcm, &other.den);
        let mut r = RationalFunction { num: a + b, den: lcm };
        r.reduce();
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RationalFunction::zero();
        }
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            push_factor(&mut den, f, *e);
        }
        let mut r = RationalFunction {
            num: &self.num * &other.num,
            den,
        };
        r.reduce();
        r
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        self.mul(&RationalFunction::from_poly(p.clone()))
    }

    pub fn recip(&self) -> Result<Self> {
        let (scalar, factors) = factor_denominator(&self.num)?;
        let mut r = RationalFunction {
            num: self.denominator().scale(&scalar.recip()),
            den: factors,
        };
        r.reduce();
        Ok(r)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = RationalFunction::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative by the quotient rule, over the factored form.
    pub fn diff(&self, v: Var) -> Self {
        let dn = self.num.diff(v);
        let moving: Vec<(usize, Polynomial)> = self
            .den
            .iter()
            .enumerate()
            .map(|(i, (f, _))| (i, f.diff(v)))
            .filter(|(_, d)| !d.is_zero())
            .collect();
        if moving.is_empty() {
            let mut r = RationalFunction {
                num: dn,
                den: self.den.clone(),
            };
            r.reduce();
            return r;
        }
        // (N / Π f^e)' = (N' Π g - N Σ e_i g_i' Π_{j≠i} g_j) / (Π f^e · Π g),
        // where g runs over the factors that depend on v.
        let mut prod_all = Polynomial::one();
        for (i, _) in &moving {
            prod_all = &prod_all * &self.den[*i].0;
        }
        let mut num = &dn * &prod_all;
        for (k, (i, df)) in moving.iter().enumerate() {
            let e = self.den[*i].1;
            let mut others = df.scale(&Rational::from_integer(e.into()));
            for (k2, (i2, _)) in moving.iter().enumerate() {
                if k2 != k {
                    others = &others * &self.den[*i2].0;
                }
            }
            num -= &(&self.num * &others);
        }
        let mut den = self.den.clone();
        for (i, _) in &moving {
            den[*i].1 += 1;
        }
        if num.is_zero() {
            return RationalFunction::zero();
        }
        // no reduce: cancellation here would need a common factor of a
        // denominator factor and its derivative
        RationalFunction { num, den }
    }

    /// Cancels known denominator factors from the numerator.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, e) in self.den.iter_mut() {
            while *e > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("num".into(), self.num.to_json());
        m.insert("den".into(), self.denominator().to_json());
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Array(_) => Ok(RationalFunction::from_poly(Polynomial::from_json(v)?)),
            Value::Object(o) => {
                let num = Polynomial::from_json(
                    o.get("num")
                        .ok_or_else(|| Error::Parse("missing \"num\"".into()))?,
                )?;
                let den = match o.get("den") {
                    Some(d) => Polynomial::from_json(d)?,
                    None => Polynomial::one(),
                };
                RationalFunction::new(num, &den)
            }
            _ => Err(Error::Parse("rational function must be an object".into())),
        }
    }
}

/// Splits `den` into a scalar and monic factors, with the monomial content
/// broken into single-variable factors.
fn factor_denominator(den: &Polynomial) -> Result<(Rational, Vec<(Arc<Polynomial>, u32)>)> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let content = den.monomial_content();
    let rest = if content.is_one() {
        den.clone()
    } else {
        den.div_exact(&Polynomial::term(content.clone(), Rational::one()))
            .expect("monomial content divides")
    };
    let (scalar, monic) = rest.make_monic();
    let mut factors = Vec::new();
    for &(v, e) in content.exps() {
        factors.push((Arc::new(Polynomial::var(v)), e));
    }
    if !monic.is_one() {
        factors.push((Arc::new(monic), 1));
    }
    Ok((scalar, factors))
}

fn push_factor(list: &mut Vec<(Arc<Polynomial>, u32)>, f: &Arc<Polynomial>, e: u32) {
    match list.iter_mut().find(|(g, _)| Arc::ptr_eq(g, f) || **g == **f) {
        Some(entry) => entry.1 += e,
        None => list.push((f.clone(), e)),
    }
}

fn lcm_factors(
    a: &[(Arc<Polynomial>, u32)],
    b: &[(Arc<Polynomial>, u32)],
) -> Vec<(Arc<Polynomial>, u32)> {
    let mut out = a.to_vec();
    for (f, e) in b {
        match out.iter_mut().find(|(g, _)| Arc::ptr_eq(g, f) || **g == **f) {
            Some(entry) => entry.1 = entry.1.max(*e),
            None => out.push((f.clone(), *e)),
        }
    }
    out
}

/// `lcm / part` as a polynomial; `part` must be a sub-multiset of `lcm`.
fn cofactor(lcm: &[(Arc<Polynomial>, u32)], part: &[(Arc<Polynomial>, u32)]) -> Polynomial {
    let mut out = Polynomial::one();
    for (f, e) in lcm {
        let used = part
            .iter()
            .find(|(g, _)| Arc::ptr_eq(g, f) || **g == **f)
            .map_or(0, |p| p.1);
        if *e > used {
            out = &out * &f.pow(e - used);
        }
    }
    out
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.den.is_empty() && other.den.is_empty() {
            return self.num == other.num;
        }
        self.sub(other).is_zero()
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/", self.num)?;
        for (k, (g, e)) in self.den.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "({g})")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}
