//! Polynomial tau-functions: KP taus from shifted Schur determinants, MKP
//! chains by successor moves, n-KdV taus from n-periodic partitions or from
//! eigenfunction data, plus eigenfunctions and Wronskians.

mod periodic;
mod wronskian;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::exactalg::{Family, Polynomial, Rational, RationalFunction, ShiftTable};
use crate::hirota::miwa_coefficients;
use crate::schur::{elementary_schur, shifted_schur_tau, Partition};

pub use periodic::{
    enumerate_n_periodic, independent_of_multiples, is_n_periodic, lambda_set, nkdv_dimension,
    residue_class, tau_nkdv, tau_nkdv_from_data, u_set, v_lambda, NkdvChain, NkdvData,
    PeriodicSpectrum,
};
pub use wronskian::{wronskian, wronskian_operator, wronskian_poly};

/// Choice of `±` in Miwa shifts, wave functions and eigenfunctions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A nonzero polynomial in the `t` variables at a level `m` of a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauFunction {
    poly: Polynomial,
    level: i64,
}

impl TauFunction {
    pub fn new(poly: Polynomial, level: i64) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::ZeroTau);
        }
        if poly.vars().iter().any(|v| v.family != Family::T) {
            return Err(Error::InvalidArgument(
                "tau-functions may only involve t variables".into(),
            ));
        }
        Ok(TauFunction { poly, level })
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn with_level(&self, level: i64) -> Self {
        TauFunction {
            poly: self.poly.clone(),
            level,
        }
    }

    /// Scaled so that the canonically least monomial has coefficient 1.
    pub fn normalized(&self) -> Polynomial {
        let (_, c) = self.poly.trailing_term().expect("tau is nonzero");
        self.poly.scale(&c.recip())
    }

    /// `κ` with `self = κ · other`, if it exists.
    pub fn scalar_ratio(&self, other: &TauFunction) -> Option<Rational> {
        let (m, c) = self.poly.trailing_term()?;
        let d = other.poly.coeff(m);
        if d.is_zero() {
            return None;
        }
        let k = c / &d;
        (other.poly.scale(&k) == self.poly).then_some(k)
    }

    pub fn same_up_to_scalar(&self, other: &TauFunction) -> bool {
        self.scalar_ratio(other).is_some()
    }
}

/// Taus at consecutive levels `(τ_m, τ_{m+1}, ...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauChain {
    taus: Vec<TauFunction>,
}

impl TauChain {
    pub fn new(taus: Vec<TauFunction>) -> Result<Self> {
        if taus.windows(2).any(|w| w[1].level != w[0].level + 1) {
            return Err(Error::InvalidArgument(
                "chain levels must be consecutive".into(),
            ));
        }
        Ok(TauChain { taus })
    }

    /// Chain starting at `level` from plain polynomials.
    pub fn from_polys(level: i64, polys: Vec<Polynomial>) -> Result<Self> {
        let taus = polys
            .into_iter()
            .enumerate()
            .map(|(i, p)| TauFunction::new(p, level + i as i64))
            .collect::<Result<Vec<_>>>()?;
        TauChain::new(taus)
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    /// The `i`-th tau of the chain (not its level).
    pub fn get(&self, i: usize) -> Option<&TauFunction> {
        self.taus.get(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = &TauFunction> {
        self.taus.iter()
    }

    pub fn first_level(&self) -> Option<i64> {
        self.taus.first().map(|t| t.level)
    }

    /// `[{"level": 0, "poly": [...]}, ...]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.taus
                .iter()
                .map(|t| {
                    let mut m = Map::new();
                    m.insert("level".into(), Value::from(t.level));
                    m.insert("poly".into(), t.poly.to_json());
                    Value::Object(m)
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("chain must be a JSON array".into()))?;
        let mut taus = Vec::with_capacity(arr.len());
        for (i, entry) in arr.iter().enumerate() {
            let level = match entry.get("level") {
                None => i as i64,
                Some(l) => l
                    .as_i64()
                    .ok_or_else(|| Error::Parse("level must be an integer".into()))?,
            };
            let poly = entry
                .get("poly")
                .ok_or_else(|| Error::Parse("chain entry is missing \"poly\"".into()))?;
            taus.push(TauFunction::new(Polynomial::from_json(poly)?, level)?);
        }
        taus.sort_by_key(|t| t.level);
        TauChain::new(taus)
    }
}

/// A Laurent polynomial `f(z) = Σ a_i z^i`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentSymbol {
    coeffs: BTreeMap<i64, Rational>,
}

impl LaurentSymbol {
    pub fn new<I: IntoIterator<Item = (i64, Rational)>>(coeffs: I) -> Self {
        let mut s = LaurentSymbol::default();
        for (k, c) in coeffs {
            if !c.is_zero() {
                *s.coeffs.entry(k).or_insert_with(Rational::zero) += c;
            }
        }
        s.coeffs.retain(|_, c| !c.is_zero());
        s
    }

    pub fn monomial(k: i64) -> Self {
        LaurentSymbol::new([(k, Rational::one())])
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// `z^{-M-1} + Σ_{j<M} a_j z^{-j-1}`, whose `τ = 1` eigenfunction is
    /// `s_M + Σ a_j s_j`.
    pub fn from_schur_coefficients(m: usize, a: &[Rational]) -> Self {
        let mut terms = vec![(-(m as i64) - 1, Rational::one())];
        terms.extend(a.iter().enumerate().map(|(j, c)| (-(j as i64) - 1, c.clone())));
        LaurentSymbol::new(terms)
    }
}

/// Level-0 KP tau `det(s_{λ_i + j - i}(t + c_i))`.
pub fn tau_kp(lambda: &Partition, shifts: &[ShiftTable]) -> Result<TauFunction> {
    if shifts.len() != lambda.len() {
        return Err(Error::InvalidArgument(format!(
            "partition {lambda} has {} parts but {} shift tables were given",
            lambda.len(),
            shifts.len()
        )));
    }
    TauFunction::new(shifted_schur_tau(lambda, shifts), 0)
}

/// The three ways of passing from `τ_n` to `τ_{n+1}` in an MKP chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MkpCase {
    /// New first part `μ ≥ λ_1` with constants `d`.
    Prepend { mu: u32 },
    /// Decrement `λ_1..λ_i` and insert `μ` after them, `λ_i > μ ≥ λ_{i+1}`
    /// (1-based `i`, `μ ≥ 1`).
    Insert { i: usize, mu: u32 },
    /// Decrement every part, dropping parts that reach zero.
    Decrement,
}

/// Partition and per-row shifts of the successor tau.
pub fn mkp_successor(
    lambda: &Partition,
    shifts: &[ShiftTable],
    case: MkpCase,
    d: &ShiftTable,
) -> Result<(Partition, Vec<ShiftTable>)> {
    if shifts.len() != lambda.len() {
        return Err(Error::InvalidArgument(
            "one shift table per part is required".into(),
        ));
    }
    let parts = lambda.parts();
    match case {
        MkpCase::Prepend { mu } => {
            if let Some(&l1) = parts.first() {
                if mu < l1 {
                    return Err(Error::CaseViolation(format!(
                        "prepend needs μ ≥ λ_1, got μ = {mu} < {l1}"
                    )));
                }
            }
            if mu == 0 {
                return Err(Error::CaseViolation("prepend needs μ ≥ 1".into()));
            }
            let mut p = vec![mu];
            p.extend_from_slice(parts);
            let mut s = vec![d.clone()];
            s.extend_from_slice(shifts);
            Ok((Partition::new(p)?, s))
        }
        MkpCase::Insert { i, mu } => {
            let k = parts.len();
            if i == 0 || i > k {
                return Err(Error::CaseViolation(format!(
                    "insert position {i} is outside 1..={k}"
                )));
            }
            let next = parts.get(i).copied().unwrap_or(0);
            if !(parts[i - 1] > mu && mu >= next) {
                return Err(Error::CaseViolation(format!(
                    "insert needs λ_i > μ ≥ λ_(i+1), got {} > {mu} ≥ {next}",
                    parts[i - 1]
                )));
            }
            if mu == 0 {
                return Err(Error::CaseViolation(
                    "insert needs μ ≥ 1 (μ = 0 is the decrement case)".into(),
                ));
            }
            let mut p: Vec<u32> = parts[..i].iter().map(|x| x - 1).collect();
            p.push(mu);
            p.extend_from_slice(&parts[i..]);
            let mut s = shifts[..i].to_vec();
            s.push(d.clone());
            s.extend_from_slice(&shifts[i..]);
            Ok((Partition::new(p)?, s))
        }
        MkpCase::Decrement => {
            let (p, s): (Vec<u32>, Vec<ShiftTable>) = parts
                .iter()
                .zip(shifts)
                .filter(|(x, _)| **x > 1)
                .map(|(x, c)| (x - 1, c.clone()))
                .unzip();
            Ok((Partition::new(p)?, s))
        }
    }
}

/// `q^±_f(t) = Res f(z) w^±(t, z) dz` with
/// `w^+ = τ(t - [z^{-1}]) e^{t·z} / τ(t)` and
/// `w^- = τ(t + [z^{-1}]) e^{-t·z} / τ(t)`.
pub fn eigenfunction_from_symbol(
    f: &LaurentSymbol,
    tau: &TauFunction,
    sign: Sign,
) -> RationalFunction {
    // Miwa shift direction: t - [z^{-1}] for the wave function, t + [z^{-1}] for the adjoint
    let shift = match sign {
        Sign::Plus => Sign::Minus,
        Sign::Minus => Sign::Plus,
    };
    let a = miwa_coefficients(tau.poly(), shift);
    let mut num = Polynomial::zero();
    for (i, fi) in f.coeffs() {
        for (aa, ca) in a.iter().enumerate() {
            // z^i · z^{-aa} · z^m with i - aa + m = -1
            let m = aa as i64 - 1 - i;
            if m < 0 || ca.is_zero() {
                continue;
            }
            let mut s = elementary_schur(m);
            if sign == Sign::Minus {
                s = s.map_vars(|v| (v, true));
            }
            num += &(&s * ca).scale(fi);
        }
    }
    RationalFunction::new(num, tau.poly()).expect("tau is nonzero")
}
