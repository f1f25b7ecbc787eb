//! Schur polynomials in the time variables.
//!
//! The elementary Schur polynomials are the coefficients of
//! `exp(Σ t_i z^i) = Σ s_j(t) z^j`; partition Schur polynomials come from the
//! Jacobi–Trudi determinant `det(s_{λ_i + j - i})`.

use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{det_poly, Family, Polynomial, Rational, ShiftTable};

/// A weakly decreasing list of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!(
                "parts must be positive: {parts:?}"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts must be weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// All partitions of exactly `n`, in reverse lexicographic order.
    pub fn all_of_weight(n: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions of weight at most `max_weight`, by weight.
    pub fn all_up_to_weight(max_weight: u32) -> Vec<Partition> {
        (0..=max_weight).flat_map(Partition::all_of_weight).collect()
    }

    /// `(k, k-1, ..., 1)`.
    pub fn staircase(k: u32) -> Partition {
        Partition {
            parts: (1..=k).rev().collect(),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"3,2,1"`; the empty string, `"()"` and `"0"` give the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        if s.is_empty() || s == "0" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidPartition(format!("bad part {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

fn schur_cache() -> &'static Mutex<Vec<Polynomial>> {
    static CACHE: OnceLock<Mutex<Vec<Polynomial>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Polynomial::one()]))
}

/// `s_j(t)`; zero for `j < 0`.
pub fn elementary_schur(j: i64) -> Polynomial {
    if j < 0 {
        return Polynomial::zero();
    }
    let j = j as usize;
    let mut cache = schur_cache().lock().unwrap_or_else(|e| e.into_inner());
    while cache.len() <= j {
        // k s_k = Σ_{i=1..k} i t_i s_{k-i}
        let k = cache.len();
        let mut acc = Polynomial::zero();
        for i in 1..=k {
            let term = &cache[k - i] * &Polynomial::t(i as u32);
            acc += &term.scale(&Rational::from_integer(BigInt::from(i)));
        }
        cache.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(k))));
    }
    cache[j].clone()
}

/// `s_j(t + c)`.
pub fn shifted_elementary_schur(j: i64, c: &ShiftTable) -> Polynomial {
    elementary_schur(j).shift(c, Family::T)
}

/// Values `s_0(c), ..., s_n(c)` for a constant vector `c`.
pub fn elementary_schur_values(c: &ShiftTable, n: usize) -> Vec<Rational> {
    let mut s = vec![Rational::one()];
    for k in 1..=n {
        let mut acc = Rational::zero();
        for i in 1..=k {
            let ci = c.get(i as u32);
            if !ci.is_zero() {
                acc += ci * Rational::from_integer(BigInt::from(i)) * &s[k - i];
            }
        }
        s.push(acc / Rational::from_integer(BigInt::from(k)));
    }
    s
}

/// Jacobi–Trudi `s_λ(t)`; the empty partition gives 1.
pub fn schur_of_partition(lambda: &Partition) -> Polynomial {
    let shifts = vec![ShiftTable::new(); lambda.len()];
    shifted_schur_tau(lambda, &shifts)
}

/// `det(s_{λ_i + j - i}(t + c_i))`, one shift table per row.
pub fn shifted_schur_tau(lambda: &Partition, shifts: &[ShiftTable]) -> Polynomial {
    assert_eq!(
        lambda.len(),
        shifts.len(),
        "one shift table per part is required"
    );
    let k = lambda.len();
    let m: Vec<Vec<Polynomial>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    shifted_elementary_schur(lambda.parts[i] as i64 + j as i64 - i as i64, &shifts[i])
                })
                .collect()
        })
        .collect();
    if k == 0 {
        return Polynomial::one();
    }
    det_poly(&m)
}

/// Solves `s_j(c) = a_{M-j}` for `1 <= j <= M` by forward substitution.
pub fn constants_by_recursion(a: &[Rational], m: usize) -> ShiftTable {
    assert_eq!(a.len(), m, "expected coefficients a_0..a_(M-1)");
    let mut c = ShiftTable::new();
    let mut s = vec![Rational::one()];
    for j in 1..=m {
        // s_j(c) = c_j + (1/j) Σ_{i<j} i c_i s_{j-i}(c)
        let mut rest = Rational::zero();
        for i in 1..j {
            rest += c.get(i as u32) * Rational::from_integer(BigInt::from(i)) * &s[j - i];
        }
        rest /= Rational::from_integer(BigInt::from(j));
        let cj = &a[m - j] - &rest;
        s.push(a[m - j].clone());
        c.set(j as u32, cj);
    }
    c
}

/// Closed form: `c_k` is the `z^k` coefficient of `log(1 + Σ a_{M-j} z^j)`,
/// expanded over the multiplicity vectors `m_1 + 2 m_2 + ... + k m_k = k`.
pub fn constants_closed_form(a: &[Rational], m: usize) -> ShiftTable {
    assert_eq!(a.len(), m, "expected coefficients a_0..a_(M-1)");
    let b = |j: usize| -> Rational { -a[m - j].clone() };
    let mut c = ShiftTable::new();
    for k in 1..=m {
        let mut total = Rational::zero();
        for mult in multiplicity_vectors(k) {
            // (|m| - 1)! / Π m_j! · Π (-a_{M-j})^{m_j}
            let size: u32 = mult.iter().sum();
            let mut term = Rational::from_integer(factorial(size - 1));
            for (j, &mj) in mult.iter().enumerate() {
                if mj > 0 {
                    term *= num_traits::pow(b(j + 1), mj as usize);
                    term /= Rational::from_integer(factorial(mj));
                }
            }
            total += term;
        }
        c.set(k as u32, -total);
    }
    c
}

/// Both routes, which must agree.
pub fn constants_from_coefficients(a: &[Rational], m: usize) -> ShiftTable {
    let rec = constants_by_recursion(a, m);
    debug_assert_eq!(rec, constants_closed_form(a, m));
    rec
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// All `(m_1, ..., m_k)` with `Σ j m_j = k`.
fn multiplicity_vectors(k: usize) -> Vec<Vec<u32>> {
    Partition::all_of_weight(k as u32)
        .into_iter()
        .map(|p| {
            let mut m = vec![0u32; k];
            for &part in p.parts() {
                m[part as usize - 1] += 1;
            }
            m
        })
        .collect()
}
