use std::collections::{BTreeMap, BTreeSet};

use super::wronskian::wronskian_poly;
use super::{TauChain, TauFunction};
use crate::error::{Error, Result};
use crate::exactalg::{Polynomial, Rational, ShiftTable, Var};
use crate::schur::{shifted_elementary_schur, shifted_schur_tau, Partition};

/// `V_λ = {λ_1, λ_2 - 1, ..., λ_k - k + 1} ∪ {-k, -k-1, ...}`, stored as the
/// finite head plus the start of the infinite tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicSpectrum {
    head: Vec<i64>,
    tail_start: i64,
}

impl PeriodicSpectrum {
    /// Strictly decreasing shifted parts.
    pub fn head(&self) -> &[i64] {
        &self.head
    }

    pub fn tail_start(&self) -> i64 {
        self.tail_start
    }

    pub fn contains(&self, j: i64) -> bool {
        j <= self.tail_start || self.head.contains(&j)
    }

    /// All elements `>= lo`, decreasing.
    pub fn elements_down_to(&self, lo: i64) -> Vec<i64> {
        let mut out: Vec<i64> = self.head.iter().copied().filter(|&j| j >= lo).collect();
        out.extend((lo..=self.tail_start).rev());
        out
    }
}

pub fn v_lambda(lambda: &Partition) -> PeriodicSpectrum {
    PeriodicSpectrum {
        head: lambda
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &p)| p as i64 - i as i64)
            .collect(),
        tail_start: -(lambda.len() as i64),
    }
}

/// `V_λ - n ⊆ V_λ`; only the head needs checking since the tail is closed.
pub fn is_n_periodic(lambda: &Partition, n: u32) -> bool {
    assert!(n >= 2, "n must be at least 2");
    let v = v_lambda(lambda);
    v.head.iter().all(|&j| v.contains(j - n as i64))
}

pub fn enumerate_n_periodic(n: u32, max_weight: u32) -> Vec<Partition> {
    Partition::all_up_to_weight(max_weight)
        .into_iter()
        .filter(|l| is_n_periodic(l, n))
        .collect()
}

/// Shifted parts `j` whose predecessor `j + n` is not a shifted part.
pub fn u_set(lambda: &Partition, n: u32) -> Vec<i64> {
    let v = v_lambda(lambda);
    let shifted: BTreeSet<i64> = v.head.iter().map(|j| j - n as i64).collect();
    v.head.iter().copied().filter(|j| !shifted.contains(j)).collect()
}

/// Parts `λ_i` whose shifted part lies in [`u_set`].
pub fn lambda_set(lambda: &Partition, n: u32) -> Vec<u32> {
    let u: BTreeSet<i64> = u_set(lambda, n).into_iter().collect();
    lambda
        .parts()
        .iter()
        .enumerate()
        .filter(|(i, &p)| u.contains(&(p as i64 - *i as i64)))
        .map(|(_, &p)| p)
        .collect()
}

/// Number of free constants in the n-KdV family of `λ`.
pub fn nkdv_dimension(lambda: &Partition, n: u32) -> u32 {
    lambda_set(lambda, n).iter().sum()
}

/// Residue class of `j` modulo `n`, written in `1..=n` (class 0 is `n`).
pub fn residue_class(j: i64, n: u32) -> u32 {
    let r = j.rem_euclid(n as i64) as u32;
    if r == 0 {
        n
    } else {
        r
    }
}

/// The n-KdV tau-function `det(s_{λ_i + j - i}(t + c_{class(λ_i - i + 1)}))`.
/// `class_shifts` is keyed by residue class in `1..=n` (`0` is accepted as
/// an alias for `n`); missing classes read as zero shifts.
pub fn tau_nkdv(
    lambda: &Partition,
    n: u32,
    class_shifts: &BTreeMap<u32, ShiftTable>,
) -> Result<TauFunction> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    if !is_n_periodic(lambda, n) {
        return Err(Error::NotPeriodic {
            partition: lambda.to_string(),
            n,
        });
    }
    let mut table: BTreeMap<u32, &ShiftTable> = BTreeMap::new();
    for (&k, c) in class_shifts {
        if k > n {
            return Err(Error::InvalidArgument(format!(
                "residue class {k} is outside 1..={n}"
            )));
        }
        table.insert(if k == 0 { n } else { k }, c);
    }
    let classes: Vec<u32> = v_lambda(lambda)
        .head
        .iter()
        .map(|&j| residue_class(j, n))
        .collect();
    let used: BTreeSet<u32> = classes
        .iter()
        .copied()
        .filter(|c| table.get(c).is_some_and(|t| !t.is_zero()))
        .collect();
    if used.len() as u32 > n - 1 {
        return Err(Error::InvalidArgument(format!(
            "at most {} residue classes may carry shifts",
            n - 1
        )));
    }
    let zero = ShiftTable::new();
    let shifts: Vec<ShiftTable> = classes
        .iter()
        .map(|c| table.get(c).copied().unwrap_or(&zero).clone())
        .collect();
    TauFunction::new(shifted_schur_tau(lambda, &shifts), 0)
}

/// Construction data for an n-MKdV chain: a permutation `j` of `1..=n`,
/// multiplicities `m` and one shift table per index.
#[derive(Clone, Debug)]
pub struct NkdvData {
    pub n: u32,
    pub perm: Vec<u32>,
    pub m: Vec<u32>,
    pub shifts: Vec<ShiftTable>,
}

/// Result of [`tau_nkdv_from_data`]: the chain `τ_0..τ_{n-1}`, the closing
/// `τ_n` and the scalar `κ` with `τ_n = κ τ_0`.
#[derive(Clone, Debug)]
pub struct NkdvChain {
    pub chain: TauChain,
    pub tau_n: TauFunction,
    pub scalar: Rational,
}

impl NkdvData {
    fn validate(&self) -> Result<()> {
        let n = self.n as usize;
        if self.n < 2 {
            return Err(Error::InvalidArgument("n must be at least 2".into()));
        }
        if self.perm.len() != n || self.m.len() != n || self.shifts.len() != n {
            return Err(Error::InvalidArgument(format!(
                "perm, m and shifts must all have length {n}"
            )));
        }
        let set: BTreeSet<u32> = self.perm.iter().copied().collect();
        if set.len() != n || set.iter().any(|&j| j < 1 || j > self.n) {
            return Err(Error::InvalidArgument(format!(
                "{:?} is not a permutation of 1..={n}",
                self.perm
            )));
        }
        if self.m.iter().all(|&m| m == 0) || self.m.iter().all(|&m| m != 0) {
            return Err(Error::DegenerateData(
                "need at least one zero and one nonzero multiplicity".into(),
            ));
        }
        Ok(())
    }

    /// `s_{ℓ n - j_i}(t + c_i)`.
    fn eigenfunction(&self, i: usize, l: u32) -> Polynomial {
        let idx = l as i64 * self.n as i64 - self.perm[i] as i64;
        shifted_elementary_schur(idx, &self.shifts[i])
    }

    /// The functions whose Wronskian is `τ_r`.
    pub fn functions(&self, r: usize) -> Vec<Polynomial> {
        let mut out = Vec::new();
        for i in 0..self.n as usize {
            for l in 1..=self.m[i] {
                out.push(self.eigenfunction(i, l));
            }
        }
        for i in 0..r {
            out.push(self.eigenfunction(i, self.m[i] + 1));
        }
        out
    }
}

pub fn tau_nkdv_from_data(data: &NkdvData) -> Result<NkdvChain> {
    data.validate()?;
    let n = data.n as usize;
    let mut taus = Vec::with_capacity(n);
    let mut tau_n = None;
    for r in 0..=n {
        let funcs = data.functions(r);
        let p = if funcs.is_empty() {
            Polynomial::one()
        } else {
            wronskian_poly(&funcs)
        };
        if p.is_zero() {
            return Err(Error::DegenerateData(format!(
                "the Wronskian for level {r} vanishes identically"
            )));
        }
        let tau = TauFunction::new(p, r as i64)?;
        if r < n {
            taus.push(tau);
        } else {
            tau_n = Some(tau);
        }
    }
    let tau_n = tau_n.unwrap();
    let scalar = tau_n.scalar_ratio(&taus[0]).ok_or_else(|| {
        Error::DegenerateData("τ_n is not a scalar multiple of τ_0".into())
    })?;
    Ok(NkdvChain {
        chain: TauChain::new(taus)?,
        tau_n,
        scalar,
    })
}

/// True when `∂τ/∂t_{jn}` vanishes for every `jn` up to the weighted degree.
pub fn independent_of_multiples(p: &Polynomial, n: u32) -> bool {
    let deg = p.weighted_degree().unwrap_or(0);
    (1..)
        .map(|j| j * n)
        .take_while(|&k| k <= deg.max(n))
        .all(|k| p.diff(Var::t(k)).is_zero())
}
