use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::var::Var;

/// A power product of variables, stored sparsely and sorted by variable.
///
/// Ordering is weighted-graded lexicographic: first by total weight
/// `Σ index·exponent`, ties broken lexicographically on the dense exponent
/// vector (`t_1` most significant, then `t_2`, ..., then the `y` family).
/// This is a monomial order, so leading terms behave under multiplication.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    weight: u32,
    exps: SmallVec<[(Var, u32); 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        if e == 0 {
            return Monomial::one();
        }
        let mut exps = SmallVec::new();
        exps.push((v, e));
        Monomial {
            weight: v.weight() * e,
            exps,
        }
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs; duplicates are
    /// merged and zero exponents dropped.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Self {
        let mut exps: SmallVec<[(Var, u32); 4]> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        exps.sort_by_key(|p| p.0);
        let mut merged: SmallVec<[(Var, u32); 4]> = SmallVec::new();
        for (v, e) in exps {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => merged.push((v, e)),
            }
        }
        let weight = merged.iter().map(|(v, e)| v.weight() * e).sum();
        Monomial {
            weight,
            exps: merged,
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exps(&self) -> &[(Var, u32)] {
        &self.exps
    }

    pub fn exp_of(&self, v: Var) -> u32 {
        self.exps
            .binary_search_by_key(&v, |p| p.0)
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.exps.is_empty() {
            return other.clone();
        }
        if other.exps.is_empty() {
            return self.clone();
        }
        let mut exps = SmallVec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.exps, &other.exps);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    exps.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&a[i..]);
        exps.extend_from_slice(&b[j..]);
        Monomial {
            weight: self.weight + other.weight,
            exps,
        }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.weight > self.weight {
            return None;
        }
        let mut exps = SmallVec::with_capacity(self.exps.len());
        let mut j = 0;
        for &(v, e) in &self.exps {
            if j < other.exps.len() && other.exps[j].0 < v {
                return None;
            }
            if j < other.exps.len() && other.exps[j].0 == v {
                let f = other.exps[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => exps.push((v, e - f)),
                }
            } else {
                exps.push((v, e));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        Some(Monomial {
            weight: self.weight - other.weight,
            exps,
        })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.div(self).is_some()
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(
            self.exps
                .iter()
                .filter_map(|&(v, e)| {
                    let f = other.exp_of(v);
                    (f > 0).then_some((v, e.min(f)))
                }),
        )
    }

    /// Removes one power of `v`, returning the previous exponent.
    pub(crate) fn lower(&self, v: Var) -> Option<(u32, Monomial)> {
        let pos = self.exps.binary_search_by_key(&v, |p| p.0).ok()?;
        let e = self.exps[pos].1;
        let mut exps = self.exps.clone();
        if e == 1 {
            exps.remove(pos);
        } else {
            exps[pos].1 -= 1;
        }
        Some((
            e,
            Monomial {
                weight: self.weight - v.weight(),
                exps,
            },
        ))
    }

    /// Total number of variable factors counted with multiplicity.
    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|p| p.1).sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight.cmp(&other.weight).then_with(|| {
            let (a, b) = (&self.exps, &other.exps);
            let (mut i, mut j) = (0, 0);
            loop {
                match (a.get(i), b.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                        // `va` is absent from `other`
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {
                            if ea != eb {
                                return ea.cmp(&eb);
                            }
                            i += 1;
                            j += 1;
                        }
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_weight_first() {
        let t1_3 = Monomial::var_pow(Var::t(1), 3);
        let t3 = Monomial::var(Var::t(3));
        let t2 = Monomial::var(Var::t(2));
        // same weight: t1^3 > t3 because t1 is the most significant variable
        assert!(t1_3 > t3);
        assert!(t3 > t2);
        assert!(Monomial::one() < t2);
    }

    #[test]
    fn mul_div_roundtrip() {
        let a = Monomial::from_pairs([(Var::t(1), 2), (Var::y(3), 1)]);
        let b = Monomial::from_pairs([(Var::t(2), 1), (Var::t(1), 1)]);
        let ab = a.mul(&b);
        assert_eq!(ab.weight(), a.weight() + b.weight());
        assert_eq!(ab.div(&b), Some(a.clone()));
        assert_eq!(ab.div(&a), Some(b.clone()));
        assert!(a.div(&b).is_none());
    }
}
