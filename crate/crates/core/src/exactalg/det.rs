use std::collections::HashMap;

use super::polynomial::Polynomial;
use super::ratfun::RationalFunction;

/// Minimal commutative ring interface used by the determinant routines.
pub trait Ring: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl Ring for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Ring for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        RationalFunction::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RationalFunction::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RationalFunction::mul(self, other)
    }
}

/// Determinant by Laplace expansion along rows, memoized on the set of
/// columns still available. Works over any [`Ring`]; cost is `O(n 2^n)`
/// ring operations.
pub fn det_cofactor<R: Ring>(m: &[Vec<R>]) -> R {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    assert!(n < 64, "matrix too large for cofactor expansion");
    if n == 0 {
        return R::one();
    }
    let mut memo: HashMap<u64, R> = HashMap::new();
    expand(m, 0, (1u64 << n) - 1, &mut memo)
}

fn expand<R: Ring>(m: &[Vec<R>], row: usize, cols: u64, memo: &mut HashMap<u64, R>) -> R {
    if row == m.len() {
        return R::one();
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut acc = R::zero();
    let mut sign_neg = false;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &m[row][c];
        if !entry.is_zero() {
            let minor = expand(m, row + 1, cols & !(1 << c), memo);
            let term = entry.mul(&minor);
            acc = if sign_neg { acc.sub(&term) } else { acc.add(&term) };
        }
        sign_neg = !sign_neg;
    }
    memo.insert(cols, acc.clone());
    acc
}

/// Fraction-free (Bareiss) elimination over polynomials with row pivoting.
pub fn det_bareiss(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return Polynomial::one();
    }
    let mut a: Vec<Vec<Polynomial>> = m.to_vec();
    let mut prev = Polynomial::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Polynomial::zero();
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss step divides exactly");
            }
            a[i][k] = Polynomial::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Determinant of a polynomial matrix.
pub fn det_poly(m: &[Vec<Polynomial>]) -> Polynomial {
    det_bareiss(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn p(i: u32) -> Polynomial {
        Polynomial::t(i)
    }

    #[test]
    fn small_determinants_agree() {
        let m = vec![
            vec![p(1), p(2), Polynomial::from_int(3)],
            vec![p(2).pow(2), Polynomial::zero(), p(1)],
            vec![Polynomial::one(), &p(1) + &p(3), p(2).scale(&rat(1, 2))],
        ];
        let a = det_bareiss(&m);
        let b = det_cofactor(&m);
        assert_eq!(a, b);
        assert!(!a.is_zero());
    }

    #[test]
    fn needs_pivoting() {
        let m = vec![
            vec![Polynomial::zero(), p(1)],
            vec![p(2), Polynomial::one()],
        ];
        assert_eq!(det_bareiss(&m), -(&p(1) * &p(2)));
        assert_eq!(det_cofactor(&m), -(&p(1) * &p(2)));
    }

    #[test]
    fn singular() {
        let m = vec![vec![p(1), p(2)], vec![p(1).scale(&rat(2, 1)), p(2).scale(&rat(2, 1))]];
        assert!(det_bareiss(&m).is_zero());
    }
}
