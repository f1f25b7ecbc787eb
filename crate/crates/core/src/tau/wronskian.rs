use crate::error::{Error, Result};
use crate::exactalg::{det_cofactor, det_poly, Polynomial, RationalFunction, Var};
use crate::psdo::PseudoDiffOp;

fn t1() -> Var {
    Var::t(1)
}

/// Rows `∂^r f_j`, `r = 0..rows`.
fn derivative_rows<T: Clone>(funcs: &[T], rows: usize, d: impl Fn(&T) -> T) -> Vec<Vec<T>> {
    let mut out = vec![funcs.to_vec()];
    for _ in 1..rows {
        let next = out.last().unwrap().iter().map(&d).collect();
        out.push(next);
    }
    out
}

/// Wronskian of polynomials in `t_1`, by fraction-free elimination.
pub fn wronskian_poly(funcs: &[Polynomial]) -> Polynomial {
    assert!(!funcs.is_empty(), "Wronskian of an empty list");
    det_poly(&derivative_rows(funcs, funcs.len(), |p| p.diff(t1())))
}

/// Wronskian `det(∂^r f_j)`.
pub fn wronskian(funcs: &[RationalFunction]) -> RationalFunction {
    assert!(!funcs.is_empty(), "Wronskian of an empty list");
    if let Some(polys) = funcs
        .iter()
        .map(|f| f.as_polynomial().cloned())
        .collect::<Option<Vec<_>>>()
    {
        return wronskian_poly(&polys).into();
    }
    det_cofactor(&derivative_rows(funcs, funcs.len(), |f| f.diff(t1())))
}

/// The operator `W(∂)`: the `(k+1) × (k+1)` Wronskian whose last column is
/// `1, ∂, ..., ∂^k`, expanded along that column with cofactors on the left.
/// It annihilates every input and has leading coefficient `W(funcs)`.
pub fn wronskian_operator(funcs: &[RationalFunction]) -> Result<PseudoDiffOp> {
    assert!(!funcs.is_empty(), "Wronskian of an empty list");
    let k = funcs.len();
    let rows = derivative_rows(funcs, k + 1, |f| f.diff(t1()));
    if wronskian(funcs).is_zero() {
        return Err(Error::SingularWronskian);
    }
    let polys: Option<Vec<Vec<Polynomial>>> = rows
        .iter()
        .map(|r| r.iter().map(|f| f.as_polynomial().cloned()).collect())
        .collect();
    let mut op = PseudoDiffOp::zero();
    for r in 0..=k {
        let minor = match &polys {
            Some(p) => {
                let m: Vec<Vec<Polynomial>> = (0..=k).filter(|&i| i != r).map(|i| p[i].clone()).collect();
                RationalFunction::from_poly(det_poly(&m))
            }
            None => {
                let m: Vec<Vec<RationalFunction>> =
                    (0..=k).filter(|&i| i != r).map(|i| rows[i].clone()).collect();
                det_cofactor(&m)
            }
        };
        let c = if (r + k) % 2 == 0 { minor } else { minor.neg() };
        op = op.add(&PseudoDiffOp::monomial(c, r as i64));
    }
    Ok(op)
}
