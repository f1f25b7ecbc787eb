//! Dressing and Lax operators built from polynomial tau-functions, and the
//! operator-side forms of the hierarchy.
//!
//! Every check compares two operators coefficient by coefficient down to a
//! floor. The dressing operators of a polynomial tau are finite sums, so
//! identities that only involve them are checked with no truncation at all.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::{Polynomial, RationalFunction, Var};
use crate::hirota::{miwa_coefficients, verify_mkp};
use crate::psdo::PseudoDiffOp;
use crate::tau::{wronskian, wronskian_operator, Sign, TauChain, TauFunction};
use crate::verdict::Verdict;

/// `P^±_m = 1 + Σ_{j ≤ -1} p_j ∂^j`.
#[derive(Clone, Debug)]
pub struct DressingOperator {
    pub op: PseudoDiffOp,
    pub level: i64,
    pub sign: Sign,
}

/// `L = ∂ + Σ_{j ≤ -1} u_j ∂^j`.
#[derive(Clone, Debug)]
pub struct LaxOperator {
    pub op: PseudoDiffOp,
    pub level: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenKind {
    Eigen,
    Adjoint,
}

fn d1() -> Var {
    Var::t(1)
}

/// `(∂τ)/τ`.
fn log_derivative(tau: &TauFunction) -> RationalFunction {
    RationalFunction::new(tau.poly().diff(d1()), tau.poly()).expect("tau is nonzero")
}

/// Compares two operators on every order `≥ floor`.
fn compare(lhs: &PseudoDiffOp, rhs: &PseudoDiffOp, floor: i64, what: &str) -> Verdict {
    let (l, r) = (lhs.truncate(floor), rhs.truncate(floor));
    if let Some(f) = l.common_floor(&r) {
        if f > floor {
            return Verdict::fail(format!("{what}: operands are only known down to order {f}"));
        }
    }
    match l.first_mismatch(&r) {
        None => Verdict::pass(),
        Some((k, a, b)) => Verdict::fail(format!("{what}: coefficients of ∂^{k} differ"))
            .with_mismatch(json!({"order": k, "lhs": a.to_json(), "rhs": b.to_json()})),
    }
}

/// The dressing operator read off from the Miwa shift of `τ`:
/// `P^+(t, z) = τ(t - [z^{-1}])/τ(t)` and `P^-(t, -z) = τ(t + [z^{-1}])/τ(t)`.
/// Coefficients vanish below `-deg τ`, so the result is exact and `floor`
/// only bounds what is kept.
pub fn dressing_from_tau(tau: &TauFunction, sign: Sign, floor: i64) -> DressingOperator {
    let shift = match sign {
        Sign::Plus => Sign::Minus,
        Sign::Minus => Sign::Plus,
    };
    let coeffs = miwa_coefficients(tau.poly(), shift);
    let deg = coeffs.len() as i64 - 1;
    let terms = coeffs.into_iter().enumerate().filter_map(|(i, a)| {
        if a.is_zero() {
            return None;
        }
        let a = if sign == Sign::Minus && i % 2 == 1 { -a } else { a };
        Some((-(i as i64), RationalFunction::new(a, tau.poly()).expect("tau is nonzero")))
    });
    let op = PseudoDiffOp::from_coeffs(terms, None);
    let op = if -deg < floor { op.truncate(floor) } else { op };
    DressingOperator {
        op,
        level: tau.level(),
        sign,
    }
}

/// `L^j = P ∘ ∂^j ∘ P^{-1}` down to `floor`, with `P = P^+`.
pub fn lax_power(tau: &TauFunction, j: u32, floor: i64) -> PseudoDiffOp {
    let p = dressing_from_tau(tau, Sign::Plus, i64::MIN).op;
    let j = j as i64;
    let pinv = p.inverse_to(floor - j).expect("dressing operators are monic");
    p.compose_to(&PseudoDiffOp::d_pow(j).compose_to(&pinv, floor), floor)
}

/// `L = P^+ ∘ ∂ ∘ (P^+)^{-1}` down to `floor`.
pub fn lax_from_tau(tau: &TauFunction, floor: i64) -> LaxOperator {
    let op = lax_power(tau, 1, floor);
    assert!(
        op.coeff(1) == RationalFunction::one() && op.coeff(0).is_zero(),
        "Lax operator must be ∂ + O(∂^-1)"
    );
    LaxOperator {
        op,
        level: tau.level(),
    }
}

/// `(P^-)^* ∘ P^+ = 1`.
pub fn adjoint_consistency_check(tau: &TauFunction, floor: i64) -> Verdict {
    let pp = dressing_from_tau(tau, Sign::Plus, i64::MIN).op;
    let pm = dressing_from_tau(tau, Sign::Minus, i64::MIN).op;
    let lhs = pm.adjoint().compose_to(&pp, floor);
    compare(&lhs, &PseudoDiffOp::identity(), floor, "(P^-)* ∘ P^+ = 1")
        .with_checked(vec![(tau.level(), 0, floor)])
}

/// `∂P/∂t_j = -(L^j)_- ∘ P`.
pub fn sato_wilson_check(tau: &TauFunction, j: u32, floor: i64) -> Verdict {
    let p = dressing_from_tau(tau, Sign::Plus, i64::MIN).op;
    let lhs = p.diff_t(j);
    let rhs = lax_power(tau, j, floor).minus().compose_to(&p, floor).neg();
    compare(&lhs, &rhs, floor, &format!("Sato-Wilson equation for t_{j}"))
        .with_checked(vec![(tau.level(), j as i64, floor)])
}

/// `∂L/∂t_j = [(L^j)_+, L]`, with the left side differentiated exactly.
pub fn lax_equation_check(tau: &TauFunction, j: u32, floor: i64) -> Verdict {
    let ji = j as i64;
    let l = lax_from_tau(tau, floor - ji).op;
    let b = lax_power(tau, j, -1).plus();
    let lhs = l.diff_t(j);
    let rhs = b.compose_to(&l, floor).sub(&l.compose_to(&b, floor));
    compare(&lhs, &rhs, floor, &format!("Lax equation for t_{j}"))
        .with_checked(vec![(tau.level(), ji, floor)])
}

/// `v = ∂ log(τ_ℓ / τ_{ℓ+1})`.
pub fn v_from_taus(tau_l: &TauFunction, tau_l1: &TauFunction) -> RationalFunction {
    log_derivative(tau_l).sub(&log_derivative(tau_l1))
}

fn d_plus(v: &RationalFunction) -> PseudoDiffOp {
    PseudoDiffOp::d().add(&PseudoDiffOp::scalar(v.clone()))
}

/// `P_{ℓ+1} ∘ ∂ = (∂ + v_ℓ) ∘ P_ℓ` exactly, and the induced
/// `L_{ℓ+1} = (∂ + v_ℓ) ∘ L_ℓ ∘ (∂ + v_ℓ)^{-1}` down to `floor`.
pub fn intertwining_check(tau_l: &TauFunction, tau_l1: &TauFunction, floor: i64) -> Verdict {
    let checked = vec![(tau_l.level(), tau_l1.level(), floor)];
    let p0 = dressing_from_tau(tau_l, Sign::Plus, i64::MIN).op;
    let p1 = dressing_from_tau(tau_l1, Sign::Plus, i64::MIN).op;
    let g = d_plus(&v_from_taus(tau_l, tau_l1));
    let lhs = p1.compose(&PseudoDiffOp::d());
    let rhs = g.compose(&p0);
    let first = compare(&lhs, &rhs, i64::MIN, "P_(l+1) ∘ ∂ = (∂ + v) ∘ P_l");
    if !first.pass {
        return first.with_checked(checked);
    }
    let l0 = lax_from_tau(tau_l, floor - 2).op;
    let l1 = lax_from_tau(tau_l1, floor).op;
    let ginv = g.inverse_to(floor - 2).expect("∂ + v is monic");
    let conj = g.compose_to(&l0.compose_to(&ginv, floor - 1), floor);
    compare(&l1, &conj, floor, "L_(l+1) = (∂ + v) L_l (∂ + v)^-1").with_checked(checked)
}

/// `∂φ/∂t_j = (L^j)_+(φ)`, or `∂φ/∂t_j = -((L^j)_+)^*(φ)` for adjoint
/// eigenfunctions. `dphi` is `∂φ/∂t_j`.
pub fn eigenfunction_check(
    phi: &RationalFunction,
    lax: &LaxOperator,
    j: u32,
    kind: EigenKind,
    dphi: &RationalFunction,
) -> Result<Verdict> {
    let lj = lax.op.power_to(j, -1);
    if lj.floor().is_some_and(|f| f > 0) {
        return Err(Error::FloorTooHigh {
            floor: lj.floor().unwrap(),
        });
    }
    let b = lj.plus();
    let rhs = match kind {
        EigenKind::Eigen => b.apply(phi)?,
        EigenKind::Adjoint => b.adjoint().apply(phi)?.neg(),
    };
    let checked = vec![(lax.level, j as i64, 0)];
    Ok(if rhs == *dphi {
        Verdict::pass().with_checked(checked)
    } else {
        let what = match kind {
            EigenKind::Eigen => "eigenfunction",
            EigenKind::Adjoint => "adjoint eigenfunction",
        };
        Verdict::fail(format!("{what} equation fails for t_{j}"))
            .with_mismatch(json!({"lhs": dphi.to_json(), "rhs": rhs.to_json()}))
            .with_checked(checked)
    })
}

/// `τ_{k+1}/τ_k` is an eigenfunction of `L_k` and `τ_k/τ_{k+1}` an adjoint
/// eigenfunction of `L_{k+1}`, for every flow listed.
pub fn ratio_eigenfunction_check(
    tau_k: &TauFunction,
    tau_k1: &TauFunction,
    flows: &[u32],
) -> Verdict {
    let pre = verify_mkp(tau_k1, tau_k, 1);
    if !pre.pass {
        let mut v = Verdict::fail("precondition: the pair fails the d = 1 bilinear identity");
        v.witness = pre.witness;
        return v;
    }
    let jmax = flows.iter().copied().max().unwrap_or(1) as i64;
    let l0 = lax_from_tau(tau_k, -jmax - 1);
    let l1 = lax_from_tau(tau_k1, -jmax - 1);
    let phi = RationalFunction::new(tau_k1.poly().clone(), tau_k.poly()).expect("tau is nonzero");
    let psi = phi.recip().expect("tau is nonzero");
    let mut out = Vec::new();
    for &j in flows {
        let a = eigenfunction_check(&phi, &l0, j, EigenKind::Eigen, &phi.diff(Var::t(j)));
        let b = eigenfunction_check(&psi, &l1, j, EigenKind::Adjoint, &psi.diff(Var::t(j)));
        for v in [a, b] {
            out.push(v.unwrap_or_else(|e| Verdict::fail(e.to_string())));
        }
    }
    Verdict::all(out)
}

/// Crum's identity `W_{i+1} ∂ ∘ W_i(∂) - (∂W_{i+1}) W_i(∂) = W_i W_{i+1}(∂)`
/// for every prefix of `funcs`, where `W_i` is the Wronskian of the first
/// `i` functions and `W_0(∂) = 1`.
pub fn crum_check(funcs: &[RationalFunction]) -> Result<Verdict> {
    let mut out = Vec::new();
    let mut w_prev = RationalFunction::one();
    let mut op_prev = PseudoDiffOp::identity();
    for i in 0..funcs.len() {
        let w_next = wronskian(&funcs[..=i]);
        if w_next.is_zero() {
            return Err(Error::SingularWronskian);
        }
        let op_next = wronskian_operator(&funcs[..=i])?;
        let lhs = PseudoDiffOp::d()
            .compose(&op_prev)
            .mul_left(&w_next)
            .sub(&op_prev.mul_left(&w_next.diff(d1())));
        let rhs = op_next.mul_left(&w_prev);
        out.push(compare(&lhs, &rhs, i64::MIN, &format!("Crum identity for i = {i}")).with_checked(vec![(i as i64, 0, 0)]));
        w_prev = w_next;
        op_prev = op_next;
    }
    Ok(Verdict::all(out))
}

/// `L_i = M_i ∘ ∂ ∘ M_i^{-1}` with `M_i = W_i(∂)/W_i`, for the chain
/// `τ_0 = 1`, `τ_i = W(q_0, ..., q_{i-1})`.
pub fn conjugation_check(funcs: &[Polynomial], floor: i64) -> Result<Verdict> {
    let mut out = Vec::new();
    for i in 1..=funcs.len() {
        let fs: Vec<RationalFunction> = funcs[..i].iter().cloned().map(Into::into).collect();
        let w = wronskian(&fs);
        let m = wronskian_operator(&fs)?.mul_left(&w.recip()?);
        let tau = TauFunction::new(w.as_polynomial().cloned().ok_or(Error::SingularWronskian)?, i as i64)?;
        let li = lax_from_tau(&tau, floor).op;
        let k = i as i64;
        let minv = m.inverse_to(floor - 2 * k)?;
        let conj = m.compose_to(&PseudoDiffOp::d().compose_to(&minv, floor - k), floor);
        out.push(compare(&li, &conj, floor, &format!("L_{i} = M_{i} ∂ M_{i}^-1")).with_checked(vec![(k, 1, floor)]));
    }
    Ok(Verdict::all(out))
}

/// `v_0, ..., v_{n-1}` for a chain closed periodically (`τ_n ∝ τ_0`).
pub fn chain_vs(chain: &TauChain) -> Vec<RationalFunction> {
    let taus: Vec<&TauFunction> = chain.iter().collect();
    let n = taus.len();
    (0..n).map(|i| v_from_taus(taus[i], taus[(i + 1) % n])).collect()
}

/// `𝓛_i = (∂ + v_{i-1}) ∘ ... ∘ (∂ + v_0) ∘ (∂ + v_{n-1}) ∘ ... ∘ (∂ + v_i)`.
pub fn factorized_operator(vs: &[RationalFunction], i: usize) -> PseudoDiffOp {
    let n = vs.len();
    let mut op = PseudoDiffOp::identity();
    for s in 0..n {
        op = d_plus(&vs[(i + s) % n]).compose(&op);
    }
    op
}

/// The n-MKdV structure of an n-KdV chain: `Σ v_i = 0`, each `𝓛_i` is a
/// differential operator equal to `L_i^n`, and the `v_i` do not depend on
/// `t_n, t_{2n}, ...`.
pub fn nkdv_factorized_check(chain: &TauChain, n: u32, floor: i64) -> Verdict {
    if chain.len() != n as usize {
        return Verdict::fail(format!("chain has {} taus but n = {n}", chain.len()));
    }
    let vs = chain_vs(chain);
    let sum = vs.iter().fold(RationalFunction::zero(), |a, v| a.add(v));
    if !sum.is_zero() {
        return Verdict::fail("Σ v_i is not zero").with_mismatch(json!({"sum": sum.to_json()}));
    }
    let max_deg = chain
        .iter()
        .map(|t| t.poly().weighted_degree().unwrap_or(0))
        .max()
        .unwrap_or(0);
    for (i, v) in vs.iter().enumerate() {
        for jn in (n..=max_deg.max(n)).step_by(n as usize) {
            if !v.diff(Var::t(jn)).is_zero() {
                return Verdict::fail(format!("v_{i} depends on t_{jn}"));
            }
        }
    }
    let mut out = Vec::new();
    for (i, tau) in chain.iter().enumerate() {
        let li = factorized_operator(&vs, i);
        if !li.is_differential() || !li.is_exact() {
            return Verdict::fail(format!("𝓛_{i} is not a differential operator"));
        }
        let ln = lax_power(tau, n, floor);
        out.push(
            compare(&ln, &li, floor, &format!("L_{i}^{n} = 𝓛_{i}")).with_checked(vec![(i as i64, n as i64, floor)]),
        );
    }
    Verdict::all(out)
}

/// `(𝓛^{j/n})_+` for a monic differential operator of order `n`.
fn fractional_plus(l: &PseudoDiffOp, n: u32, j: u32) -> Result<PseudoDiffOp> {
    let root = l.nth_root_to(n, -(j as i64) - 1)?;
    Ok(root.power_to(j, -1).plus())
}

/// `∂v_i/∂t_j = (𝓛_{i+1}^{j/n})_+ ∘ (∂ + v_i) - (∂ + v_i) ∘ (𝓛_i^{j/n})_+`.
pub fn mkdv_flow_check(chain: &TauChain, n: u32, i: usize, j: u32) -> Result<Verdict> {
    if chain.len() != n as usize || i >= n as usize {
        return Err(Error::InvalidArgument(format!(
            "need a chain of length {n} and a row below {n}"
        )));
    }
    let vs = chain_vs(chain);
    let g = d_plus(&vs[i]);
    let bi = fractional_plus(&factorized_operator(&vs, i), n, j)?;
    let bi1 = fractional_plus(&factorized_operator(&vs, (i + 1) % n as usize), n, j)?;
    let rhs = bi1.compose(&g).sub(&g.compose(&bi));
    let lhs = PseudoDiffOp::scalar(vs[i].diff(Var::t(j)));
    Ok(compare(&lhs, &rhs, i64::MIN, &format!("flow t_{j} of v_{i}"))
        .with_checked(vec![(i as i64, j as i64, 0)]))
}

/// Dumps an operator in the exchange format used by verdicts.
pub fn operator_dump(op: &PseudoDiffOp) -> Value {
    op.to_json()
}
