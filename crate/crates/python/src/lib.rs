//! Python bindings for `polytau`.
//!
//! Polynomials cross the boundary as `Polynomial` objects (or their canonical
//! JSON), rationals as `"p/q"` strings, ints or `fractions.Fraction`, and
//! shift tables as `{index: rational}` dicts.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use polytau::exactalg::{format_rational, parse_rational, Rational};
use polytau::tau::TauChain;
use polytau::{Error, ShiftTable, TauFunction, Var};

fn err(e: Error) -> PyErr {
    match e {
        Error::DivisionByZero => PyZeroDivisionError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&obj.str()?.to_cow()?).map_err(err)
}

fn shift_table(obj: Option<&Bound<'_, PyAny>>) -> PyResult<ShiftTable> {
    let mut table = ShiftTable::new();
    let Some(obj) = obj else {
        return Ok(table);
    };
    if obj.is_none() {
        return Ok(table);
    }
    for (k, v) in obj.extract::<BTreeMap<u32, Bound<'_, PyAny>>>()? {
        if k == 0 {
            return Err(PyValueError::new_err("shift index must be >= 1"));
        }
        table.set(k, rational(&v)?);
    }
    Ok(table)
}

fn shift_tables(objs: Option<Vec<Bound<'_, PyAny>>>, len: usize) -> PyResult<Vec<ShiftTable>> {
    match objs {
        None => Ok(vec![ShiftTable::new(); len]),
        Some(v) => v.iter().map(|o| shift_table(Some(o))).collect(),
    }
}

fn shifts_to_py(s: &ShiftTable) -> BTreeMap<u32, String> {
    s.iter().map(|(i, c)| (i, format_rational(c))).collect()
}

fn partition(s: &str) -> PyResult<polytau::Partition> {
    s.parse().map_err(err)
}

#[pymodule]
mod polytau_py {
    use super::*;

    use polytau::hirota;
    use polytau::lax;
    use polytau::schur;
    use polytau::tau::{self, MkpCase, NkdvData};

    /// Exact sparse polynomial in `t_1, t_2, ...` with rational coefficients.
    #[pyclass(name = "Polynomial", frozen, eq, from_py_object)]
    #[derive(Clone, PartialEq)]
    pub struct Polynomial(pub polytau::Polynomial);

    #[pymethods]
    impl Polynomial {
        #[new]
        #[pyo3(signature = (value = None))]
        fn new(value: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
            match value {
                None => Ok(Polynomial(polytau::Polynomial::zero())),
                Some(v) => Ok(Polynomial(polytau::Polynomial::constant(rational(v)?))),
            }
        }

        /// The variable `t_i`.
        #[staticmethod]
        fn t(i: u32) -> PyResult<Self> {
            if i == 0 {
                return Err(PyValueError::new_err("variable index must be >= 1"));
            }
            Ok(Polynomial(polytau::Polynomial::t(i)))
        }

        #[staticmethod]
        fn from_json(s: &str) -> PyResult<Self> {
            polytau::Polynomial::from_json_str(s).map(Polynomial).map_err(err)
        }

        fn to_json(&self) -> String {
            self.0.to_json_string()
        }

        /// `∂/∂t_i`.
        fn diff(&self, i: u32) -> Self {
            Polynomial(self.0.diff(Var::t(i)))
        }

        /// Substitutes `t_i -> t_i + c_i`.
        fn shift(&self, shifts: &Bound<'_, PyAny>) -> PyResult<Self> {
            Ok(Polynomial(self.0.shift(&shift_table(Some(shifts))?, polytau::Family::T)))
        }

        fn weighted_degree(&self) -> Option<u32> {
            self.0.weighted_degree()
        }

        /// `(coefficient, {variable: exponent})` pairs in canonical order.
        fn terms(&self) -> Vec<(String, BTreeMap<String, u32>)> {
            self.0
                .iter()
                .map(|(m, c)| {
                    let exps = m.exps().iter().map(|(v, e)| (v.to_string(), *e)).collect();
                    (format_rational(c), exps)
                })
                .collect()
        }

        fn is_zero(&self) -> bool {
            self.0.is_zero()
        }

        fn __len__(&self) -> usize {
            self.0.len()
        }

        fn __add__(&self, other: &Self) -> Self {
            Polynomial(&self.0 + &other.0)
        }

        fn __sub__(&self, other: &Self) -> Self {
            Polynomial(&self.0 - &other.0)
        }

        fn __mul__(&self, other: &Self) -> Self {
            Polynomial(&self.0 * &other.0)
        }

        fn __neg__(&self) -> Self {
            Polynomial(-&self.0)
        }

        fn __pow__(&self, e: u32, _modulo: Option<u32>) -> Self {
            Polynomial(self.0.pow(e))
        }

        fn __str__(&self) -> String {
            self.0.to_string()
        }

        fn __repr__(&self) -> String {
            format!("Polynomial({})", self.0)
        }
    }

    /// Outcome of a verification: truthy when the identity holds.
    #[pyclass(name = "Verdict", frozen)]
    pub struct Verdict(pub polytau::Verdict);

    #[pymethods]
    impl Verdict {
        #[getter]
        fn passed(&self) -> bool {
            self.0.pass
        }

        /// `(monomial, coefficient)` of a nonzero residue term, if any.
        #[getter]
        fn witness(&self) -> Option<(String, String)> {
            self.0
                .witness
                .as_ref()
                .map(|w| (w.monomial.to_string(), format_rational(&w.coeff)))
        }

        #[getter]
        fn checked(&self) -> Vec<(i64, i64, i64)> {
            self.0.checked.clone()
        }

        #[getter]
        fn detail(&self) -> Option<String> {
            self.0.detail.clone()
        }

        fn to_json(&self) -> String {
            self.0.to_json().to_string()
        }

        fn __bool__(&self) -> bool {
            self.0.pass
        }

        fn __repr__(&self) -> String {
            format!("Verdict({})", self.0)
        }
    }

    /// A pseudodifferential operator in `∂ = ∂/∂t_1`, known down to `floor`.
    #[pyclass(name = "PseudoDiffOp", frozen)]
    pub struct PseudoDiffOp(pub polytau::PseudoDiffOp);

    #[pymethods]
    impl PseudoDiffOp {
        #[getter]
        fn floor(&self) -> Option<i64> {
            self.0.floor()
        }

        #[getter]
        fn max_order(&self) -> Option<i64> {
            self.0.max_order()
        }

        /// Coefficient of `∂^k` as `(numerator, denominator)`.
        fn coeff(&self, k: i64) -> (Polynomial, Polynomial) {
            let c = self.0.coeff(k);
            (Polynomial(c.numerator().clone()), Polynomial(c.denominator()))
        }

        fn is_differential(&self) -> bool {
            self.0.is_differential()
        }

        fn to_json(&self) -> String {
            self.0.to_json().to_string()
        }

        fn __str__(&self) -> String {
            self.0.to_string()
        }

        fn __repr__(&self) -> String {
            format!("PseudoDiffOp({})", self.0)
        }
    }

    fn tau_of(p: &Polynomial, level: i64) -> PyResult<TauFunction> {
        TauFunction::new(p.0.clone(), level).map_err(err)
    }

    fn chain_of(polys: &[Polynomial]) -> PyResult<TauChain> {
        TauChain::from_polys(0, polys.iter().map(|p| p.0.clone()).collect()).map_err(err)
    }

    /// Schur polynomial of a partition such as `"2,1"`.
    #[pyfunction]
    fn schur_polynomial(lambda: &str) -> PyResult<Polynomial> {
        Ok(Polynomial(schur::schur_of_partition(&partition(lambda)?)))
    }

    /// Elementary Schur polynomial `s_j(t + c)`.
    #[pyfunction]
    #[pyo3(signature = (j, shifts = None))]
    fn elementary_schur(j: i64, shifts: Option<&Bound<'_, PyAny>>) -> PyResult<Polynomial> {
        Ok(Polynomial(schur::shifted_elementary_schur(j, &shift_table(shifts)?)))
    }

    /// KP tau-function `det(s_{λ_i + j - i}(t + c_i))`, one shift table per part.
    #[pyfunction]
    #[pyo3(signature = (lambda, shifts = None))]
    fn tau_kp(lambda: &str, shifts: Option<Vec<Bound<'_, PyAny>>>) -> PyResult<Polynomial> {
        let l = partition(lambda)?;
        let s = shift_tables(shifts, l.len())?;
        Ok(Polynomial(tau::tau_kp(&l, &s).map_err(err)?.poly().clone()))
    }

    /// Successor in an MKP chain. `case` is `"prepend"`, `"insert"` or
    /// `"decrement"`; returns `(partition, shifts, tau)`.
    #[pyfunction]
    #[pyo3(signature = (lambda, shifts, case, mu = None, position = None, d = None))]
    fn mkp_successor(
        lambda: &str,
        shifts: Option<Vec<Bound<'_, PyAny>>>,
        case: &str,
        mu: Option<u32>,
        position: Option<usize>,
        d: Option<&Bound<'_, PyAny>>,
    ) -> PyResult<(String, Vec<BTreeMap<u32, String>>, Polynomial)> {
        let l = partition(lambda)?;
        let s = shift_tables(shifts, l.len())?;
        let need_mu = || mu.ok_or_else(|| PyValueError::new_err("this case needs mu"));
        let case = match case {
            "prepend" => MkpCase::Prepend { mu: need_mu()? },
            "insert" => MkpCase::Insert {
                i: position.ok_or_else(|| PyValueError::new_err("insert needs position"))?,
                mu: need_mu()?,
            },
            "decrement" => MkpCase::Decrement,
            other => return Err(PyValueError::new_err(format!("unknown case {other:?}"))),
        };
        let (l2, s2) = tau::mkp_successor(&l, &s, case, &shift_table(d)?).map_err(err)?;
        let t = tau::tau_kp(&l2, &s2).map_err(err)?;
        Ok((l2.to_string(), s2.iter().map(shifts_to_py).collect(), Polynomial(t.poly().clone())))
    }

    #[pyfunction]
    fn is_n_periodic(lambda: &str, n: u32) -> PyResult<bool> {
        Ok(tau::is_n_periodic(&partition(lambda)?, n))
    }

    #[pyfunction]
    fn enumerate_n_periodic(n: u32, max_weight: u32) -> Vec<String> {
        tau::enumerate_n_periodic(n, max_weight)
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    /// n-KdV tau-function of an n-periodic partition, with shift tables keyed
    /// by residue class.
    #[pyfunction]
    #[pyo3(signature = (lambda, n, class_shifts = None))]
    fn tau_nkdv(
        lambda: &str,
        n: u32,
        class_shifts: Option<BTreeMap<u32, Bound<'_, PyAny>>>,
    ) -> PyResult<Polynomial> {
        let mut classes = BTreeMap::new();
        for (k, v) in class_shifts.unwrap_or_default() {
            classes.insert(k, shift_table(Some(&v))?);
        }
        let t = tau::tau_nkdv(&partition(lambda)?, n, &classes).map_err(err)?;
        Ok(Polynomial(t.poly().clone()))
    }

    /// The chain `τ_0..τ_{n-1}` built from a permutation, multiplicities and
    /// shifts, plus the scalar `κ` with `τ_n = κ τ_0`.
    #[pyfunction]
    #[pyo3(signature = (n, perm, m, shifts = None))]
    fn tau_nkdv_data(
        n: u32,
        perm: Vec<u32>,
        m: Vec<u32>,
        shifts: Option<Vec<Bound<'_, PyAny>>>,
    ) -> PyResult<(Vec<Polynomial>, String)> {
        let data = NkdvData {
            n,
            perm,
            m,
            shifts: shift_tables(shifts, n as usize)?,
        };
        let built = tau::tau_nkdv_from_data(&data).map_err(err)?;
        let chain = built.chain.iter().map(|t| Polynomial(t.poly().clone())).collect();
        Ok((chain, format_rational(&built.scalar)))
    }

    /// Bilinear identity `Res z^d τ_k(t - [z^-1]) τ_l(y + [z^-1]) e^{(t-y)·z} = 0`.
    #[pyfunction]
    #[pyo3(signature = (tau_k, tau_l, d = 0))]
    fn verify_mkp(tau_k: &Polynomial, tau_l: &Polynomial, d: i64) -> PyResult<Verdict> {
        Ok(Verdict(hirota::verify_mkp(&tau_of(tau_k, 0)?, &tau_of(tau_l, 0)?, d)))
    }

    /// The first MKP identity for `(τ_k, τ_{k+1})`, up to one scalar.
    #[pyfunction]
    fn verify_first_mkp(tau_k: &Polynomial, tau_k1: &Polynomial) -> PyResult<Verdict> {
        Ok(Verdict(hirota::verify_first_mkp(&tau_of(tau_k, 0)?, &tau_of(tau_k1, 1)?)))
    }

    #[pyfunction]
    fn verify_nkdv(chain: Vec<Polynomial>, n: u32) -> PyResult<Verdict> {
        Ok(Verdict(hirota::verify_nkdv(&chain_of(&chain)?, n)))
    }

    /// `L = P ∂ P^-1` from the dressing operator of `τ`.
    #[pyfunction]
    #[pyo3(signature = (tau, floor = -6))]
    fn lax_operator(tau: &Polynomial, floor: i64) -> PyResult<PseudoDiffOp> {
        Ok(PseudoDiffOp(lax::lax_from_tau(&tau_of(tau, 0)?, floor).op))
    }

    #[pyfunction]
    #[pyo3(signature = (tau, j, floor = -6))]
    fn sato_wilson_check(tau: &Polynomial, j: u32, floor: i64) -> PyResult<Verdict> {
        Ok(Verdict(lax::sato_wilson_check(&tau_of(tau, 0)?, j, floor)))
    }

    #[pyfunction]
    #[pyo3(signature = (tau, j, floor = -6))]
    fn lax_equation_check(tau: &Polynomial, j: u32, floor: i64) -> PyResult<Verdict> {
        Ok(Verdict(lax::lax_equation_check(&tau_of(tau, 0)?, j, floor)))
    }

    #[pyfunction]
    #[pyo3(signature = (tau_l, tau_l1, floor = -6))]
    fn intertwining_check(tau_l: &Polynomial, tau_l1: &Polynomial, floor: i64) -> PyResult<Verdict> {
        Ok(Verdict(lax::intertwining_check(&tau_of(tau_l, 0)?, &tau_of(tau_l1, 1)?, floor)))
    }

    /// Crum's identity for the Wronskians of every prefix of `funcs`.
    #[pyfunction]
    fn crum_check(funcs: Vec<Polynomial>) -> PyResult<Verdict> {
        let f: Vec<_> = funcs.into_iter().map(|p| p.0.into()).collect();
        lax::crum_check(&f).map(Verdict).map_err(err)
    }

    /// Flow `t_flow` of `v_row` for an n-KdV chain.
    #[pyfunction]
    fn mkdv_flow_check(chain: Vec<Polynomial>, n: u32, row: usize, flow: u32) -> PyResult<Verdict> {
        lax::mkdv_flow_check(&chain_of(&chain)?, n, row, flow)
            .map(Verdict)
            .map_err(err)
    }

    /// Runs the command-line front end; returns `(exit_code, output)`.
    #[pyfunction]
    fn run_cli(args: Vec<String>) -> (i32, String) {
        polytau::cli::run(std::iter::once("polytau".to_string()).chain(args))
    }
}
