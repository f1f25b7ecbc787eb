//! Property tests for the invariants that span several modules.

use std::collections::BTreeMap;

use polytau::exactalg::{det_bareiss, det_cofactor, rat};
use polytau::hirota::{nkdv_triples, verify_first_mkp, verify_mkp, verify_nkdv};
use polytau::lax::{
    chain_vs, conjugation_check, eigenfunction_check, factorized_operator, lax_from_tau,
    lax_power, EigenKind,
};
use polytau::schur::{elementary_schur, shifted_elementary_schur};
use polytau::tau::{
    eigenfunction_from_symbol, enumerate_n_periodic, mkp_successor, tau_kp, tau_nkdv,
    tau_nkdv_from_data, wronskian, wronskian_operator, LaurentSymbol, MkpCase, NkdvData, Sign,
    TauFunction,
};
use polytau::{
    Family, Monomial, Partition, Polynomial, PseudoDiffOp, Rational, RationalFunction, ShiftTable,
    Var,
};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

/// Sparse polynomials in `t_1, t_2, t_3` with small exponents.
fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0u32..=2, 0u32..=2, 0u32..=1), small_rational()), 0..=4).prop_map(|ts| {
        Polynomial::from_terms(ts.into_iter().map(|((a, b, c), r)| {
            let m = Monomial::from_pairs([(Var::t(1), a), (Var::t(2), b), (Var::t(3), c)]);
            (m, r)
        }))
    })
}

fn nonzero_poly() -> impl Strategy<Value = Polynomial> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn shifts(len: u32) -> impl Strategy<Value = ShiftTable> {
    prop::collection::vec(small_rational(), len as usize)
        .prop_map(|v| ShiftTable::from_entries(v.into_iter().enumerate().map(|(i, r)| (i as u32 + 1, r))))
}

fn square(n: usize) -> impl Strategy<Value = Vec<Vec<Polynomial>>> {
    prop::collection::vec(prop::collection::vec(poly(), n), n)
}

fn rf(p: Polynomial) -> RationalFunction {
    p.into()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn shift_round_trip(p in poly(), c in shifts(3)) {
        prop_assert_eq!(p.shift(&c, Family::T).shift(&c.neg(), Family::T), p);
    }

    #[test]
    fn partial_derivatives_commute(p in poly(), i in 1u32..=3, j in 1u32..=3) {
        prop_assert_eq!(p.diff(Var::t(i)).diff(Var::t(j)), p.diff(Var::t(j)).diff(Var::t(i)));
    }

    #[test]
    fn bareiss_matches_cofactor(m in (2usize..=4).prop_flat_map(square)) {
        prop_assert_eq!(det_bareiss(&m), det_cofactor(&m));
    }

    #[test]
    fn rational_function_equality(
        a in poly(), b in nonzero_poly(), c in poly(), d in nonzero_poly(), k in nonzero_poly()
    ) {
        let x = RationalFunction::new(a.clone(), &b).unwrap();
        let y = RationalFunction::new(c, &d).unwrap();
        // the same value written with an extra common factor
        let x2 = RationalFunction::new(&a * &k, &(&b * &k)).unwrap();
        prop_assert_eq!(&x, &x2);
        prop_assert_eq!(x.add(&y), x2.add(&y));
        prop_assert_eq!(x.mul(&y), y.mul(&x2));
        prop_assert_eq!(x.add(&y).sub(&y), x2.clone());
        prop_assert_eq!(x.diff(Var::t(1)), x2.diff(Var::t(1)));
    }

    #[test]
    fn elementary_derivatives(j in 1i64..=10, i in 1u32..=10) {
        prop_assert_eq!(elementary_schur(j).diff(Var::t(i)), elementary_schur(j - i as i64));
    }
}

#[test]
fn elementary_generating_function_inverse() {
    // Σ s_j(t) z^j · Σ s_j(-t) z^j = 1 up to z^N
    let n = 10;
    for k in 0..=n {
        let mut acc = Polynomial::zero();
        for j in 0..=k {
            acc += &(&elementary_schur(j) * &elementary_schur(k - j).map_vars(|v| (v, true)));
        }
        assert_eq!(acc, if k == 0 { Polynomial::one() } else { Polynomial::zero() }, "z^{k}");
    }
}

fn kp_partition() -> impl Strategy<Value = Partition> {
    prop::sample::select(Partition::all_up_to_weight(4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn shifted_taus_are_kp(lambda in kp_partition(), c in prop::collection::vec(shifts(4), 4)) {
        let t = tau_kp(&lambda, &c[..lambda.len()]).unwrap();
        prop_assert!(verify_mkp(&t, &t, 0).pass);
        let l = lax_from_tau(&t, -3).op;
        prop_assert_eq!(l.coeff(1), RationalFunction::one());
        prop_assert!(l.coeff(0).is_zero());
    }

    #[test]
    fn successor_chains_are_mkp(c in shifts(3), d in prop::collection::vec(shifts(3), 3), picks in prop::collection::vec(0usize..3, 3)) {
        let mut lambda: Partition = "2,1".parse().unwrap();
        let mut rows = vec![c.clone(), c];
        let mut prev = tau_kp(&lambda, &rows).unwrap();
        for (level, (pick, d)) in picks.into_iter().zip(&d).enumerate() {
            let first = lambda.parts().first().copied().unwrap_or(0);
            let case = match pick {
                0 => MkpCase::Prepend { mu: first.max(1) },
                1 if first > 1 => MkpCase::Insert { i: 1, mu: first - 1 },
                _ => MkpCase::Decrement,
            };
            let Ok((l, r)) = mkp_successor(&lambda, &rows, case, d) else {
                continue;
            };
            (lambda, rows) = (l, r);
            let next = tau_kp(&lambda, &rows).unwrap().with_level(level as i64 + 1);
            let a = verify_mkp(&next, &prev, 1);
            let b = verify_first_mkp(&prev, &next);
            prop_assert!(a.pass, "{}", a);
            prop_assert_eq!(a.pass, b.pass);
            prev = next;
        }
    }

    #[test]
    fn wronskian_operator_annihilates(c in shifts(3), idx in prop::sample::subsequence(vec![1i64, 2, 3, 4, 5], 1..=3)) {
        let funcs: Vec<RationalFunction> = idx.iter().map(|&j| rf(shifted_elementary_schur(j, &c))).collect();
        let w = wronskian(&funcs);
        prop_assume!(!w.is_zero());
        let op = wronskian_operator(&funcs).unwrap();
        for f in &funcs {
            prop_assert!(op.apply(f).unwrap().is_zero());
        }
        let m = op.mul_left(&w.recip().unwrap());
        prop_assert_eq!(m.coeff(funcs.len() as i64), RationalFunction::one());
    }

    #[test]
    fn eigenfunction_times_tau_is_a_successor(lambda in kp_partition(), c in shifts(3), k in 0i64..=3) {
        let t = tau_kp(&lambda, &vec![c; lambda.len()]).unwrap();
        let phi = eigenfunction_from_symbol(&LaurentSymbol::monomial(k), &t, Sign::Plus);
        prop_assume!(!phi.is_zero());
        let lax = lax_from_tau(&t, -4);
        for j in 1..=2 {
            let v = eigenfunction_check(&phi, &lax, j, EigenKind::Eigen, &phi.diff(Var::t(j))).unwrap();
            prop_assert!(v.pass);
        }
        let prod = phi.mul_poly(t.poly());
        let prod = prod.as_polynomial().expect("φ τ is a polynomial").clone();
        let next = TauFunction::new(prod, 1).unwrap();
        prop_assert!(verify_mkp(&next, &t, 1).pass);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn nkdv_taus(n in 2u32..=3, pick in any::<prop::sample::Index>(), c in shifts(4), class in 1u32..=3) {
        let all = enumerate_n_periodic(n, 7);
        let lambda = pick.get(&all);
        let class = class.min(n - 1);
        let t = tau_nkdv(lambda, n, &BTreeMap::from([(class, c)])).unwrap();
        let deg = t.poly().weighted_degree().unwrap_or(0);
        for e in (n..=deg).step_by(n as usize) {
            prop_assert!(t.poly().diff(Var::t(e)).is_zero());
        }
        // Res z^{jn} τ(t - [z^{-1}]) τ(y + [z^{-1}]) e^{(t-y)·z} = 0 on the nontrivial range
        let mut j = 0;
        while (j * n) as i64 + 1 <= 2 * deg as i64 {
            prop_assert!(verify_mkp(&t, &t, (j * n) as i64).pass, "j = {}", j);
            j += 1;
        }
    }

    #[test]
    fn nkdv_data_closes_up(
        n in 2u32..=3,
        perm_pick in any::<prop::sample::Index>(),
        m in prop::collection::vec(0u32..=1, 3),
        c in prop::collection::vec(shifts(2), 3),
    ) {
        let perms: Vec<Vec<u32>> = if n == 2 {
            vec![vec![1, 2], vec![2, 1]]
        } else {
            vec![vec![1, 2, 3], vec![2, 3, 1], vec![3, 1, 2], vec![1, 3, 2], vec![3, 2, 1], vec![2, 1, 3]]
        };
        let data = NkdvData {
            n,
            perm: perm_pick.get(&perms).clone(),
            m: m[..n as usize].to_vec(),
            shifts: c[..n as usize].to_vec(),
        };
        let Ok(built) = tau_nkdv_from_data(&data) else {
            return Ok(());
        };
        prop_assert!(built.scalar != rat(0, 1));
        prop_assert!(built.tau_n.same_up_to_scalar(built.chain.get(0).unwrap()));
        prop_assert!(verify_nkdv(&built.chain, n).pass);
        // each L_k^n is a differential operator
        for k in 0..n as usize {
            let ln = lax_power(built.chain.get(k).unwrap(), n, -3);
            prop_assert!(ln.minus().is_zero(), "k = {}", k);
        }
    }

    #[test]
    fn conjugation_from_the_vacuum(c in shifts(3), idx in prop::sample::subsequence(vec![1i64, 2, 3, 4], 1..=3)) {
        let funcs: Vec<Polynomial> = idx.iter().map(|&j| shifted_elementary_schur(j, &c)).collect();
        prop_assume!(!wronskian(&funcs.iter().cloned().map(rf).collect::<Vec<_>>()).is_zero());
        prop_assert!(conjugation_check(&funcs, -3).unwrap().pass);
    }
}

#[test]
fn fractional_powers_are_consistent() {
    let c = ShiftTable::from_entries([(1, rat(1, 2)), (3, rat(-2, 3))]);
    let data = NkdvData {
        n: 3,
        perm: vec![2, 3, 1],
        m: vec![1, 0, 1],
        shifts: vec![c.clone(), ShiftTable::new(), c],
    };
    let built = tau_nkdv_from_data(&data).unwrap();
    let vs = chain_vs(&built.chain);
    let big_l = factorized_operator(&vs, 0);
    let root = big_l.nth_root_to(3, -6).unwrap();
    assert!(root.power_to(3, -4).agrees_with(&big_l));
    // the j = n power is purely differential
    let cube = root.power_to(3, -4);
    assert!(cube.minus().is_zero());
    assert!(cube.plus().agrees_with(&big_l));
}

#[test]
fn degree_bound_is_reported() {
    // the checked range is exactly the nontrivial one
    let t = nkdv_triples(&[3, 1], 2);
    assert!(t.contains(&(0, 0, 2)) && !t.contains(&(0, 0, 3)));
    assert!(t.contains(&(1, 1, 0)) && !t.contains(&(1, 1, 1)));
}

#[test]
fn floors_are_carried() {
    let op = PseudoDiffOp::d().add(&PseudoDiffOp::monomial(rf(Polynomial::t(2)), -1));
    let inv = op.inverse_to(-5).unwrap();
    assert_eq!(inv.floor(), Some(-5));
}
