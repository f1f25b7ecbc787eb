"""Smoke test for the polytau_py extension module.

Build and install it first:

    pip install --no-build-isolation ./crates/python
"""

import json
from fractions import Fraction

import polytau_py as pt


def main():
    t1, t3 = pt.Polynomial.t(1), pt.Polynomial.t(3)
    s21 = pt.schur_polynomial("2,1")
    assert s21 == t1**3 * pt.Polynomial(Fraction(1, 3)) - t3, s21
    assert pt.Polynomial.from_json(s21.to_json()) == s21

    # shifted KP tau and its bilinear identity
    tau = pt.tau_kp("2,1", [{1: "1/2", 3: Fraction(-2, 3)}, {1: "1/2", 3: Fraction(-2, 3)}])
    assert pt.verify_mkp(tau, tau)
    bad = pt.verify_mkp(t1 * t1, t1 * t1)
    assert not bad and bad.witness is not None

    # one MKP step
    lam, shifts, nxt = pt.mkp_successor("2,1", [{1: 1}, {1: 1}], "prepend", mu=2, d={2: 3})
    assert lam == "2,2,1"
    assert pt.verify_mkp(nxt, pt.tau_kp("2,1", [{1: 1}, {1: 1}]), 1)

    # n-KdV
    assert pt.is_n_periodic("6,3,2,1", 4)
    t = pt.tau_nkdv("6,3,2,1", 4, {2: {1: 1}})
    assert t.diff(4).is_zero() and t.diff(8).is_zero()
    chain, scalar = pt.tau_nkdv_data(2, [1, 2], [1, 0], [{1: "2/3"}, {}])
    assert Fraction(scalar) != 0
    assert pt.verify_nkdv(chain, 2)
    assert pt.mkdv_flow_check(chain, 2, 0, 3)

    # operator side
    lax = pt.lax_operator(s21, floor=-3)
    num, den = lax.coeff(1)
    assert num == pt.Polynomial(1) and den == pt.Polynomial(1)
    assert pt.sato_wilson_check(s21, 2, floor=-3)
    assert pt.crum_check([pt.elementary_schur(j) for j in (1, 2, 3)])

    code, out = pt.run_cli(["check-n-periodic", "--n", "4", "--partition", "6,3,2,1"])
    assert code == 0 and json.loads(out)["pass"]

    print("polytau_py smoke test passed")


if __name__ == "__main__":
    main()
