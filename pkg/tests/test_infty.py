from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from carlitzlab.algebra import Frac, Poly
from carlitzlab.infty import (agf, carlitz_exp, geometric, iota, laurent, omega, omega_inverse, pi_bar, tate_equal,
                              tate_variable, theta, u_power)
from carlitzlab.lseries import verify_agf_at_period, verify_omega_power, verify_period_limit
from strategies import F3, F5, fracs, polys

x = Poly.x(F3)
N = 32


def test_theta_times_u():
    one = laurent(Frac(Poly.one(F3), x), F3, N) * theta(F3)
    assert tate_equal(one, u_power(F3, 0)).equal
    assert (u_power(F3, 1) * theta(F3)).is_exact()


def test_invert_one_minus_u():
    inv = laurent(Frac(x - 1, x), F3, N).invert(N)
    assert [inv.coefficient(k) for k in range(N)] == [1] * N


@pytest.mark.parametrize("F", [F3, F5])
def test_iota_relation(F):
    i = iota(F)
    assert i.valuation == Fraction(-1, F.q - 1)
    minus_theta = -theta(F)
    assert tate_equal(i ** (F.q - 1), minus_theta).equal
    assert (i ** (F.q - 1)).is_exact()
    assert tate_equal(i ** (2 * (F.q - 1)), theta(F) * theta(F)).equal


def test_iota_grading_rule():
    F = F5
    i = iota(F)
    for a in range(4):
        for b in range(4):
            prod = i**a * i**b
            r = (a + b) % 4
            assert prod.is_grade_pure(r)


def test_period_limit():
    assert verify_period_limit(16).passed


def test_exp_kernel():
    zero = u_power(F3, 0) * 0
    assert carlitz_exp(zero, N).is_zero()
    e = carlitz_exp(pi_bar(F3, N + 4), N)
    assert e.is_zero() and e.prec is not None and e.prec >= N // 2


def test_agf_zero():
    zero = u_power(F3, 0) * 0
    assert agf(zero, N, 3).is_zero()


def test_omega_matches_agf_at_period():
    rep = verify_agf_at_period(N, 4)
    assert rep.passed and rep.certified_precision >= N // 2


def test_tate_equal_precision_semantics():
    w = omega(F3, N, 4)
    assert tate_equal(w, w).equal
    t = tate_variable(F3, 1, 4, 0)
    bumped = w + t * u_power(F3, N)
    assert tate_equal(w, bumped).equal         # the bump sits at the comparison precision
    nudged = w + t * u_power(F3, N - 2)
    cmp = tate_equal(w, nudged)
    assert not cmp.equal and cmp.witness["u_exponent"] == N - 2 and cmp.witness["monomial"] == [1]


def test_omega_is_iota_times_unit():
    w = omega(F3, N, 4)
    assert w.is_grade_pure(1)
    assert w.gauss_valuation == Fraction(-1, 2)
    winv = omega_inverse(F3, N, 4)
    prod = (w * winv).truncate(N - 4)
    one = tate_variable(F3, 1, 4, 0) * 0 + 1
    assert tate_equal(prod, one).equal


def test_omega_power():
    assert verify_omega_power(24, 4).passed


def test_json_shapes():
    js = laurent(x**2 + 2, F3).to_json()
    assert js == {"valuation": -2, "coefficients": [1, 0, 2], "precision": None}
    pj = pi_bar(F3, 8).to_json()
    assert len(pj["grades"]) == 2
    tj = omega(F3, 8, 2).to_json()
    assert tj["cap"] == 2 and tj["precision"] == 8


# -- randomized --------------------------------------------------------------------

P = 40
nonzero = fracs(F3, 4).filter(bool)


@settings(max_examples=1000)
@given(nonzero, nonzero)
def test_ultrametric(a, b):
    la, lb = laurent(a, F3, P), laurent(b, F3, P)
    va, vb = a.valuation_infinity(), b.valuation_infinity()
    assert la.valuation == va
    assert (la * lb).valuation == va + vb
    s = a + b
    if s:
        assert (la + lb).valuation == s.valuation_infinity()
        assert s.valuation_infinity() >= min(va, vb)


def _tate(coeffs, cap):
    t = tate_variable(F3, 1, cap, 0)
    out = t * 0
    tk = t * 0 + 1
    for c in coeffs:
        out = out + tk * laurent(c, F3, P)
        tk = tk * t
    return out


@settings(max_examples=1000)
@given(st.lists(fracs(F3, 3), min_size=1, max_size=3), st.lists(fracs(F3, 3), min_size=1, max_size=3))
def test_gauss_norm_multiplicative(f, g):
    if not any(f) or not any(g):
        return
    cap = 4   # product degree <= 4 stays under the cap
    a, b = _tate(f, cap), _tate(g, cap)
    assert (a * b).gauss_valuation == a.gauss_valuation + b.gauss_valuation


@settings(max_examples=1000)
@given(fracs(F3, 3), st.integers(4, 20))
def test_precision_propagation(c, n):
    # run at 2n, truncate to n, compare with the n run
    z = pi_bar(F3, 2 * n + 4) * laurent(c, F3, 2 * n + 4) * laurent(Frac(Poly.one(F3), x**2), F3, 2 * n + 4)
    lo = pi_bar(F3, n + 4) * laurent(c, F3, n + 4) * laurent(Frac(Poly.one(F3), x**2), F3, n + 4)
    if z.valuation != Fraction(z.prec) and z.valuation > 0:
        e_hi = carlitz_exp(z, 2 * n).truncate(n)
        e_lo = carlitz_exp(lo, n)
        cmp = tate_equal(e_hi, e_lo)
        assert cmp.equal and cmp.precision >= n - 2
    w_hi = omega(F3, 2 * n, 3).truncate(n)
    assert tate_equal(w_hi, omega(F3, n, 3)).precision == n
    assert tate_equal(w_hi, omega(F3, n, 3)).equal
    g_hi = geometric(F3, 2, 2 * n).truncate(n)
    g_lo = geometric(F3, 2, n)
    assert [g_hi.coefficient(k) for k in range(n)] == [g_lo.coefficient(k) for k in range(n)]
