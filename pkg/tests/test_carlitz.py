import random

import pytest
from hypothesis import given, settings, strategies as st

from carlitzlab.algebra import Frac, Poly, enumerate_monic, make_field
from carlitzlab.carlitz import TwistedPolynomial, base_q_digits, carlitz_cache
from carlitzlab.interp import points
from carlitzlab.mvpoly import MultiPoly
from oracles import brute_D, brute_E, brute_factorial
from strategies import F3, F5, polys

C3 = carlitz_cache(F3)
C5 = carlitz_cache(F5)
x = Poly.x(F3)
one = Poly.one(F3)


def test_bracket():
    assert C3.bracket(1) == x**3 - x
    assert C3.bracket(2) == x**9 - x


def test_D_and_ell():
    assert C3.D(0) == one
    assert C3.D(1) == x**3 - x
    assert C3.ell(0) == one
    assert C3.ell(1) == x - x**3


@pytest.mark.parametrize("C", [C3, C5])
@pytest.mark.parametrize("j", [0, 1, 2])
def test_D_matches_brute_product(C, j):
    assert C.D(j) == brute_D(C.field, j)


def test_b_small():
    assert C3.b(0) == MultiPoly.one(C3.A, ("t",))
    t = MultiPoly.var(C3.A, ("t",), "t")
    assert C3.b(1) == t - x


def test_E_small():
    assert C3.E(0) == MultiPoly.var(C3.K, ("z",), "z")
    for C in (C3, C5):
        want = brute_E(C, 1)
        E1 = C.E(1)
        assert {e[0]: c for e, c in E1.terms.items()} == want
    assert {e[0]: c for e, c in C3.E(2).terms.items()} == brute_E(C3, 2)


def test_carlitz_action_examples():
    tau_plus_x = TwistedPolynomial(F3, [x, one])
    assert C3.carlitz_action(x) == tau_plus_x
    assert C3.carlitz_action(x**2) == TwistedPolynomial(F3, [x**2, x**3 + x, one])


def test_chi():
    t = MultiPoly.var(C3.K, ("t1",), "t1")
    assert C3.chi(x**2 + 1, "t1") == t**2 + 1
    assert C3.chi(Poly.constant(F3, 2), "t1") == MultiPoly.constant(C3.K, ("t1",), 2)


def test_twist():
    t = MultiPoly.var(C3.K, ("t",), "t")
    assert C3.twist(1, t.scale(Frac(x))) == t.scale(Frac(x**3))


def test_carlitz_factorial():
    assert C3.carlitz_factorial(0) == one
    assert C3.carlitz_factorial(3) == x**3 - x
    assert C3.carlitz_factorial(646).deg == 2958
    for n in range(0, 40):
        assert C3.carlitz_factorial(n) == brute_factorial(F3, n)


def test_bracket_multinomial_examples():
    assert C3.bracket_multinomial(7, [7]) == one
    assert C3.bracket_multinomial(3, [1, 2]) == C3.carlitz_factorial(3)
    with pytest.raises(ValueError):
        C3.bracket_multinomial(5, [1, 2])


def test_bracket_multinomial_integrality_random():
    rng = random.Random(20240611)
    for _ in range(200):
        n = rng.randrange(0, 400)
        k = rng.randrange(1, 4)
        cuts = sorted(rng.randrange(0, n + 1) for _ in range(k))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [n])]
        C3.bracket_multinomial(n, parts, verify=n < 120)


def test_base_q():
    assert base_q_digits(304, 3) == [1, 2, 0, 2, 0, 1]
    assert sum(d * 3**i for i, d in enumerate(base_q_digits(304, 3))) == 3**5 + 2 * 3**3 + 2 * 3 + 1
    assert base_q_digits(646, 3) == [1, 2, 2, 2, 1, 2]
    assert sum(base_q_digits(646, 3)) == 10
    assert base_q_digits(0, 3) == []


@pytest.mark.parametrize("C,d", [(C3, 0), (C3, 1), (C3, 2), (C5, 0), (C5, 1), (C5, 2)])
def test_ed_recursion(C, d):
    assert C.verify_ed_recursion(d).passed


@settings(max_examples=1000)
@given(polys(F3, 2), polys(F3, 2))
def test_carlitz_action_is_ring_homomorphism(a, b):
    Ca, Cb = C3.carlitz_action(a), C3.carlitz_action(b)
    assert C3.carlitz_action(a * b) == Ca * Cb
    assert C3.carlitz_action(a + b) == Ca + Cb


@pytest.mark.parametrize("d", [1, 2])
def test_E_linear_and_vanishing(d):
    E = C3.E(d, "z")
    vs = ("y", "z")
    y = MultiPoly.var(C3.K, vs, "y")
    z = MultiPoly.var(C3.K, vs, "z")
    Ez = E.embed(vs)
    Ey = E.embed(vs, {"z": "y"})
    sub = E.substitute({"z": y + z})
    assert sub == Ey + Ez
    for c in range(3):
        assert E.substitute({"z": MultiPoly.var(C3.K, ("z",), "z").scale(c)}) == E.scale(c)
    for a in points(C3, d):
        assert not E.substitute({"z": Frac(a)})
    assert E.coefficient((3**d,)) == Frac(one, C3.D(d))


@pytest.mark.parametrize("e", range(5))
def test_b_D_ell_consistency(e):
    b = C3.b(e)
    assert b.substitute({"t": x ** (3**e)}) == C3.D(e)
    assert C3.twist(1, b).substitute({"t": x}) == C3.ell(e)


@pytest.mark.parametrize("q,e", [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (4, 2)])
def test_ell_is_signed_lcm(q, e):
    F = make_field(*{3: (3,), 5: (5,), 4: (2, 2)}[q])
    L = None
    for m in enumerate_monic(F, e, "exact"):
        L = m if L is None else (L * m) // L.gcd(m)
    assert carlitz_cache(F).ell(e) == (L if e % 2 == 0 else -L)
