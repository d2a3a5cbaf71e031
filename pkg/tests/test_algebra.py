import pytest
from hypothesis import given, settings, strategies as st

from carlitzlab.algebra import (FieldElement, Frac, Poly, enumerate_irreducibles, enumerate_monic, format_poly,
                                make_field, parse_element, roots_in_extension, valuation)
from carlitzlab.carlitz import carlitz_cache
from oracles import brute_D, necklace
from strategies import F3, F5, F9, fields, fracs, polys


def P(*c, F=F3):
    return Poly(F, c)


x = Poly.x(F3)


def test_make_field_prime():
    F = make_field(3, 1)
    assert F.q == 3 and F.m == 1


def test_make_field_quadratic_modulus_is_smallest_irreducible():
    # sieve: x^2 + a x + b irreducible iff no root in F_3, first in (b, a) digit order
    cands = []
    for k in range(9):
        b, a = k % 3, k // 3
        if all((r * r + a * r + b) % 3 for r in range(3)):
            cands.append((b, a, 1))
    assert make_field(3, 2).modulus == cands[0]


def test_make_field_rejects_composite():
    with pytest.raises(ValueError):
        make_field(4, 1)


@given(fields, st.data())
def test_frobenius_is_an_automorphism_of_order_m(F, data):
    a = data.draw(st.integers(0, F.q - 1))
    b = data.draw(st.integers(0, F.q - 1))
    assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))
    assert F.frob(F.mul(a, b)) == F.mul(F.frob(a), F.frob(b))
    assert F.frob(a, F.m) == a
    assert F.pow(a, F.q) == a


def test_gcd_and_divrem():
    assert (x**2 - 1).gcd(x - 1) == x - 1
    q, r = divmod(x**3, x)
    assert q == x**2 and not r


def test_enumerate_monic():
    assert list(enumerate_monic(F3, 1)) == [x, x + 1, x + 2]
    assert list(enumerate_monic(F3, 0, "below")) == [Poly.zero(F3)]
    assert len(list(enumerate_monic(F3, 2, "below"))) == 9


def test_enumerate_irreducibles_small():
    lin = enumerate_irreducibles(F3, 1)
    assert lin == [x, x + 1, x + 2]
    prod = lin[0] * lin[1] * lin[2]
    assert prod == x**3 - x
    quad = enumerate_irreducibles(F3, 2)
    assert len(quad) == 3
    P2 = quad[0] * quad[1] * quad[2]
    assert P2.deg == 6


@pytest.mark.parametrize("F", [F3, F5])
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_irreducible_count_matches_necklace(F, d):
    assert len(enumerate_irreducibles(F, d)) == necklace(F.q, d)


@pytest.mark.parametrize("j", [0, 1, 2])
def test_monic_product_is_D(j):
    for F in (F3, F5):
        assert brute_D(F, j) == carlitz_cache(F).D(j)


def test_valuation_examples():
    assert valuation(x**4 - x**2, x) == 2
    assert valuation((x**3 - x) ** 2, x + 1) == 2
    assert valuation(Poly.one(F3), x + 2) == 0


def test_roots_in_extension():
    big, roots = roots_in_extension(x - 2, 1)
    assert roots == [2]
    for v in enumerate_irreducibles(F3, 2):
        big, (lam, lam3) = roots_in_extension(v, 2)
        assert big.q == 9 and lam3 != lam and big.pow(lam, 3) == lam3
        for r in (lam, lam3):
            assert v.embed(big)(r) == 0
    with pytest.raises(ValueError):
        roots_in_extension(x**2 - 1, 2)


def test_fraction_basics():
    f = Frac(x**2 - 1, x - 1)
    assert f.num == x + 1 and f.den == Poly.one(F3)
    assert Frac(Poly.one(F3), x) * Frac(x) == Frac.one(F3)
    assert not (Frac(Poly.one(F3), x) + Frac(-Poly.one(F3), x))
    assert Frac.zero(F3).den == Poly.one(F3)


def test_text_round_trip():
    f = x**2 + 2
    assert f.to_list() == [2, 0, 1]
    assert parse_element(format_poly(f), F3).num == f
    assert parse_element("(x+1)/(x^3-x)", F3) == Frac(Poly.one(F3), x**2 - x)


@given(polys(F5, nonzero=True), polys(F5, nonzero=True))
def test_degree_additive(f, g):
    assert (f * g).deg == f.deg + g.deg


@settings(max_examples=1000)
@given(polys(F3, nonzero=True), polys(F3, nonzero=True), st.sampled_from(enumerate_irreducibles(F3, 1)
                                                                        + enumerate_irreducibles(F3, 2)))
def test_valuation_additive(f, g, v):
    assert valuation(f * g, v) == valuation(f, v) + valuation(g, v)


@given(polys(F9, 5), polys(F9, 4, nonzero=True))
def test_divmod_identity(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert not r or r.deg < b.deg


@given(fracs(F3), fracs(F3), st.sampled_from(["add", "mul", "sub", "div"]))
def test_fraction_invariants(a, b, op):
    if op == "div" and not b:
        return
    c = {"add": a + b, "mul": a * b, "sub": a - b, "div": a / b if b else None}[op]
    assert c.den.is_monic()
    assert c.num.gcd(c.den) == Poly.one(F3)
    if not c:
        assert c.den == Poly.one(F3)


@given(st.integers(0, 8), st.integers(0, 8))
def test_field_element_ops(a, b):
    u, v = FieldElement(F9, a), FieldElement(F9, b)
    assert (u + v) - v == u
    if b:
        assert (u / v) * v == u
