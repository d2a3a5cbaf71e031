import pytest
from hypothesis import given, settings, strategies as st

from carlitzlab.algebra import Frac, Poly
from carlitzlab.carlitz import carlitz_cache
from carlitzlab.interp import (difference_quotient, newton_interp, points,
                               product_identity_rhs, verify_interp_identity, verify_obstruction_identity,
                               verify_product_identity, wagner_partial)
from carlitzlab.mvpoly import MultiPoly
from strategies import F3, F5, fracs

C3 = carlitz_cache(F3)
C5 = carlitz_cache(F5)


@pytest.mark.parametrize("d", [1, 2])
def test_constant_interpolant(d):
    N = newton_interp([], d, 0, C3, check=True)
    assert N.poly == MultiPoly.one(C3.K, ("z",))


def test_wagner_first_stage():
    assert wagner_partial(1, C3, "t1", "z") == MultiPoly.var(C3.K, ("t1", "z"), "z")


@pytest.mark.parametrize("C,d", [(C3, 1), (C3, 2), (C3, 3), (C5, 1), (C5, 2), (C5, 3)])
def test_interp_identity(C, d):
    assert verify_interp_identity(d, C).passed


@pytest.mark.parametrize("s", [1, 2, 3, 4])
@pytest.mark.parametrize("d", [1, 2])
def test_product_identity_q3(s, d):
    rep = verify_product_identity(s, d, C3)
    assert rep.passed
    assert rep.details["correction_empty"] == (s < 3)


@pytest.mark.parametrize("s", range(1, 9))
def test_product_identity_q5(s):
    assert verify_product_identity(s, 1, C5).passed


@pytest.mark.parametrize("d", [1, 2])
def test_obstruction_identity(d):
    assert verify_obstruction_identity(d, C3).passed


def test_preconditions():
    with pytest.raises(ValueError):
        verify_product_identity(5, 1, C3)
    with pytest.raises(ValueError):
        verify_obstruction_identity(0, C3)
    with pytest.raises(ValueError):
        newton_interp([1], 0, 1, C3)


def test_failure_has_witness():
    lhs = newton_interp([1], 2, 1, C3).poly
    from carlitzlab.interp import _report

    rep = _report("demo", {}, lhs, lhs + 1, 0.0)
    assert not rep.passed and rep.witness["monomial"] == {"t1": 0, "z": 0}


@pytest.mark.parametrize("d", [1, 2, 3])
def test_degree_of_single_character_interpolant(d):
    N = newton_interp([1], d, 1, C3, check=True)
    assert N.poly.degree("z") == 3 ** (d - 1)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_one_step_refinement(d):
    vs = ("t1", "z")
    lo = newton_interp([1], d, 1, C3).poly
    hi = newton_interp([1], d + 1, 1, C3).poly
    step = C3.b(d, "t1").change_ring(C3.K).embed(vs) * C3.E(d).embed(vs)
    assert hi == lo + step


def test_correction_vanishes_on_next_grid():
    s, d = 4, 1
    vs = tuple(f"t{i}" for i in range(1, s + 1)) + ("z",)
    main = MultiPoly.one(C3.K, vs)
    for i in range(1, s + 1):
        main = main * wagner_partial(d + 1, C3, f"t{i}", "z").embed(vs)
    corr = main - product_identity_rhs(s, d, C3)
    assert corr
    for a in points(C3, d + 1):
        assert not corr.substitute({"z": Frac(a)})


V2 = ("t1", "z")


@settings(max_examples=1000)
@given(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 8)), fracs(F3, 1), max_size=4))
def test_interpolation_uniqueness(terms):
    # g with deg_z < q^d is recovered from its values on A(d), so two such
    # polynomials agreeing on A(d) coincide
    d = 2
    g = MultiPoly(C3.K, V2, terms)
    rebuilt = MultiPoly.zero(C3.K, V2)
    for a in points(C3, d):
        val = g.substitute({"z": Frac(a)}).embed(V2)
        basis = MultiPoly(C3.K, V2, {(0, k): c for k, c in difference_quotient(C3, d, a).items()})
        rebuilt = rebuilt + val * basis
    assert rebuilt == g
