"""Interpolation polynomials of character products on A(d).

For f = chi_{t_1} ... chi_{t_s} restricted to A(d) (polynomials of degree
< d), the interpolant is

    N^(d)(f)(z) = sum_{a in A(d)} f(a) * ell_d * E_d(z - a) / (z - a),

a polynomial in K[t_1, ..., t_s, z] of z-degree < q^d.  The identity
checks below build both sides independently and compare them exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import FieldElement, Frac, Poly, enumerate_monic
from .carlitz import CarlitzCache, carlitz_cache
from .mvpoly import FracField, MultiPoly
from .reports import IdentityReport, stopwatch


def interp_variables(s: int) -> tuple[str, ...]:
    return tuple(f"t{i}" for i in range(1, s + 1)) + ("z",)


def points(cache: CarlitzCache, d: int) -> list[Poly]:
    """A(d): every polynomial of degree < d, zero first, in a fixed order."""
    F = cache.field
    return [Poly(F, c[::-1]) for c in itertools.product(range(F.q), repeat=d)]


@dataclass(frozen=True)
class InterpolationPolynomial:
    poly: MultiPoly
    chars: tuple[int, ...]
    d: int

    def value_at(self, a: Poly) -> MultiPoly:
        return self.poly.substitute({"z": Frac(a)})


def _character_terms(a: Poly, chars: Sequence[int], s: int) -> dict[tuple[int, ...], int]:
    """prod_{i in chars} a(t_i) expanded: exponent tuple over t_1..t_s -> F_q int."""
    F = a.field
    nz = [(k, c) for k, c in enumerate(a.c) if c]
    out: dict[tuple[int, ...], int] = {(0,) * s: 1}
    for i in chars:
        nxt: dict[tuple[int, ...], int] = {}
        for e, v in out.items():
            for k, c in nz:
                ne = list(e)
                ne[i - 1] += k
                key = tuple(ne)
                nxt[key] = F.add(nxt.get(key, 0), F.mul(v, c))
        out = {e: v for e, v in nxt.items() if v}
    return out


def difference_quotient(cache: CarlitzCache, d: int, a: Poly) -> dict[int, Frac]:
    """Coefficients of ell_d * E_d(z - a) / (z - a) by z-degree.

    E_d is F_q-linear and vanishes on A(d), so E_d(z - a) = E_d(z) for a in
    A(d); dividing z^(q^i) - a^(q^i) by z - a gives the geometric sum.
    """
    q = cache.q
    ell = Frac(cache.ell(d))
    coeffs = {q**i: c * ell for i, c in _e_coeffs(cache, d)}
    out: dict[int, Frac] = {}
    apows = [Poly.one(cache.field)]
    top = q**d
    for _ in range(top):
        apows.append(apows[-1] * a)
    for k in range(top):
        acc = Frac.zero(cache.field)
        for qi, c in coeffs.items():
            if qi > k:
                acc = acc + c * apows[qi - 1 - k]
        if acc:
            out[k] = acc
    return out


def _e_coeffs(cache: CarlitzCache, d: int) -> list[tuple[int, Frac]]:
    E = cache.E(d)
    q = cache.q
    return [(i, E.coefficient((q**i,))) for i in range(d + 1)]


def newton_interp(chars: Iterable[int], d: int, s: int | None = None, cache: CarlitzCache | None = None,
                  check: bool = False) -> InterpolationPolynomial:
    """N^(d)(prod_{i in chars} chi_i) in K[t_1..t_s, z].

    The per-point quotients are put over the common denominator of the E_d
    coefficients so the sum over A(d) runs in A; the division by that
    denominator happens once per coefficient at the end.
    """
    if cache is None:
        raise ValueError("a CarlitzCache is required")
    if d < 1:
        raise ValueError("d must be >= 1")
    chars = tuple(sorted(chars))
    s = s if s is not None else (max(chars) if chars else 0)
    if any(not 1 <= i <= s for i in chars):
        raise ValueError("character index out of range")
    F = cache.field
    q = cache.q
    variables = interp_variables(s)
    ring = cache.K
    ell = cache.ell(d)
    ecoef = _e_coeffs(cache, d)
    # common denominator of ell_d * c_i
    scaled = [(q**i, c * Frac(ell)) for i, c in ecoef]
    delta = Poly.one(F)
    for _, c in scaled:
        delta = delta * (c.den // c.den.gcd(delta))
    numer = [(qi, c.num * (delta // c.den)) for qi, c in scaled]
    top = q**d
    acc: dict[tuple[tuple[int, ...], int], Poly] = {}
    for a in points(cache, d):
        weights = _character_terms(a, chars, s)
        if not weights:
            continue
        apows = [Poly.one(F)]
        for _ in range(top - 1):
            apows.append(apows[-1] * a)
        for k in range(top):
            val = Poly.zero(F)
            for qi, nm in numer:
                if qi > k:
                    val = val + nm * apows[qi - 1 - k]
            if not val:
                continue
            for e, w in weights.items():
                key = (e, k)
                term = val.scale(w)
                prev = acc.get(key)
                acc[key] = term if prev is None else prev + term
    terms = {}
    for (e, k), v in acc.items():
        if v:
            terms[e + (k,)] = Frac(v, delta)
    poly = MultiPoly(ring, variables, terms, _trusted=True)
    result = InterpolationPolynomial(poly, chars, d)
    if check:
        _check_interpolant(cache, result, s)
    return result


def _check_interpolant(cache: CarlitzCache, N: InterpolationPolynomial, s: int) -> None:
    q = cache.q
    if N.poly and N.poly.degree("z") >= q**N.d:
        raise AssertionError("interpolant z-degree too large")
    variables = interp_variables(s)[:-1]
    for a in points(cache, N.d):
        got = N.value_at(a)
        want = character_product(cache, a, N.chars, variables)
        if got != want:
            raise AssertionError(f"interpolant disagrees at {a}")


def character_product(cache: CarlitzCache, a: Poly, chars: Sequence[int], variables: Sequence[str]) -> MultiPoly:
    """prod_{i in chars} a(t_i) as a MultiPoly in ``variables`` over K."""
    out = MultiPoly.one(cache.K, variables)
    for i in chars:
        out = out * cache.chi(a, f"t{i}", cache.K).embed(variables)
    return out


def wagner_partial(d: int, cache: CarlitzCache, t: str = "t", z: str = "z") -> MultiPoly:
    """Xi^(d)(z; t) = sum_{j<d} b_j(t) E_j(z) in K[t, z]."""
    if d < 1:
        raise ValueError("d must be >= 1")
    variables = (t, z)
    acc = MultiPoly.zero(cache.K, variables)
    for j in range(d):
        b = cache.b(j, t).change_ring(cache.K).embed(variables)
        acc = acc + b * cache.E(j, z).embed(variables)
    return acc


def _report(name: str, params: dict, lhs: MultiPoly, rhs: MultiPoly, millis: float, **details) -> IdentityReport:
    diff = lhs.first_difference(rhs)
    witness = None
    if diff is not None:
        e, a, b = diff
        witness = {"monomial": dict(zip(lhs.vars, e)), "lhs": str(a), "rhs": str(b)}
    return IdentityReport(name, params, diff is None, witness=witness, millis=millis, details=details)


def verify_interp_identity(d: int, cache: CarlitzCache) -> IdentityReport:
    """N^(d)(chi_t) computed by interpolation equals the Wagner partial sum."""
    with stopwatch() as sw:
        lhs = newton_interp([1], d, 1, cache).poly
        rhs = wagner_partial(d, cache, "t1", "z")
    return _report("interp", {"q": cache.q, "d": d}, lhs, rhs, sw[0])


def _single(cache: CarlitzCache, i: int, d: int, variables: Sequence[str]) -> MultiPoly:
    # N^(d)_i through the Wagner form, keeping the right side free of interpolation
    return wagner_partial(d, cache, f"t{i}", "z").embed(variables)


def _b_of(cache: CarlitzCache, d: int, i: int, variables: Sequence[str]) -> MultiPoly:
    return cache.b(d, f"t{i}").change_ring(cache.K).embed(variables)


def _mixed_products(factors_out: list[MultiPoly], factors_in: list[MultiPoly], size: int,
                    one: MultiPoly) -> MultiPoly:
    """sum over alpha in {0,1}^s with |alpha| = size of prod out^(1-alpha) in^alpha."""
    s = len(factors_out)
    total = one * 0
    for alpha in itertools.combinations(range(s), size):
        chosen = set(alpha)
        term = one
        for i in range(s):
            term = term * (factors_in[i] if i in chosen else factors_out[i])
        total = total + term
    return total


def product_identity_rhs(s: int, d: int, cache: CarlitzCache) -> MultiPoly:
    """prod_i N^(d+1)_i - [d+1] E_(d+1) sum_{l=q}^s E_d^(l-q) sum_{|alpha|=l} (N^(d))^(1-alpha) (b^(d))^alpha."""
    q = cache.q
    variables = interp_variables(s)
    one = MultiPoly.one(cache.K, variables)
    main = one
    for i in range(1, s + 1):
        main = main * _single(cache, i, d + 1, variables)
    if s < q:
        return main
    Ed = cache.E(d).embed(variables)
    Ed1 = cache.E(d + 1).embed(variables)
    lower = [_single(cache, i, d, variables) for i in range(1, s + 1)]
    bs = [_b_of(cache, d, i, variables) for i in range(1, s + 1)]
    corr = one * 0
    for l in range(q, s + 1):
        corr = corr + Ed ** (l - q) * _mixed_products(lower, bs, l, one)
    return main - Ed1.scale(Frac(cache.bracket(d + 1))) * corr


def verify_product_identity(s: int, d: int, cache: CarlitzCache) -> IdentityReport:
    q = cache.q
    if not 1 <= s <= 2 * (q - 1):
        raise ValueError(f"s must lie in [1, {2 * (q - 1)}]")
    if d < 1:
        raise ValueError("d must be >= 1")
    with stopwatch() as sw:
        lhs = newton_interp(range(1, s + 1), d + 1, s, cache).poly
        rhs = product_identity_rhs(s, d, cache)
    return _report("product", {"q": q, "s": s, "d": d}, lhs, rhs, sw[0], correction_empty=s < q)


def obstruction_rhs(d: int, cache: CarlitzCache) -> MultiPoly:
    """Four-term expansion of N^(d+1)(chi_1 ... chi_(2q-1))."""
    q = cache.q
    s = 2 * q - 1
    variables = interp_variables(s)
    one = MultiPoly.one(cache.K, variables)
    br_d = Frac(cache.bracket(d))
    br_d1 = Frac(cache.bracket(d + 1))
    Ed = cache.E(d).embed(variables)
    Ed1 = cache.E(d + 1).embed(variables)
    main = one
    for i in range(1, s + 1):
        main = main * _single(cache, i, d + 1, variables)
    b_prev = [_b_of(cache, d - 1, i, variables) for i in range(1, s + 1)]
    b_cur = [_b_of(cache, d, i, variables) for i in range(1, s + 1)]
    lower = [_single(cache, i, d, variables) for i in range(1, s + 1)]
    second = _mixed_products(b_prev, b_cur, q - 1, one).scale(br_d * br_d1) * Ed1
    all_b = one
    for f in b_cur:
        all_b = all_b * f
    third = all_b * (one + Ed ** (q - 1)) * Ed1.scale(br_d1)
    fourth = one * 0
    for k in range(q, 2 * (q - 1) + 1):
        fourth = fourth + _mixed_products(lower, b_cur, k, one) * Ed ** (k - q)
    fourth = fourth * Ed1.scale(br_d1)
    return main - second - third - fourth


def verify_obstruction_identity(d: int, cache: CarlitzCache) -> IdentityReport:
    if d < 1:
        raise ValueError("d must be >= 1: the expansion uses b_(d-1)")
    q = cache.q
    s = 2 * q - 1
    with stopwatch() as sw:
        lhs = newton_interp(range(1, s + 1), d + 1, s, cache).poly
        rhs = obstruction_rhs(d, cache)
    return _report("obstruction", {"q": q, "s": s, "d": d}, lhs, rhs, sw[0])
