"""Acceptance criteria, one check per criterion.

Every check appends a PASS/FAIL line to ``RESULTS``; the lines are printed
in the pytest terminal summary (see conftest.py) and when this file is run
as a script.
"""

from __future__ import annotations

import csv
import io
import random
import time

import pytest

from carlitzlab import bcnum, cli
from carlitzlab.algebra import Frac, Poly, enumerate_irreducibles, make_field
from carlitzlab.carlitz import carlitz_cache
from carlitzlab.interp import (verify_interp_identity, verify_obstruction_identity, verify_product_identity)
from carlitzlab.lseries import (ExplicitRHS, character_sum_check, explicit_rhs, omega_root_product,
                                verify_agf_at_period, verify_carlitz_genfun, verify_exp_functional_equation,
                                verify_explicit, verify_limits, verify_main_theorem, verify_omega_difference,
                                verify_omega_eigen, verify_pellarin_formula)
from oracles import bc_by_series_inversion

F3 = make_field(3)
F5 = make_field(5)
RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> bool:
    RESULTS[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} | {detail}"
    print(RESULTS[n])
    return ok


def criterion_1():
    t = time.perf_counter()
    bcnum.BCTable(F3).value(304)   # fresh table, not the shared cache
    secs = time.perf_counter() - t
    meas = bcnum.measure_valuation(304, 2, F3)["valuation"]
    bound = bcnum.divisibility_bound_deg2(304, F3)["bound"]
    ok = meas == 14 and bound == 14 and secs < 120
    return record(1, ok, f"BC(304): P2-valuation {meas}, bound {bound}, table {secs:.2f}s (limit 120s)")


def criterion_2():
    t = time.perf_counter()
    bcnum.BCTable(F3).value(646)   # fresh table, not the shared cache
    secs = time.perf_counter() - t
    meas = bcnum.measure_valuation(646, 2, F3)["valuation"]
    bound = bcnum.divisibility_bound_deg2(646, F3)["bound"]
    ok = meas == 74 and bound == 69 and secs < 600
    return record(2, ok, f"BC(646): P2-valuation {meas}, bound {bound}, table {secs:.2f}s (limit 600s)")


def criterion_3():
    r16 = bcnum.von_staudt_check(16, F3)
    r70 = bcnum.von_staudt_check(70, F3)
    ok = r16.denominator == bcnum.irreducible_product(F3, 2) and r70.value.is_polynomial()
    return record(3, ok, f"den BC(16) class {r16.denominator_class}, den BC(70) class {r70.denominator_class}")


def criterion_4():
    b = bcnum.max_tuple_norm1(304, 2, 3).beta
    m1 = bcnum.max_tuple_norm2(304, 3)
    m2 = bcnum.max_tuple_norm2(646, 3)
    got = (b, m1.beta, m2.beta, 304 - m1.norm2, 646 - m2.norm2)
    ok = got == ((1, 3, 3, 5), (2, 2, 3, 5), (4, 2, 5, 5), 16, 70)
    return record(4, ok, f"beta(304)={b}, mu(304)={m1.beta}, mu(646)={m2.beta}, n-|mu|_2={got[3]},{got[4]}")


def criterion_5():
    t = time.perf_counter()
    fails = []
    C3, C5 = carlitz_cache(F3), carlitz_cache(F5)
    for C in (C3, C5):
        for d in (1, 2, 3):
            if not verify_interp_identity(d, C).passed:
                fails.append(f"interp q={C.q} d={d}")
        for d in (0, 1, 2):
            if not C.verify_ed_recursion(d).passed:
                fails.append(f"ed q={C.q} d={d}")
    for s in range(1, 5):
        for d in (1, 2):
            if not verify_product_identity(s, d, C3).passed:
                fails.append(f"product q=3 s={s} d={d}")
    for s in range(1, 9):
        if not verify_product_identity(s, 1, C5).passed:
            fails.append(f"product q=5 s={s}")
    for d in (1, 2):
        if not verify_obstruction_identity(d, C3).passed:
            fails.append(f"obstruction d={d}")
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randrange(0, 300)
        cuts = sorted(rng.randrange(0, n + 1) for _ in range(rng.randrange(1, 4)))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [n])]
        try:
            C3.bracket_multinomial(n, parts, verify=True)
        except AssertionError:
            fails.append(f"multinomial {n} {parts}")
    for F in (F3, F5):
        want = bc_by_series_inversion(F, 30)
        for n in range(0, 31, F.q - 1):
            if bcnum.bc_value(n, F) != want[n]:
                fails.append(f"bc oracle q={F.q} n={n}")
    for n in (2, 16, 304):
        for lam in range(3):
            if not bcnum.verify_bc_recurrence_deg1(n, lam, F3).passed:
                fails.append(f"deg1 n={n} lam={lam}")
    for n in (16, 304):
        for v in enumerate_irreducibles(F3, 2):
            if not bcnum.verify_bc_recurrence_deg2(n, v).passed:
                fails.append(f"deg2 n={n} v={v}")
    secs = time.perf_counter() - t
    ok = not fails and secs < 300
    return record(5, ok, f"exact identity suite: {len(fails)} failures {fails[:3]}, {secs:.1f}s (limit 300s)")


def criterion_6():
    t = time.perf_counter()
    N, M = 32, 4
    x = Poly.x(F3)
    reps = {"pellarin-formula": verify_pellarin_formula(None, N, M, F3),
            "carlitz-genfun": verify_carlitz_genfun("1/x", None, N, F3)}
    for s in (1, 2, 3, 4):
        for z in ("1/x", "1/x^2"):
            reps[f"main s={s} z={z}"] = verify_main_theorem(s, z, None, N, M, F3)
    for s, k in ((2, 2), (3, 1), (4, 2), (1, 1)):
        reps[f"explicit {s},{k}"] = verify_explicit(s, k, None, N, M, F3)
    reps["exp functional equation"] = verify_exp_functional_equation(N=N, base=F3)
    reps["tau omega"] = verify_omega_difference(N, M, F3)
    reps["C_x omega"] = verify_omega_eigen(None, N, M, F3)
    reps["agf at period"] = verify_agf_at_period(N, M, F3)
    quad = enumerate_irreducibles(F3, 2)[0]
    for v in (x, quad):
        reps[f"char-sum deg {v.deg}"] = character_sum_check(v, 2, None, N)
        reps[f"omega-root deg {v.deg}"] = omega_root_product(v, N)
    secs = time.perf_counter() - t
    bad = [k for k, r in reps.items() if not r.passed or (r.certified_precision or 0) < N // 2]
    low = min(r.certified_precision for r in reps.values())
    ok = not bad and secs < 180
    return record(6, ok, f"{len(reps)} analytic checks at N={N}, M={M}: min certified u^{low} (need u^{N // 2}), "
                         f"failures {bad}, {secs:.1f}s (limit 180s)")


def criterion_7():
    N = 24
    out = []
    ok = True
    for which in ("b-over-ell", "b-product", "b-zero", "ed-to-exp", "wagner-agf"):
        rep = verify_limits(which, N, 2)
        d = rep.details["distance_exponents"]
        good = len(d) == 3 and d[0] < d[1] < d[2] and d[2] > 12
        ok = ok and good and rep.passed
        out.append(f"{which} {d}")
    return record(7, ok, "distance exponents, need strictly increasing and last > 12: " + "; ".join(out))


def _pole_sum(s: int) -> ExplicitRHS:
    one = Frac.one(F3)
    terms = {tuple(0 if j == i else None for j in range(s)): one for i in range(s)}
    return ExplicitRHS(3, s, 2, terms, [], [])


def criterion_8():
    first = explicit_rhs(3, 1, F3)
    part1 = first.constant() == Frac(Poly.constant(F3, F3.neg(1)))
    got = explicit_rhs(4, 2, F3)
    stated = _pole_sum(4)
    part2 = got == stated
    neg = got == ExplicitRHS(3, 4, 2, {p: -c for p, c in stated.terms.items()}, [], [])
    ok = part1 and part2
    return record(8, ok, f"(q,1) -> -1: {part1}; (q+1,2) -> +sum 1/(x-t_i): {part2} "
                         f"(computed value is -sum 1/(x-t_i): {neg}, confirmed by the analytic comparison)")


def criterion_9(tmp_path=None):
    rows2 = bcnum.conjecture_scan(2, 100, F3)
    fails2 = [r["n"] for r in rows2 if not r["pass"]]
    buf = io.StringIO()
    import contextlib

    with contextlib.redirect_stdout(buf):
        code = cli.main(["scan", "--p", "3", "--degree", "3", "--to", "200"])
    rows3 = list(csv.DictReader(io.StringIO(buf.getvalue())))
    fails3 = [r["n"] for r in rows3 if r["pass"] != "True"]
    expected3 = bcnum.qualifying(3, 200, 3)
    ok = bool(rows2) and not fails2 and [int(r["n"]) for r in rows3] == expected3 and not fails3 and code == 0
    return record(9, ok, f"d=2: {len(rows2)} rows, failures {fails2}; d=3: {len(rows3)} CSV rows, failures {fails3}")


def criterion_10():
    import test_algebra
    import test_carlitz
    import test_infty
    import test_interp
    import test_mvpoly

    suites = {
        "ultrametric": test_infty.test_ultrametric,
        "gauss-norm": test_infty.test_gauss_norm_multiplicative,
        "precision-propagation": test_infty.test_precision_propagation,
        "interpolation-uniqueness": test_interp.test_interpolation_uniqueness,
        "substitution-homomorphism": test_mvpoly.test_substitute_is_homomorphism,
        "carlitz-homomorphism": test_carlitz.test_carlitz_action_is_ring_homomorphism,
        "valuation-additivity": test_algebra.test_valuation_additive,
    }
    failed = []
    counts = {}
    for name, fn in suites.items():
        counts[name] = fn._hypothesis_internal_use_settings.max_examples
        try:
            fn()
        except Exception as exc:  # noqa: BLE001
            failed.append(f"{name}: {type(exc).__name__}")
    ok = not failed and all(c >= 1000 for c in counts.values())
    return record(10, ok, f"{len(suites)} property suites x >= {min(counts.values())} cases (derandomized), "
                          f"failures {failed}")


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
            7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10}

SIGN_NOTE = ("the (q+1, 2) value computes to -sum 1/(x - t_i); the stated +sum disagrees with the series "
             "comparison at u^1 while -sum agrees to the full precision")


@pytest.mark.parametrize("n", [n for n in CRITERIA if n != 8])
def test_criterion(n):
    assert CRITERIA[n]()


@pytest.mark.xfail(strict=True, reason=SIGN_NOTE)
def test_criterion_8():
    assert CRITERIA[8]()


def test_criterion_8_first_example():
    assert explicit_rhs(3, 1, F3).constant() == Frac(Poly.constant(F3, 2))


if __name__ == "__main__":
    for fn in CRITERIA.values():
        fn()
