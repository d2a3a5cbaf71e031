"""Bernoulli-Carlitz numbers, their recurrences and divisibility bounds."""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .algebra import FieldDescriptor, Frac, Poly, enumerate_irreducibles, make_field, roots_in_extension, valuation
from .carlitz import base_q_digits, carlitz_cache, digit_sum
from .reports import IdentityReport, stopwatch


class HypothesisError(ValueError):
    """A theorem hypothesis (length, divisibility) does not hold for the input."""


# -- the table ----------------------------------------------------------------

@dataclass(frozen=True)
class BCRecord:
    n: int
    value: Frac
    denominator_class: str   # "unit" or "P<m>"
    m: int | None = None

    @property
    def numerator(self) -> Poly:
        return self.value.num

    @property
    def denominator(self) -> Poly:
        return self.value.den


class BCTable:
    """BC(n) for one base field, grown on demand from the recursion

        BC(n) = -sum_{j >= 1, q^j <= n+1} Pi(n) / (Pi(n+1-q^j) Pi(q^j)) BC(n+1-q^j).
    """

    def __init__(self, field: FieldDescriptor) -> None:
        self.field = field
        self.q = field.q
        self.cache = carlitz_cache(field)
        self._values: dict[int, Frac] = {0: Frac.one(field)}
        self._lock = threading.Lock()

    def _check(self, n: int) -> None:
        if n < 0 or n % (self.q - 1):
            raise ValueError(f"BC({n}) needs n >= 0 divisible by q - 1 = {self.q - 1}")

    def value(self, n: int) -> Frac:
        self._check(n)
        v = self._values.get(n)
        if v is not None:
            return v
        with self._lock:
            step = self.q - 1
            k = max(self._values)
            while k < n:
                k += step
                self._values[k] = self._next(k)
        return self._values[n]

    def _next(self, n: int) -> Frac:
        q, C = self.q, self.cache
        acc = Frac.zero(self.field)
        j = 1
        while q**j <= n + 1:
            m = n + 1 - q**j
            prev = self._values[m]
            if prev:
                acc = acc + C.factorial_ratio(n, [m, q**j]) * prev
            j += 1
        return -acc

    def record(self, n: int) -> BCRecord:
        v = self.value(n)
        cls, m = classify_denominator(v.den)
        return BCRecord(n, v, cls, m)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._values))


@lru_cache(maxsize=None)
def bc_table(field: FieldDescriptor) -> BCTable:
    return BCTable(field)


def bc(n: int, field: FieldDescriptor | None = None) -> BCRecord:
    return bc_table(field or make_field(3)).record(n)


def bc_value(n: int, field: FieldDescriptor | None = None) -> Frac:
    return bc_table(field or make_field(3)).value(n)


# -- denominators ---------------------------------------------------------------

@lru_cache(maxsize=None)
def irreducible_product(field: FieldDescriptor, m: int) -> Poly:
    """P_m: the product of all monic irreducibles of degree m."""
    acc = Poly.one(field)
    for v in enumerate_irreducibles(field, m):
        acc = acc * v
    return acc


class VonStaudtViolation(AssertionError):
    pass


def classify_denominator(den: Poly) -> tuple[str, int | None]:
    """("unit", None) or ("P<m>", m) when den is exactly P_m; raises otherwise."""
    F = den.field
    if den.deg == 0:
        return "unit", None
    m = 1
    while True:
        P = irreducible_product(F, m)
        if P.deg > den.deg:
            break
        if P == den:
            return f"P{m}", m
        m += 1
    raise VonStaudtViolation(f"denominator {den} is not a product of all irreducibles of one degree")


def von_staudt_check(n: int, field: FieldDescriptor | None = None) -> BCRecord:
    return bc(n, field)


# -- tuples ------------------------------------------------------------------------

@dataclass(frozen=True)
class TupleRecord:
    beta: tuple[int, ...]
    q: int
    norm1: int
    ordered: bool
    e: int | None            # number of even entries when ordered
    norm2: int | None

    def to_json(self) -> dict:
        return {"beta": list(self.beta), "norm1": self.norm1, "ordered": self.ordered, "e": self.e,
                "norm2": self.norm2}


def norm1(beta: Sequence[int], q: int) -> int:
    return sum(q**b for b in beta)


def ordered_split(beta: Sequence[int]) -> int | None:
    """e such that beta is e non-increasing even entries then non-decreasing odd ones, else None."""
    e = 0
    while e < len(beta) and beta[e] % 2 == 0:
        e += 1
    evens, odds = beta[:e], beta[e:]
    if any(b % 2 == 0 for b in odds):
        return None
    if any(x < y for x, y in zip(evens, evens[1:])):
        return None
    if any(x > y for x, y in zip(odds, odds[1:])):
        return None
    return e


def order(beta: Iterable[int]) -> tuple[int, ...]:
    """The ordered arrangement of a multiset of entries."""
    b = list(beta)
    evens = sorted((x for x in b if x % 2 == 0), reverse=True)
    odds = sorted(x for x in b if x % 2)
    return tuple(evens + odds)


def norm2(beta: Sequence[int], q: int) -> int:
    """|beta|_2 for an ordered tuple of length 2(q-1)."""
    if len(beta) != 2 * (q - 1):
        raise ValueError("|.|_2 is defined on tuples of length 2(q-1)")
    e = ordered_split(beta)
    if e is None:
        raise ValueError(f"{tuple(beta)} is not ordered")
    first = sum(q**beta[i] for i in range(min(e, q - 1)))
    second = sum(q**beta[i] for i in range(max(q, e + 1) - 1, 2 * (q - 1)))
    return first + second


def norms(beta: Sequence[int], q: int) -> TupleRecord:
    beta = tuple(beta)
    e = ordered_split(beta)
    n2 = norm2(beta, q) if e is not None and len(beta) == 2 * (q - 1) else None
    return TupleRecord(beta, q, norm1(beta, q), e is not None, e, n2)


def length(n: int, q: int) -> int:
    """l(n): the base-q digit sum."""
    return digit_sum(n, q)


def max_tuple_norm1(n: int, s: int, q: int) -> TupleRecord:
    """An ordered tuple of length s(q-1) maximising sum q^beta_i subject to <= n.

    Entries are chosen greedily from the top, each as large as possible while
    leaving at least 1 for every entry still to choose.  When l(n) >= s(q-1)
    this takes the top base-q digits of n.
    """
    K = s * (q - 1)
    if n < K:
        raise HypothesisError(f"no tuple of length {K} has |.|_1 <= {n}")
    left = n
    out = []
    for i in range(K):
        room = left - (K - i - 1)
        b = 0
        while q ** (b + 1) <= room:
            b += 1
        out.append(b)
        left -= q**b
    return norms(order(out), q)


def max_tuple_norm2(n: int, q: int) -> TupleRecord:
    """Ordered tuple of length 2(q-1) maximal for |.|_2 (needs l(n) >= 3(q-1))."""
    if n % (q - 1) or length(n, q) < 3 * (q - 1):
        raise HypothesisError(f"need (q-1) | n and l(n) >= {3 * (q - 1)}")
    beta = max_tuple_norm1(n, 2, q).beta
    e = ordered_split(beta)
    h = q - 1
    if e == h:
        return norms(beta, q)
    mu = list(beta)
    if e < h:
        pivot = beta[h - 1]
        for j in range(h):
            if mu[j] <= pivot:
                mu[j] = pivot - 1
    else:
        pivot = beta[h]
        for j in range(h, 2 * h):
            if mu[j] <= pivot:
                mu[j] = pivot - 1
    return norms(order(mu), q)


def tuples_bounded(n: int, K: int, q: int) -> Iterator[tuple[int, ...]]:
    """Every beta in N^K with sum q^beta_i <= n."""
    def rec(i, left):
        if i == K:
            yield ()
            return
        b = 0
        while q**b <= left - (K - i - 1):
            for rest in rec(i + 1, left - q**b):
                yield (b,) + rest
            b += 1
    yield from rec(0, n)


# -- recurrences -------------------------------------------------------------------

def _theta_minus(F: FieldDescriptor, c: int) -> Poly:
    return Poly(F, [F.neg(c), 1])


def _frac_power(base: Poly, e: int) -> Frac:
    return Frac(base ** e) if e >= 0 else Frac(Poly.one(base.field), base ** (-e))


def verify_bc_recurrence_deg1(n: int, lam: int, field: FieldDescriptor | None = None) -> IdentityReport:
    """(1 - (x - lam)^n) BC(n) = sum_beta [n; n-|q^beta|, |q^beta|] (x - lam)^(n-1-|q^beta|) BC(n-|q^beta|)."""
    F = field or make_field(3)
    q = F.q
    if n < 1 or n % (q - 1):
        raise ValueError("n must be positive and divisible by q - 1")
    C = carlitz_cache(F)
    T = bc_table(F)
    with stopwatch() as sw:
        w = _theta_minus(F, lam)
        lhs = (Frac.one(F) - Frac(w ** n)) * T.value(n)
        counts: dict[int, int] = {}
        for beta in tuples_bounded(n, q - 1, q):
            k = norm1(beta, q)
            counts[k] = counts.get(k, 0) + 1
        rhs = Frac.zero(F)
        for k, c in sorted(counts.items()):
            if (n - k) % (q - 1) or c % F.p == 0:
                continue
            coeff = Frac(C.bracket_multinomial(n, [n - k, k]).scale(F.coerce(c)))
            rhs = rhs + coeff * _frac_power(w, n - 1 - k) * T.value(n - k)
    return IdentityReport("bc-recur-1", {"q": q, "n": n, "lambda": lam}, lhs == rhs, millis=sw[0],
                          witness=None if lhs == rhs else {"lhs": str(lhs), "rhs": str(rhs)},
                          details={"tuples": sum(counts.values())})


def _deg2_rhs(n: int, F: FieldDescriptor, big: FieldDescriptor, lam: int, q: int, check_integral: bool):
    C = carlitz_cache(F)
    T = bc_table(F)
    h = q - 1
    a = _theta_minus(big, lam)
    b = _theta_minus(big, big.pow(lam, q))
    groups: dict[tuple[int, int, int], int] = {}
    for beta in tuples_bounded(n, 2 * h, q):
        X = sum(q**x for x in beta[:h])
        Y = sum(q**x for x in beta[h:])
        # x^(q^k) - lam is (x - lam)^(q^k) for k even, (x - lam^q)^(q^k) for k odd; swapped for lam^q
        A = sum(q**x for x in beta[:h] if x % 2 == 0) + sum(q**x for x in beta[h:] if x % 2)
        key = (X, Y, A)
        groups[key] = groups.get(key, 0) + 1
    rhs = Frac.zero(big)
    nonintegral = []
    for (X, Y, A), c in sorted(groups.items()):
        m = n - X - Y
        if m % (q - 1) or c % F.p == 0:
            continue
        B = X + Y - A
        if check_integral and (n - 1 - A < 0 or n - 1 - B < 0):
            nonintegral.append((X, Y, A))
        tri = C.bracket_multinomial(n, [m, X, Y]).scale(F.coerce(c)).embed(big)
        factor = _frac_power(a, n - 1 - A) * _frac_power(b, n - 1 - B)
        rhs = rhs + Frac(tri) * factor * T.value(m).embed(big)
    return rhs, len(groups), nonintegral


def verify_bc_recurrence_deg2(n: int, v: Poly) -> IdentityReport:
    """(v^n - 1) BC(n) over F_(q^2)(x), at a root of v and at its conjugate."""
    F = v.field
    q = F.q
    if v.deg != 2:
        raise ValueError("v must be an irreducible quadratic")
    if n % (q - 1) or length(n, q) < 2 * (q - 1):
        raise HypothesisError(f"need (q-1) | n and l(n) >= {2 * (q - 1)}")
    T = bc_table(F)
    integral = length(n, q) >= 3 * (q - 1)
    with stopwatch() as sw:
        big, orbit = roots_in_extension(v, 2)
        lhs = ((Frac(v ** n) - Frac.one(F)) * T.value(n)).embed(big)
        results = []
        bad = []
        for lam in orbit:
            rhs, ngroups, nonint = _deg2_rhs(n, F, big, lam, q, integral)
            results.append(rhs)
            bad.extend(nonint)
        passed = all(r == lhs for r in results) and results[0] == results[1] and not bad
    return IdentityReport("bc-recur-2", {"q": q, "n": n, "v": str(v)}, passed, millis=sw[0],
                          witness=None if passed else {"nonintegral": bad},
                          details={"integrality_checked": integral, "groups": ngroups, "roots": orbit})


# -- bounds and measurements --------------------------------------------------------

def measure_valuation(n: int, d: int, field: FieldDescriptor | None = None) -> dict:
    """Exponent of P_d in the numerator of BC(n): the min over irreducibles of degree d."""
    F = field or make_field(3)
    num = bc_value(n, F).num
    per = {str(v): valuation(num, v) for v in enumerate_irreducibles(F, d)}
    return {"n": n, "d": d, "valuation": min(per.values()), "per_irreducible": per}


def divisibility_bound_deg1(n: int, field: FieldDescriptor | None = None) -> dict:
    """Exponent e with (x^q - x)^e dividing the numerator of BC(n), from the degree-one recurrence."""
    F = field or make_field(3)
    q = F.q
    if n % (q - 1) or length(n, q) < 2 * (q - 1):
        raise HypothesisError(f"need (q-1) | n and l(n) >= {2 * (q - 1)}")
    mu = max_tuple_norm1(n, 1, q)
    rest = n - mu.norm1
    hit = bc_table(F).record(rest).m == 1
    e = n - (2 if hit else 1) - mu.norm1
    return {"n": n, "bound": e, "basis": str(Poly.monomial(F, q) - Poly.x(F)), "mu": list(mu.beta),
            "norm1": mu.norm1, "branch": "denominator P1" if hit else "no P1 denominator", "remainder": rest}


def divisibility_bound_deg2(n: int, field: FieldDescriptor | None = None) -> dict:
    """Exponent e with P_2^e dividing the numerator of BC(n)."""
    F = field or make_field(3)
    q = F.q
    mu = max_tuple_norm2(n, q)
    rest = n - mu.norm1
    hit = bc_table(F).record(rest).m == 2
    e = n - (2 if hit else 1) - mu.norm2
    weak_mu = max_tuple_norm1(n, 2, q)
    return {"n": n, "bound": e, "basis": "P2", "mu": list(mu.beta), "norm2": mu.norm2,
            "branch": "denominator P2" if hit else "no P2 denominator", "remainder": rest,
            "weak_bound": n - 2 - weak_mu.norm1}


def gamma_sequence(n: int, l: int, j: int, q: int = 3) -> dict:
    """gamma_j = (q-1) q^j (q^(l+2) + q^(l+1) + q^l) + n with the two bound exponents."""
    if n % (q - 1):
        raise ValueError("n must be divisible by q - 1")
    if q**l <= n:
        raise ValueError("need q^l > n")
    g = (q - 1) * q**j * (q ** (l + 2) + q ** (l + 1) + q**l) + n
    return {"gamma": g, "bound_deg1": (q - 1) * q**j * (q ** (l + 1) + q**l) + n - 2,
            "bound_deg2": (q - 1) * q**j * q**l + n - 2}


# -- scan -----------------------------------------------------------------------------

SCAN_FIELDS = ("n", "length", "mu", "norm1", "conjectured", "measured", "pass")


def qualifying(d: int, upto: int, q: int, start: int = 1) -> list[int]:
    step = q - 1
    first = max(step, ((start + step - 1) // step) * step)
    return [n for n in range(first, upto + 1, step) if length(n, q) >= (d + 1) * (q - 1)]


def conjecture_scan(d: int, upto: int, field: FieldDescriptor | None = None, start: int = 1) -> list[dict]:
    """Rows comparing n - 2 - |mu|_1 with the measured P_d exponent of BC(n)."""
    F = field or make_field(3)
    q = F.q
    rows = []
    for n in qualifying(d, upto, q, start):
        mu = max_tuple_norm1(n, d, q)
        conj = n - 2 - mu.norm1
        meas = measure_valuation(n, d, F)["valuation"]
        rows.append({"n": n, "length": length(n, q), "mu": " ".join(map(str, mu.beta)), "norm1": mu.norm1,
                     "conjectured": conj, "measured": meas, "pass": meas >= conj})
    return rows
