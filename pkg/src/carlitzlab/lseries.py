"""Truncated zeta values, Pellarin L-series and the analytic identity checks.

Every sum over A runs degree block by degree block.  Blocks of degree d
cancel heavily (for example the monic degree-d block of sum 1/a is
1/ell_d), so sums are extended until a whole block vanishes at the
working precision; the rigorous termwise bound q^(-n D) is reported
separately as ``tail_bound``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .algebra import FieldDescriptor, Frac, Poly, enumerate_monic, make_field, roots_in_extension, embedding
from .carlitz import CarlitzCache, carlitz_cache
from .infty import (
    TateTruncation,
    _Series,
    agf,
    carlitz_exp,
    geometric_t,
    iota,
    laurent,
    omega,
    omega_inverse,
    pi_bar,
    tate_equal,
    tate_variable,
    theta,
    u_power,
    _tate_univariate,
)
from .mvpoly import MultiPoly
from .reports import IdentityReport, stopwatch

GUARD = 8
MAX_DEGREE = 9


# -- degree blocks ------------------------------------------------------------------

def _mulmat(F: FieldDescriptor, w: int) -> np.ndarray:
    """Matrix of multiplication by w on base-p coordinates."""
    if F.m == 1:
        return np.array([[w % F.p]], dtype=np.int64)
    cols = []
    for j in range(F.m):
        basis = F.from_digits([1 if i == j else 0 for i in range(F.m)])
        cols.append(F.digits(F.mul(w, basis)))
    return np.array(cols, dtype=np.int64).T


def _tensor_power(F: FieldDescriptor, vec: Sequence[int], s: int) -> np.ndarray:
    W = np.ones((), dtype=np.int64)
    v = np.asarray(vec, dtype=np.int64)
    if F.m == 1:
        for _ in range(s):
            W = np.multiply.outer(W, v) % F.p
        return W
    mul = np.asarray(F.table("mul"), dtype=np.int64)
    for _ in range(s):
        W = mul[W[..., None], v]
    return W


class _Accumulator:
    """Running sum of (character tensor) x (Laurent series) over a window u^val..u^(prec-1)."""

    def __init__(self, F: FieldDescriptor, base: FieldDescriptor, s: int, cap: int, val: int, prec: int) -> None:
        self.F, self.base, self.s, self.cap = F, base, s, cap
        self.val, self.prec = val, prec
        self.arr = np.zeros((F.m,) + (cap + 1,) * s + (prec - val,), dtype=np.int64)
        self._mats: dict[int, np.ndarray] = {}
        self._pending = 0

    def add(self, vec: Sequence[int], ser: _Series, sign: int = 1) -> None:
        vec = list(vec[: self.cap + 1])
        if not vec or ser.is_zero():
            return
        W = _tensor_power(self.F, vec, self.s) if self.s else np.asarray(vec[0], dtype=np.int64)
        off = ser.val - self.val
        if off < 0:
            raise ValueError("series starts below the accumulator window")
        n = min(ser.length, self.arr.shape[-1] - off)
        if n <= 0:
            return
        block = ser.arr[0][:, :n]
        k = W.shape[0] if self.s else 0
        idx = (slice(None),) + (slice(0, k),) * self.s + (slice(off, off + n),)
        for w in np.unique(W):
            w = int(w)
            if not w:
                continue
            c = self.F.neg(w) if sign < 0 else w
            mat = self._mats.get(c)
            if mat is None:
                mat = self._mats[c] = _mulmat(self.F, c)
            comp = mat @ block
            mask = (W == w).astype(np.int64)
            self.arr[idx] += comp.reshape((self.F.m,) + (1,) * self.s + (n,)) * mask[None, ..., None]
        self._pending += 1
        if self._pending > 1 << 12:
            self.arr %= self.F.p
            self._pending = 0

    def value(self) -> _Series:
        arr = (self.arr % self.F.p)[None]
        cls = TateTruncation if self.s else _class0()
        return cls(self.base, self.F, self.s, self.cap if self.s else 0, 1, self.val, arr, self.prec,
                   (0, self.val) if self.s else None)


def _class0():
    from .infty import TruncatedLaurent

    return TruncatedLaurent


def _block_valuation(arr: np.ndarray, val: int) -> int | None:
    L = arr.shape[-1]
    cols = np.flatnonzero(arr.reshape(-1, L).any(axis=0)) if L else []
    return None if len(cols) == 0 else val + int(cols[0])


def _elements(F: FieldDescriptor, d: int, monic: bool) -> Iterator[Poly]:
    if monic:
        yield from enumerate_monic(F, d)
        return
    for lead in range(1, F.q):
        for a in enumerate_monic(F, d):
            yield a.scale(lead)


def _inverse_power(a: Poly, n: int, base: FieldDescriptor, prec: int) -> _Series:
    """a^(-n) modulo u^prec."""
    return laurent(a ** n, base).invert(prec)


@dataclass
class LSeriesTruncation:
    """sum over monic a with deg a < D of chi_1(a)...chi_s(a) / a^n."""

    s: int
    n: int
    D: int
    value: _Series
    block_valuations: list = dc_field(default_factory=list)

    @property
    def tail_bound(self) -> int:
        """Termwise bound: every dropped term has valuation >= n D."""
        return self.n * self.D

    @property
    def observed_tail(self) -> int | None:
        """Valuation of the last included degree block (None if it vanished)."""
        return self.block_valuations[-1] if self.block_valuations else None


def _monic_sum(base: FieldDescriptor, s: int, n: int, D: int | None, N: int, M: int,
               weight=None, F: FieldDescriptor | None = None) -> LSeriesTruncation:
    """Shared driver for zeta and Pellarin sums; ``weight(a)`` overrides the character vector."""
    F = F or base
    acc = _Accumulator(F, base, s, M, 0, N)
    blocks = []
    d = 0
    top = D if D is not None else MAX_DEGREE
    while d < top:
        before = acc.arr.copy() % F.p
        for a in enumerate_monic(base, d):
            inv = _inverse_power(a, n, base, N)
            if F != base:
                inv = inv.change_field(F)
            vec = weight(a) if weight is not None else list(a.c)
            acc.add(vec, inv)
        diff = (acc.arr % F.p - before) % F.p
        bv = _block_valuation(diff, 0)
        blocks.append(bv)
        d += 1
        if D is None and bv is None and d > 1:
            break
    return LSeriesTruncation(s, n, d, acc.value(), blocks)


def zeta_trunc(n: int, D: int | None = None, N: int = 64, base: FieldDescriptor | None = None) -> LSeriesTruncation:
    """sum_{a monic, deg a < D} a^(-n) modulo u^N (D adaptive when None)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    base = base or make_field(3)
    return _monic_sum(base, 0, n, D, N, 0, weight=lambda a: [1])


def pellarin_trunc(s: int, n: int, D: int | None = None, N: int = 64, M: int = 8,
                   base: FieldDescriptor | None = None) -> LSeriesTruncation:
    """sum_{a monic, deg a < D} a(t_1)...a(t_s) / a^n under the cap M."""
    if s < 1 or n < 1:
        raise ValueError("s and n must be >= 1")
    base = base or make_field(3)
    return _monic_sum(base, s, n, D, N, M)


def specialized_sum(n: int, js: Sequence[int], D: int, N: int, base: FieldDescriptor) -> LSeriesTruncation:
    """Pellarin sum with t_i evaluated at x^(q^(j_i)) before summing."""
    C = carlitz_cache(base)
    acc = _Accumulator(base, base, 0, 0, -sum(base.q**j for j in js) * D, N)
    for d in range(D):
        for a in enumerate_monic(base, d):
            num = Poly.one(base)
            for j in js:
                num = num * a.q_power(j)
            term = laurent(Frac(num, a ** n), base, N)
            acc.add([1], term)
    return LSeriesTruncation(0, n - sum(base.q**j for j in js), D, acc.value())


# -- exact right hand side -------------------------------------------------------

@dataclass(frozen=True)
class ExplicitTerm:
    coefficient: Frac          # includes 1 / prod D_(beta_i) over active i
    poles: tuple               # per variable: beta_i, or None when the variable is absent


@dataclass
class ExplicitRHS:
    """Rational value of pi^(-k) L(chi_1...chi_s, k) omega(t_1)...omega(t_s) as simple fractions.

    ``terms`` maps a pole vector to its coefficient; a pole beta_i on
    variable i stands for 1 / (x^(q^beta_i) - t_i).
    """

    q: int
    s: int
    k: int
    terms: dict
    first_sum: list
    second_sum: list

    def canonical(self) -> dict:
        return {p: c for p, c in self.terms.items() if c}

    def __eq__(self, o) -> bool:
        return isinstance(o, ExplicitRHS) and (self.s, self.k) == (o.s, o.k) and self.canonical() == o.canonical()

    def is_constant(self) -> bool:
        return all(all(b is None for b in p) for p in self.canonical())

    def constant(self) -> Frac | None:
        c = self.canonical()
        key = (None,) * self.s
        return c.get(key) if set(c) <= {key} else None

    def to_json(self) -> dict:
        return {"s": self.s, "k": self.k,
                "terms": [{"poles": list(p), "coefficient": str(c)} for p, c in sorted(
                    self.canonical().items(), key=lambda kv: tuple(-1 if b is None else b for b in kv[0]))]}

    def expand(self, base: FieldDescriptor, N: int, M: int) -> TateTruncation:
        """Geometric expansion of every fraction under the cap, modulo u^N."""
        total = None
        one = _tate_univariate(base, M, {0: u_power(base, 0)}, None)
        for poles, coeff in self.canonical().items():
            term = None
            for i, b in enumerate(poles):
                if b is None:
                    continue
                g = geometric_t(base, M, base.q**b, None).embed_variable(i, self.s)
                term = g if term is None else term * g
            if term is None:
                term = one.embed_variable(0, self.s)
            scalar = laurent(coeff, base, N + GUARD)
            term = (term * scalar).truncate(N)
            total = term if total is None else total + term
        if total is None:
            total = (one.embed_variable(0, self.s) * 0).truncate(N)
        return total


def _pole_vectors(q: int, s: int, budget: int) -> Iterator[tuple[int, ...]]:
    """All beta in N^s with sum q^beta_i <= budget."""
    def rec(i, left):
        if i == s:
            yield ()
            return
        b = 0
        while q**b <= left - (s - i - 1):
            for rest in rec(i + 1, left - q**b):
                yield (b,) + rest
            b += 1
    yield from rec(0, budget)


def explicit_rhs(s: int, k: int, base: FieldDescriptor | None = None) -> ExplicitRHS:
    from .bcnum import bc_table

    base = base or make_field(3)
    q = base.q
    if not 1 <= s <= 2 * (q - 1):
        raise ValueError(f"s must lie in [1, {2 * (q - 1)}]")
    if k < 1 or (k - s) % (q - 1):
        raise ValueError("k must be positive with k = s mod (q - 1)")
    C = carlitz_cache(base)
    table = bc_table(base)
    terms: dict = {}
    first, second = [], []
    for beta in _pole_vectors(q, s, k):
        m = k - sum(q**b for b in beta)
        if m < 0 or m % (q - 1):
            continue
        coeff = table.value(m) * Frac(Poly.one(base), C.carlitz_factorial(m))
        den = Poly.one(base)
        for b in beta:
            den = den * C.D(b)
        coeff = coeff * Frac(Poly.one(base), den)
        first.append((beta, m))
        terms[beta] = terms.get(beta, Frac.zero(base)) + coeff
    if s >= q:
        for alpha in itertools.combinations(range(s), s - q):
            for sub in _pole_vectors(q, len(alpha), k - 1) if alpha else [()]:
                if sum(q**b for b in sub) != k - 1:
                    continue
                poles = [None] * s
                den = Poly.one(base)
                for i, b in zip(alpha, sub):
                    poles[i] = b
                    den = den * C.D(b)
                key = tuple(poles)
                coeff = Frac(Poly.constant(base, base.neg(1)), den)
                second.append((alpha, sub))
                terms[key] = terms.get(key, Frac.zero(base)) + coeff
    return ExplicitRHS(q, s, k, terms, first, second)


# -- helpers for the verifiers ---------------------------------------------------

def _omega_product(base: FieldDescriptor, s: int, N: int, M: int, inverse: bool = False) -> TateTruncation:
    w = (omega_inverse if inverse else omega)(base, N, M)
    out = None
    for i in range(s):
        f = w.embed_variable(i, s)
        out = f if out is None else out * f
    return out


def _compare(name: str, params: dict, lhs: _Series, rhs: _Series, N: int, tail=None, **details) -> IdentityReport:
    lhs = lhs.truncate(N)
    rhs = rhs.truncate(N)
    cmp = tate_equal(lhs, rhs)
    prec = cmp.precision if cmp.precision is not None else N
    details.setdefault("agreement", cmp.agreement)
    return IdentityReport(name, params, cmp.equal, witness=cmp.witness, certified_precision=prec,
                          tail_bound=tail, details=details)


def _frac_of(z, base: FieldDescriptor) -> Frac:
    if isinstance(z, Frac):
        return z
    if isinstance(z, Poly):
        return Frac(z)
    from .algebra import parse_element

    return Frac.coerce(parse_element(str(z), base), base)


def _z_valuation(z: Frac) -> int:
    return z.den.deg - z.num.deg if z else 10**9


def _all_sum(base: FieldDescriptor, s: int, z: Frac, N: int, M: int, D: int | None,
             include_zero: bool) -> tuple[_Series, int, list]:
    """sum_{a in A, deg a < D} chi(a) / (z - a), adaptive in D when None."""
    vz = _z_valuation(z)
    low = min(0, -vz) if include_zero else 0
    acc = _Accumulator(base, base, s, M, low, N)
    if include_zero:
        acc.add([1], laurent(Frac(Poly.one(base), z.num) * Frac(z.den), base, N))
    blocks = []
    top = D if D is not None else MAX_DEGREE
    d = 0
    while d < top:
        before = acc.arr % base.p
        for a in _elements(base, d, monic=False):
            term = laurent(Frac(z.den, z.num - a * z.den), base, N)
            acc.add(list(a.c) if s else [1], term)
        diff = (acc.arr % base.p - before) % base.p
        bv = _block_valuation(diff, low)
        blocks.append(bv)
        d += 1
        if D is None and bv is None and d > 1:
            break
    return acc.value(), d, blocks


# -- verifiers ----------------------------------------------------------------------

def verify_pellarin_formula(D: int | None = None, N: int = 32, M: int = 6,
                            base: FieldDescriptor | None = None) -> IdentityReport:
    """sum chi_t(a)/a over monic a against its product form."""
    base = base or make_field(3)
    q = base.q
    with stopwatch() as sw:
        L = pellarin_trunc(1, 1, D, N, M, base)
        unit = u_power(base, 0).truncate(N)
        j = 1
        while q**j - 1 < N:
            unit = unit * geometric_t_scalar(base, q**j - 1, N)
            j += 1
        prod = _tate_univariate(base, M, {0: u_power(base, 0)}, None)
        j = 1
        while q**j < N:
            prod = prod * _tate_univariate(base, M, {0: u_power(base, 0), 1: -u_power(base, q**j)}, None)
            j += 1
        rhs = prod.truncate(N) * unit
    rep = _compare("pellarin-formula", {"q": q, "D": L.D, "N": N, "M": M}, L.value, rhs, N, L.tail_bound,
                   block_valuations=L.block_valuations)
    rep.millis = sw[0]
    return rep


def geometric_t_scalar(base: FieldDescriptor, step: int, prec: int):
    from .infty import geometric

    return geometric(base, step, prec)


def verify_carlitz_genfun(z="1/x", D: int | None = None, N: int = 32,
                          base: FieldDescriptor | None = None) -> IdentityReport:
    """pi/e_C(pi z) = sum_{a in A} 1/(z - a), plus the zeta coefficient checks."""
    from .bcnum import bc_table

    base = base or make_field(3)
    q = base.q
    z = _frac_of(z, base)
    if _z_valuation(z) <= 0:
        raise ValueError("|z| < 1 required")
    with stopwatch() as sw:
        W = N + GUARD
        lhs, Dused, blocks = _all_sum(base, 0, z, W, 0, D, include_zero=True)
        pb = pi_bar(base, W + 4)
        x = pb * laurent(z, base, W + 4)
        e = carlitz_exp(x, W + 4)
        rhs = pb * e.invert(W + 4)
        rhs = rhs.to_grade0()
        main = tate_equal(lhs.truncate(N), rhs.truncate(N))
        # coefficient of z^(n-1): zeta(n) = BC(n) pi^n / Pi(n)
        table = bc_table(base)
        coeff_ok = {}
        C = carlitz_cache(base)
        for n in range(q - 1, 3 * (q - 1) + 1, q - 1):
            zt = zeta_trunc(n, None, N, base)
            ratio = laurent(table.value(n) * Frac(Poly.one(base), C.carlitz_factorial(n)), base, N + 4 * n)
            val = (ratio * pi_bar(base, N + 4 * n) ** n).to_grade0()
            coeff_ok[n] = bool(tate_equal(zt.value.truncate(N), val.truncate(N)))
    passed = bool(main) and all(coeff_ok.values())
    prec = main.precision if main.precision is not None else N
    return IdentityReport("carlitz-genfun", {"q": q, "z": str(z), "D": Dused, "N": N}, passed,
                          witness=main.witness, certified_precision=prec, tail_bound=Dused, millis=sw[0],
                          details={"zeta_coefficients": {str(k): v for k, v in coeff_ok.items()},
                                   "block_valuations": blocks})


def main_theorem_rhs(s: int, z: Frac, base: FieldDescriptor, N: int, M: int) -> _Series:
    q = base.q
    W = N + GUARD
    pb = pi_bar(base, W)
    x = pb * laurent(z, base, W)
    e = carlitz_exp(x, W)
    f = agf(x, W, M)
    winv = omega_inverse(base, W, M)
    ratio = [(f * winv).embed_variable(i, s) for i in range(s)]
    first = pb * e.invert(W)
    for r in ratio:
        first = first * r
    total = first
    if s >= q:
        fs = [f.embed_variable(i, s) for i in range(s)]
        wis = [winv.embed_variable(i, s) for i in range(s)]
        allw = wis[0]
        for w in wis[1:]:
            allw = allw * w
        corr = None
        for alpha in itertools.combinations(range(s), s - q):
            term = allw
            for i in alpha:
                term = term * fs[i]
            corr = term if corr is None else corr + term
        total = total - pb * corr
    return total


def verify_main_theorem(s: int, z="1/x", D: int | None = None, N: int = 32, M: int = 4,
                        base: FieldDescriptor | None = None) -> IdentityReport:
    base = base or make_field(3)
    q = base.q
    if not 1 <= s <= 2 * (q - 1):
        raise ValueError(f"s must lie in [1, {2 * (q - 1)}]")
    z = _frac_of(z, base)
    if _z_valuation(z) <= 0:
        raise ValueError("|z| < 1 required")
    with stopwatch() as sw:
        lhs, Dused, blocks = _all_sum(base, s, z, N + GUARD, M, D, include_zero=False)
        rhs = main_theorem_rhs(s, z, base, N, M)
        pure = rhs.is_grade_pure(0)
        rhs0 = rhs.to_grade0() if pure else rhs
    rep = _compare("main-theorem", {"q": q, "s": s, "z": str(z), "D": Dused, "N": N, "M": M},
                   lhs, rhs0, N, Dused, rhs_in_K_inf=pure, block_valuations=blocks,
                   correction_terms=math.comb(s, s - q) if s >= q else 0)
    rep.passed = rep.passed and pure
    rep.millis = sw[0]
    return rep


def verify_explicit(s: int, k: int, D: int | None = None, N: int = 32, M: int = 4,
                    base: FieldDescriptor | None = None) -> IdentityReport:
    base = base or make_field(3)
    q = base.q
    with stopwatch() as sw:
        rhs_struct = explicit_rhs(s, k, base)
        W = N + GUARD + 2 * k
        L = pellarin_trunc(s, k, D, W, M, base)
        pb_inv = pi_bar(base, W + 2 * k).invert()
        lhs = L.value * _omega_product(base, s, W, M) * pb_inv ** k
        pure = lhs.is_grade_pure(0)
        lhs0 = lhs.to_grade0() if pure else lhs
        rhs = rhs_struct.expand(base, N, M)
    rep = _compare("explicit-L", {"q": q, "s": s, "k": k, "D": L.D, "N": N, "M": M}, lhs0, rhs, N,
                   L.tail_bound, lhs_in_K_inf=pure, explicit_terms=rhs_struct.to_json(),
                   block_valuations=L.block_valuations)
    rep.passed = rep.passed and pure
    rep.millis = sw[0]
    return rep


def verify_exp_functional_equation(x: _Series | None = None, N: int = 32,
                                   base: FieldDescriptor | None = None) -> IdentityReport:
    """e_C(theta z) = e_C(z)^q + theta e_C(z), at z = ``x`` (default pi/theta^2)."""
    base = base or make_field(3)
    with stopwatch() as sw:
        if x is None:
            x = pi_bar(base, N + 8) * laurent(Frac(Poly.one(base), Poly.monomial(base, 2)), base, N + 8)
        e1 = carlitz_exp(theta(base) * x, N + 4)
        e0 = carlitz_exp(x, N + 4)
        rhs = e0.q_power(1) + theta(base) * e0
    rep = _compare("exp-functional-equation", {"q": base.q, "N": N}, e1, rhs, N)
    rep.millis = sw[0]
    return rep


def verify_omega_difference(N: int = 32, M: int = 4, base: FieldDescriptor | None = None) -> IdentityReport:
    """tau(omega) = (t - x) omega."""
    base = base or make_field(3)
    with stopwatch() as sw:
        w = omega(base, N + 4, M)
        t = tate_variable(base, 1, M, 0)
        lhs = w.q_power(1)
        rhs = (t - theta(base)) * w
    rep = _compare("omega-difference", {"q": base.q, "N": N, "M": M}, lhs, rhs, N)
    rep.millis = sw[0]
    return rep


def verify_omega_eigen(a: Poly | None = None, N: int = 32, M: int = 4,
                       base: FieldDescriptor | None = None) -> IdentityReport:
    """Carlitz action of a on omega equals chi_t(a) omega."""
    base = base or make_field(3)
    a = a if a is not None else Poly.x(base)
    C = carlitz_cache(base)
    with stopwatch() as sw:
        W = N + 4 * (a.deg + 1) * base.q ** max(a.deg, 0)
        w = omega(base, W, M)
        lhs = C.carlitz_action(a).apply(w, lambda y: y.q_power(1))
        chi = _tate_univariate(base, M, {k: laurent(Poly.constant(base, c), base) for k, c in enumerate(a.c) if c},
                               None)
        rhs = chi * w
    rep = _compare("omega-eigen", {"q": base.q, "a": str(a), "N": N, "M": M}, lhs, rhs, N)
    rep.millis = sw[0]
    return rep


def verify_agf_at_period(N: int = 32, M: int = 4, base: FieldDescriptor | None = None) -> IdentityReport:
    """f_C(pi; t) = omega(t)."""
    base = base or make_field(3)
    with stopwatch() as sw:
        f = agf(pi_bar(base, N + 4), N + 4, M)
        w = omega(base, N + 4, M)
    rep = _compare("agf-period", {"q": base.q, "N": N, "M": M}, f, w, N)
    rep.millis = sw[0]
    return rep


def verify_agf_twist(x: _Series | None = None, N: int = 32, M: int = 4,
                     base: FieldDescriptor | None = None) -> IdentityReport:
    """tau(f_C)(x; t) = e_C(x) + (t - theta) f_C(x; t)."""
    base = base or make_field(3)
    with stopwatch() as sw:
        if x is None:
            x = pi_bar(base, N + 8) * laurent(Frac(Poly.one(base), Poly.x(base)), base, N + 8)
        f = agf(x, N + 4, M)
        t = tate_variable(base, 1, M, 0)
        lhs = f.q_power(1)
        rhs = (t - theta(base)) * f + carlitz_exp(x, N + 4)
    rep = _compare("agf-twist", {"q": base.q, "N": N, "M": M}, lhs, rhs, N)
    rep.millis = sw[0]
    return rep


def verify_omega_power(N: int = 32, M: int = 4, base: FieldDescriptor | None = None) -> IdentityReport:
    """omega(t)^q = (t^q - x) omega(t^q) under the cap."""
    base = base or make_field(3)
    q = base.q
    with stopwatch() as sw:
        w = omega(base, N + 4, M)
        lhs = w ** q
        t = tate_variable(base, 1, M, 0)
        rhs = (t ** q - theta(base)) * w.substitute_power(0, q)
    rep = _compare("omega-power", {"q": q, "N": N, "M": M}, lhs, rhs, N)
    rep.millis = sw[0]
    return rep


def character_sum_check(v: Poly, n: int, D: int | None = None, N: int = 32) -> IdentityReport:
    """sum_a a(lambda)^(q^d - 1) / a^n = (1 - v^(-n)) zeta(n) over monic a."""
    base = v.field
    q = base.q
    d = v.deg
    big, orbit = roots_in_extension(v, d)
    lam = orbit[0]
    from .algebra import FieldElement

    def weight(a: Poly):
        val = a.embed(big)(FieldElement(big, lam))
        w = val ** (q**d - 1) if val else FieldElement(big, 0)
        return [w.value]

    with stopwatch() as sw:
        lhs = _monic_sum(base, 0, n, D, N, 0, weight=weight, F=big)
        zt = zeta_trunc(n, lhs.D, N + n * d, base)
        vn = laurent(Frac(Poly.one(base), v ** n), base, N + n * d)
        rhs = ((u_power(base, 0) - vn) * zt.value).change_field(big)
    rep = _compare("char-sum", {"q": q, "v": str(v), "n": n, "D": lhs.D, "N": N}, lhs.value, rhs, N,
                   lhs.tail_bound, block_valuations=lhs.block_valuations)
    rep.millis = sw[0]
    return rep


def omega_root_product(v: Poly, N: int = 24) -> IdentityReport:
    """(-1)^d v = prod_{i=1..d} omega(lambda^(q^i))^(q-1)."""
    base = v.field
    q = base.q
    d = v.deg
    big, orbit = roots_in_extension(v, d)
    with stopwatch() as sw:
        M = N + 2
        w = omega(base, N + 4, M).change_field(big)
        prod = None
        lam = orbit[0]
        for i in range(1, d + 1):
            root = _q_power_const(big, lam, q, i)
            val = w.substitute(0, (big, root))
            term = val ** (q - 1)
            prod = term if prod is None else prod * term
        pure = prod.is_grade_pure(0)
        lhs = prod.to_grade0() if pure else prod
        sign = base.neg(1) if d % 2 else 1
        rhs = laurent(v.scale(sign), base).change_field(big)
    rep = _compare("omega-root-product", {"q": q, "v": str(v), "N": N}, lhs, rhs, N, in_K_inf=pure)
    rep.passed = rep.passed and pure
    rep.millis = sw[0]
    return rep


def _q_power_const(F: FieldDescriptor, a: int, q: int, i: int) -> int:
    return F.pow(a, q**i)


# -- limits ---------------------------------------------------------------------

@dataclass
class _Stage:
    index: int
    distance: int   # u-valuation of (stage value - limit); the comparison precision when zero


def _stage_report(name: str, params: dict, stages: list[_Stage], prec: int, q: int, threshold: int) -> IdentityReport:
    vals = [st.distance for st in stages]
    decreasing = all(a < b for a, b in zip(vals, vals[1:])) or (
        all(a < b for a, b in zip(vals[:-1], vals[1:-1])) and vals[-1] >= prec and vals[-2] < vals[-1])
    final_ok = vals[-1] > threshold
    return IdentityReport(name, params, decreasing and final_ok, certified_precision=prec,
                          details={"stages": [st.index for st in stages], "distance_exponents": vals,
                                   "threshold_exponent": threshold})


def _distance(a: _Series, b: _Series, prec: int) -> int:
    diff = (a - b).truncate(prec)
    if diff.is_zero():
        return diff.prec if diff.prec is not None else prec
    return math.floor(diff.valuation)


def _b_tate(C: CarlitzCache, e: int, M: int) -> TateTruncation:
    b = C.b(e, "t")
    coeffs = {k[0]: laurent(c, C.field) for k, c in b.terms.items()} if hasattr(b, "terms") else {}
    return _tate_univariate(C.field, M, coeffs, None)


def _stages_until(fn, start: int, prec: int, max_stage: int = 12) -> list[_Stage]:
    """Three consecutive stages ending at the first one whose distance reaches ``prec``."""
    out = []
    e = start
    while e <= max_stage:
        out.append(_Stage(e, fn(e)))
        if out[-1].distance >= prec and len(out) >= 3:
            break
        e += 1
    return out[-3:]


def verify_limits(which: str, N: int = 24, M: int = 2, z="1/x", stages: Sequence[int] | None = None,
                  base: FieldDescriptor | None = None) -> IdentityReport:
    """Finite-stage approximations approaching their limits in the Gauss norm.

    ``which`` is one of b-over-ell (item 1), b-product (item 2), b-zero
    (item 3), ed-to-exp, wagner-agf.
    """
    base = base or make_field(3)
    q = base.q
    C = carlitz_cache(base)
    W = N + GUARD
    threshold = N // 2
    params = {"q": q, "which": which, "N": N, "M": M}
    with stopwatch() as sw:
        if which == "b-over-ell":
            limit = -(pi_bar(base, W) * omega_inverse(base, W, M))

            def fn(e):
                b = _b_tate(C, e + 1, M)
                val = b * laurent(Frac(Poly.one(base), C.ell(e)), base, W + _deg_b(q, e + 1))
                return _distance(val, limit, N)

            start = 0
        elif which == "b-product":
            limit = -(pi_bar(base, W) * _omega_product(base, q, W, M, inverse=True))

            def fn(e):
                val = None
                for i in range(q):
                    bi = _b_tate(C, e, M).embed_variable(i, q)
                    val = bi if val is None else val * bi
                val = val * laurent(Frac(Poly.one(base), C.ell(e)), base, W + q * _deg_b(q, e))
                return _distance(val, limit, N)

            start = 1
        elif which == "b-zero":
            def fn(e):
                val = _b_tate(C, e, M) * laurent(Frac(Poly.one(base), C.ell(e)), base, W + _deg_b(q, e))
                zero = val * 0
                return _distance(val, zero, N)

            start = 1
        elif which == "ed-to-exp":
            zf = _frac_of(z, base)
            params["z"] = str(zf)
            pb = pi_bar(base, W + 2)
            limit = (pb.invert(W + 4) * carlitz_exp(pb * laurent(zf, base, W + 4), W + 4)).to_grade0()

            def fn(d):
                E = C.E(d)
                val = Frac.zero(base)
                for (k,), c in E.terms.items():
                    val = val + c * zf ** k
                val = val * Frac(C.ell(d))
                return _distance(laurent(val, base, W), limit, N)

            start = 0
        elif which == "wagner-agf":
            zf = _frac_of(z, base)
            params["z"] = str(zf)
            pb = pi_bar(base, W + 2)
            limit = agf(pb * laurent(zf, base, W + 4), W, M)
            w = omega(base, W, M)

            def fn(d):
                acc = None
                for j in range(d):
                    E = C.E(j)
                    ev = Frac.zero(base)
                    for (k,), c in E.terms.items():
                        ev = ev + c * zf ** k
                    term = _b_tate(C, j, M) * laurent(ev, base, W + _deg_b(q, j) + 4)
                    acc = term if acc is None else acc + term
                return _distance(acc * w, limit, N)

            start = 1
        else:
            raise ValueError(f"unknown limit {which!r}")
        if stages is None:
            st = _stages_until(fn, start, N)
        else:
            st = [_Stage(e, fn(e)) for e in stages]
    rep = _stage_report("limits", params, st, N, q, threshold)
    rep.millis = sw[0]
    return rep


def _deg_b(q: int, e: int) -> int:
    return sum(q**j for j in range(e))


def verify_period_limit(N: int = 16, base: FieldDescriptor | None = None) -> IdentityReport:
    """(x - t) omega(t) evaluated at t = x gives pi."""
    base = base or make_field(3)
    q = base.q
    M = N // (q - 1) + 2
    with stopwatch() as sw:
        w = omega(base, N + 2 * q * M, M)
        t = tate_variable(base, 1, M, 0)
        P = ((theta(base) - t) * w).with_tail(q, -1)
        val = P.substitute(0, theta(base))
    rep = _compare("period-limit", {"q": q, "N": N}, val, pi_bar(base, N + 2), N)
    rep.millis = sw[0]
    return rep
