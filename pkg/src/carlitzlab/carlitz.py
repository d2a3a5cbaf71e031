"""Carlitz module quantities over A = F_q[x].

All values are memoised per base field in a ``CarlitzCache``; cache entries
are filled under a lock so concurrent readers see complete values.
"""

from __future__ import annotations

import threading
from functools import lru_cache
from typing import Callable, Sequence

from .algebra import FieldDescriptor, Frac, Poly, make_field
from .mvpoly import ConstRing, FracField, MultiPoly, PolyRing, Ring
from .reports import IdentityReport, stopwatch


def base_q_digits(n: int, q: int) -> list[int]:
    """Digits of n in base q, least significant first (empty for n = 0)."""
    if n < 0:
        raise ValueError("negative integer")
    out = []
    while n:
        n, r = divmod(n, q)
        out.append(r)
    return out


def digit_sum(n: int, q: int) -> int:
    return sum(base_q_digits(n, q))


class TwistedPolynomial:
    """Element sum_i c_i tau^i of A{tau}, where tau(a) = a^q."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldDescriptor, coeffs: Sequence[Poly]) -> None:
        self.field = field
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)

    def __eq__(self, o) -> bool:
        return isinstance(o, TwistedPolynomial) and self.coeffs == o.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return "TwistedPolynomial(" + " + ".join(f"({c})t^{i}" for i, c in enumerate(self.coeffs)) + ")"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, o: "TwistedPolynomial") -> "TwistedPolynomial":
        n = max(len(self.coeffs), len(o.coeffs))
        z = Poly.zero(self.field)
        a = list(self.coeffs) + [z] * (n - len(self.coeffs))
        b = list(o.coeffs) + [z] * (n - len(o.coeffs))
        return TwistedPolynomial(self.field, [x + y for x, y in zip(a, b)])

    def __mul__(self, o: "TwistedPolynomial") -> "TwistedPolynomial":
        # (a tau^i)(b tau^j) = a b^(q^i) tau^(i+j)
        if not self.coeffs or not o.coeffs:
            return TwistedPolynomial(self.field, [])
        out = [Poly.zero(self.field)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b.q_power(i)
        return TwistedPolynomial(self.field, out)

    def scale(self, c: int) -> "TwistedPolynomial":
        return TwistedPolynomial(self.field, [x.scale(c) for x in self.coeffs])

    def coefficient(self, i: int) -> Poly:
        return self.coeffs[i] if i < len(self.coeffs) else Poly.zero(self.field)

    def apply(self, x, twist: Callable | None = None):
        """sum_i c_i tau^i(x); ``twist`` defaults to ``x.q_power``."""
        tw = twist or (lambda y: y.q_power(1))
        acc = None
        cur = x
        for i, c in enumerate(self.coeffs):
            if i:
                cur = tw(cur)
            if c:
                term = cur * c if not isinstance(cur, (Poly, Frac)) else c * cur
                acc = term if acc is None else acc + term
        return acc if acc is not None else x * 0


class CarlitzCache:
    """Memoised Carlitz quantities for one base field F_q."""

    def __init__(self, field: FieldDescriptor) -> None:
        self.field = field
        self.q = field.q
        self.A = PolyRing(field)
        self.K = FracField(field)
        self.Fq = ConstRing(field)
        self._lock = threading.RLock()
        self._store: dict[tuple, object] = {}

    def _memo(self, key: tuple, build: Callable[[], object]):
        val = self._store.get(key)
        if val is None:
            with self._lock:
                val = self._store.get(key)
                if val is None:
                    val = build()
                    self._store[key] = val
        return val

    @property
    def theta(self) -> Poly:
        return Poly.x(self.field)

    # -- scalars in A ------------------------------------------------------
    def bracket(self, d: int) -> Poly:
        """[d] = x^(q^d) - x."""
        if d < 1:
            raise ValueError("bracket index must be >= 1")
        return self._memo(("bracket", d), lambda: Poly.monomial(self.field, self.q**d) - self.theta)

    def bracket_power(self, d: int, e: int) -> Poly:
        """[d]^e using ([d])^(p^k) = x^(p^k q^d) - x^(p^k)."""
        if e < 0:
            raise ValueError("negative exponent")

        def build() -> Poly:
            F = self.field
            result = Poly.one(F)
            k, rest = 0, e
            while rest:
                rest, digit = divmod(rest, F.p)
                if digit:
                    piece = self.bracket(d).frobenius(k)
                    for _ in range(digit):
                        result = result * piece
                k += 1
            return result

        return self._memo(("bracket_power", d, e), build)

    def D(self, j: int) -> Poly:
        """D_j = [j] D_{j-1}^q, D_0 = 1: the product of monic polynomials of degree j."""
        if j < 0:
            raise ValueError("negative index")
        if j == 0:
            return Poly.one(self.field)
        return self._memo(("D", j), lambda: self.bracket(j) * self.D(j - 1).q_power(1))

    def ell(self, e: int) -> Poly:
        """prod_{j=1}^{e} (x - x^(q^j)); ell_0 = 1.

        Defined as b_e twisted once and evaluated at x.  This is
        (-1)^e prod (x^(q^j) - x) = (-1)^e L_e, L_e the lcm of monic degree-e
        polynomials.
        """
        if e < 0:
            raise ValueError("negative index")
        if e == 0:
            return Poly.one(self.field)
        return self._memo(("ell", e), lambda: self.ell(e - 1) * (-self.bracket(e)))

    def carlitz_factorial(self, n: int) -> Poly:
        """Pi(n) = prod_i D_i^(n_i) over the base-q digits n_i of n."""

        def build() -> Poly:
            acc = Poly.one(self.field)
            for i, d in enumerate(base_q_digits(n, self.q)):
                if d:
                    acc = acc * self.D(i) ** d
            return acc

        return self._memo(("fact", n), build)

    def factorial_bracket_exponents(self, n: int, parts: Sequence[int]) -> dict[int, int]:
        """Exponent of [j] in Pi(n) / prod Pi(k_i), from Pi(n) = prod_j [j]^floor(n/q^j)."""
        if n < 0 or any(k < 0 for k in parts):
            raise ValueError("negative argument")
        out = {}
        j = 1
        top = max([n, *parts]) if parts else n
        while self.q**j <= top:
            qj = self.q**j
            e = n // qj - sum(k // qj for k in parts)
            if e:
                out[j] = e
            j += 1
        return out

    def factorial_ratio(self, n: int, parts: Sequence[int]) -> Frac:
        """Pi(n) / prod_i Pi(k_i) as a reduced fraction (parts need not sum to n)."""
        num = Poly.one(self.field)
        den = Poly.one(self.field)
        for j, e in self.factorial_bracket_exponents(n, parts).items():
            if e > 0:
                num = num * self.bracket_power(j, e)
            else:
                den = den * self.bracket_power(j, -e)
        return Frac(num, den)

    def bracket_multinomial(self, n: int, parts: Sequence[int], verify: bool = False) -> Poly:
        """Pi(n) / prod Pi(k_i) for parts summing to n; an element of A.

        Integrality is certified by the bracket exponents
        floor(n/q^j) - sum floor(k_i/q^j) being nonnegative; ``verify`` also
        checks the value by exact division of the digit products.
        """
        if sum(parts) != n:
            raise ValueError(f"parts {tuple(parts)} do not sum to {n}")
        exps = self.factorial_bracket_exponents(n, parts)
        if any(e < 0 for e in exps.values()):
            raise AssertionError("negative bracket exponent")  # impossible by floor superadditivity
        acc = Poly.one(self.field)
        for j, e in sorted(exps.items()):
            acc = acc * self.bracket_power(j, e)
        if verify:
            den = Poly.one(self.field)
            for k in parts:
                den = den * self.carlitz_factorial(k)
            quo, rem = divmod(self.carlitz_factorial(n), den)
            if rem or quo != acc:
                raise AssertionError(f"multinomial mismatch for {n}, {tuple(parts)}")
        return acc

    # -- polynomials in auxiliary variables -----------------------------------
    def b(self, d: int, var: str = "t") -> MultiPoly:
        """b_d(t) = prod_{j<d} (t - x^(q^j)) in A[t]."""
        if d < 0:
            raise ValueError("negative index")

        def build() -> MultiPoly:
            vs = (var,)
            t = MultiPoly.var(self.A, vs, var)
            acc = MultiPoly.one(self.A, vs)
            for j in range(d):
                acc = acc * (t - Poly.monomial(self.field, self.q**j))
            return acc

        return self._memo(("b", d, var), build)

    def b_value(self, d: int, t) -> object:
        """b_d evaluated at a ring element t (Poly, Frac or field int)."""
        acc = None
        for j in range(d):
            f = t - Poly.monomial(self.field, self.q**j)
            acc = f if acc is None else acc * f
        return acc if acc is not None else Poly.one(self.field)

    def E(self, d: int, var: str = "z") -> MultiPoly:
        """E_d(z) = sum_{i<=d} z^(q^i) / (D_i ell_(d-i)^(q^i)) in K[z]."""
        if d < 0:
            raise ValueError("negative index")

        def build() -> MultiPoly:
            coeffs = {}
            for i in range(d + 1):
                coeffs[self.q**i] = Frac(Poly.one(self.field), self.D(i) * self.ell(d - i).q_power(i))
            return MultiPoly.univariate(self.K, (var,), var, coeffs)

        return self._memo(("E", d, var), build)

    def carlitz_action(self, a: Poly) -> TwistedPolynomial:
        """C_a = a(tau + x) in A{tau}."""
        F = self.field
        ctheta = TwistedPolynomial(F, [self.theta, Poly.one(F)])
        acc = TwistedPolynomial(F, [])
        for c in reversed(a.c):
            acc = acc * ctheta + TwistedPolynomial(F, [Poly(F, [c])])
        return acc

    def chi(self, a: Poly, var: str = "t", ring: Ring | None = None) -> MultiPoly:
        """chi_t(a): a with x replaced by the variable ``var``."""
        ring = ring or self.K
        return MultiPoly.univariate(ring, (var,), var, {k: Poly(self.field, [c]) for k, c in enumerate(a.c) if c})

    def twist(self, i: int, f: MultiPoly) -> MultiPoly:
        """tau^i applied to coefficients (raised to q^i); variables untouched."""
        return f.frobenius_twist(i)

    def verify_ed_recursion(self, d: int) -> IdentityReport:
        """E_d^q = E_d + [d+1] E_(d+1)."""
        with stopwatch() as sw:
            lhs = self.E(d) ** self.q
            rhs = self.E(d) + self.E(d + 1).scale(Frac(self.bracket(d + 1)))
            diff = lhs.first_difference(rhs)
        return IdentityReport("ed-recursion", {"q": self.q, "d": d}, diff is None,
                              witness=None if diff is None else list(diff[0]), millis=sw[0])


@lru_cache(maxsize=None)
def carlitz_cache(field: FieldDescriptor) -> CarlitzCache:
    return CarlitzCache(field)


def cache_for(p: int, m: int = 1) -> CarlitzCache:
    return carlitz_cache(make_field(p, m))
