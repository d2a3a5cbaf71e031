"""Sparse multivariate polynomials over the rings used in this package.

Coefficients live in one of three rings: constants ``F_q``
(``FieldElement``), polynomials ``A = F_q[x]`` (``Poly``) or fractions
``K = F_q(x)`` (``Frac``).  Terms are stored in a dict keyed by exponent
tuples; zero coefficients are never stored.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Mapping, Sequence

from .algebra import FieldDescriptor, FieldElement, Frac, Poly, format_frac, format_poly


class Ring:
    """Coefficient ring descriptor: the constants, A or K over a fixed F_q."""

    kind = "abstract"

    def __init__(self, field: FieldDescriptor) -> None:
        self.field = field

    def __eq__(self, o: object) -> bool:
        return type(o) is type(self) and o.field == self.field  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        return hash((self.kind, self.field))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.field.label})"

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def coerce(self, x):
        raise NotImplementedError

    def unit_inverse(self, x):
        raise NotImplementedError

    def serialize(self, x):
        raise NotImplementedError

    def frobenius(self, x, k: int):
        return x.frobenius(k)


class ConstRing(Ring):
    kind = "const"

    def coerce(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            return x
        if isinstance(x, int):
            return FieldElement(self.field, self.field.coerce(x))
        raise TypeError(f"cannot coerce {type(x).__name__} into {self.field.label}")

    def unit_inverse(self, x: FieldElement) -> FieldElement:
        return x.inverse()

    def serialize(self, x: FieldElement):
        return x.value


class PolyRing(Ring):
    kind = "A"

    def coerce(self, x) -> Poly:
        if isinstance(x, Poly):
            return x
        if isinstance(x, FieldElement):
            return Poly(self.field, [x.value])
        if isinstance(x, int):
            return Poly.constant(self.field, x)
        if isinstance(x, Frac) and x.is_polynomial():
            return x.num
        raise TypeError(f"cannot coerce {type(x).__name__} into A")

    def unit_inverse(self, x: Poly) -> Poly:
        if x.deg != 0:
            raise ZeroDivisionError(f"{format_poly(x)} is not a unit of A")
        return Poly(self.field, [self.field.inv(x.c[0])])

    def serialize(self, x: Poly):
        return x.to_list()


class FracField(Ring):
    kind = "K"

    def coerce(self, x) -> Frac:
        if isinstance(x, Frac):
            return x
        return Frac.coerce(x, self.field)

    def unit_inverse(self, x: Frac) -> Frac:
        return x.inverse()

    def serialize(self, x: Frac):
        return {"num": x.num.to_list(), "den": x.den.to_list()}


def _fmt(c) -> str:
    if isinstance(c, Frac):
        return format_frac(c)
    if isinstance(c, Poly):
        return format_poly(c)
    return str(c.value) if isinstance(c, FieldElement) else str(c)


class MultiPoly:
    """Polynomial in named variables with coefficients in a ``Ring``."""

    __slots__ = ("ring", "vars", "terms")

    def __init__(self, ring: Ring, variables: Sequence[str], terms: Mapping[tuple[int, ...], object] | None = None,
                 *, _trusted: bool = False) -> None:
        self.ring = ring
        self.vars = tuple(variables)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("repeated variable name")
        if _trusted:
            self.terms = terms  # type: ignore[assignment]
            return
        clean: dict[tuple[int, ...], object] = {}
        n = len(self.vars)
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != n or any(k < 0 for k in e):
                raise ValueError(f"bad exponent {e} for variables {self.vars}")
            c = ring.coerce(c)
            if c:
                prev = clean.get(e)
                if prev is not None:
                    c = prev + c
                    if not c:
                        del clean[e]
                        continue
                clean[e] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def constant(cls, ring: Ring, variables: Sequence[str], c) -> "MultiPoly":
        c = ring.coerce(c)
        n = len(tuple(variables))
        return cls(ring, variables, {(0,) * n: c} if c else {}, _trusted=True)

    @classmethod
    def zero(cls, ring: Ring, variables: Sequence[str]) -> "MultiPoly":
        return cls(ring, variables, {}, _trusted=True)

    @classmethod
    def one(cls, ring: Ring, variables: Sequence[str]) -> "MultiPoly":
        return cls.constant(ring, variables, 1)

    @classmethod
    def var(cls, ring: Ring, variables: Sequence[str], name: str) -> "MultiPoly":
        variables = tuple(variables)
        e = tuple(1 if v == name else 0 for v in variables)
        if sum(e) != 1:
            raise ValueError(f"unknown variable {name!r}")
        return cls(ring, variables, {e: ring.one}, _trusted=True)

    @classmethod
    def univariate(cls, ring: Ring, variables: Sequence[str], name: str, coeffs: Mapping[int, object]) -> "MultiPoly":
        """sum_k coeffs[k] * name^k."""
        variables = tuple(variables)
        i = variables.index(name)
        terms = {}
        for k, c in coeffs.items():
            e = [0] * len(variables)
            e[i] = k
            terms[tuple(e)] = c
        return cls(ring, variables, terms)

    # -- structure -----------------------------------------------------------
    def _same(self, o: "MultiPoly") -> None:
        if o.ring != self.ring or o.vars != self.vars:
            raise TypeError(f"incompatible polynomials: {self.ring}{self.vars} vs {o.ring}{o.vars}")

    def _lift(self, o) -> "MultiPoly":
        if isinstance(o, MultiPoly):
            self._same(o)
            return o
        return MultiPoly.constant(self.ring, self.vars, o)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, o) -> bool:
        if isinstance(o, MultiPoly):
            return o.ring == self.ring and o.vars == self.vars and o.terms == self.terms
        try:
            return self == MultiPoly.constant(self.ring, self.vars, o)
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self.terms.items())))

    def coefficient(self, exps: Sequence[int] | Mapping[str, int]):
        if isinstance(exps, Mapping):
            exps = tuple(exps.get(v, 0) for v in self.vars)
        return self.terms.get(tuple(exps), self.ring.zero)

    def monomials(self) -> list[tuple[int, ...]]:
        """Exponent tuples in graded lexicographic order."""
        return sorted(self.terms, key=lambda e: (sum(e), e))

    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            raise ValueError("degree of the zero polynomial")
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * len(self.vars), self.ring.zero)

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, o) -> "MultiPoly":
        o = self._lift(o)
        if len(o.terms) > len(self.terms):
            big, small = o.terms, self.terms
        else:
            big, small = self.terms, o.terms
        out = dict(big)
        for e, c in small.items():
            prev = out.get(e)
            if prev is None:
                out[e] = c
            else:
                s = prev + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MultiPoly(self.ring, self.vars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.ring, self.vars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, o) -> "MultiPoly":
        return self + (-self._lift(o))

    def __rsub__(self, o) -> "MultiPoly":
        return self._lift(o) - self

    def scale(self, c) -> "MultiPoly":
        c = self.ring.coerce(c)
        if not c:
            return MultiPoly.zero(self.ring, self.vars)
        out = {}
        for e, a in self.terms.items():
            v = a * c
            if v:
                out[e] = v
        return MultiPoly(self.ring, self.vars, out, _trusted=True)

    def __mul__(self, o) -> "MultiPoly":
        if not isinstance(o, MultiPoly):
            return self.scale(o)
        self._same(o)
        a, b = self.terms, o.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[tuple[int, ...], object] = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                v = ca * cb
                prev = get(e)
                out[e] = v if prev is None else prev + v
        return MultiPoly(self.ring, self.vars, {e: c for e, c in out.items() if c}, _trusted=True)

    def __rmul__(self, o) -> "MultiPoly":
        return self.scale(o)

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.one(self.ring, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def map_coefficients(self, f: Callable[[object], object], ring: Ring | None = None) -> "MultiPoly":
        ring = ring or self.ring
        return MultiPoly(ring, self.vars, {e: f(c) for e, c in self.terms.items()})

    def frobenius_twist(self, k: int) -> "MultiPoly":
        """Raise every coefficient to the power q^k; monomials stay put."""
        m = self.ring.field.m
        return self.map_coefficients(lambda c: self.ring.frobenius(c, m * k))

    def change_ring(self, ring: Ring) -> "MultiPoly":
        return MultiPoly(ring, self.vars, {e: ring.coerce(c) for e, c in self.terms.items()})

    def embed(self, variables: Sequence[str], rename: Mapping[str, str] | None = None) -> "MultiPoly":
        """Same polynomial viewed in a larger variable list (optionally renaming)."""
        variables = tuple(variables)
        rename = dict(rename or {})
        idx = [variables.index(rename.get(v, v)) for v in self.vars]
        n = len(variables)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in zip(idx, e):
                ne[i] += k
            out[tuple(ne)] = c
        return MultiPoly(self.ring, variables, out, _trusted=True)

    def derivative(self, var: str) -> "MultiPoly":
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            v = c * k
            if v:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = v
        return MultiPoly(self.ring, self.vars, out, _trusted=True)

    def substitute(self, bindings: Mapping[str, object]):
        """Simultaneous substitution.

        Values are ring elements or ``MultiPoly`` objects over the same ring.
        Remaining variables keep their order, followed by new variables that
        appear in ``MultiPoly`` values.  When every variable is bound to a
        ring element the result is a ring element.
        """
        for name in bindings:
            if name not in self.vars:
                raise ValueError(f"unknown variable {name!r}")
        keep = [v for v in self.vars if v not in bindings]
        extra: list[str] = []
        for val in bindings.values():
            if isinstance(val, MultiPoly):
                if val.ring != self.ring:
                    raise TypeError("substituted polynomial has a different ring")
                for v in val.vars:
                    if v not in keep and v not in extra:
                        extra.append(v)
        target = tuple(keep + extra)
        full = not target
        ring = self.ring
        values: dict[str, MultiPoly] = {}
        scalar: dict[str, object] = {}
        for name, val in bindings.items():
            if isinstance(val, MultiPoly):
                values[name] = val.embed(target)
            else:
                scalar[name] = val
        if full and not values:
            acc = None
            for e, c in self.terms.items():
                term = c
                for v, k in zip(self.vars, e):
                    if k:
                        term = term * (scalar[v] ** k)
                acc = term if acc is None else acc + term
            return acc if acc is not None else ring.zero
        powers: dict[tuple[str, int], object] = {}

        def pw(name: str, k: int):
            key = (name, k)
            if key not in powers:
                base = values[name] if name in values else scalar[name]
                powers[key] = base**k
            return powers[key]

        keep_idx = [target.index(v) if v in target else None for v in self.vars]
        result = MultiPoly.zero(ring, target)
        for e, c in self.terms.items():
            mono = [0] * len(target)
            coeff = c
            poly_factor = None
            for v, k, ti in zip(self.vars, e, keep_idx):
                if v in bindings:
                    if not k:
                        continue
                    f = pw(v, k)
                    if isinstance(f, MultiPoly):
                        poly_factor = f if poly_factor is None else poly_factor * f
                    else:
                        coeff = coeff * f
                else:
                    mono[ti] += k  # type: ignore[index]
            coeff = ring.coerce(coeff)
            term = MultiPoly(ring, target, {tuple(mono): coeff} if coeff else {}, _trusted=True)
            if poly_factor is not None:
                term = term * poly_factor
            result = result + term
        if full:
            return result.constant_value()
        return result

    def _main_var(self, g: "MultiPoly") -> int:
        for i in range(len(self.vars) - 1, -1, -1):
            if any(e[i] for e in g.terms):
                return i
        return len(self.vars) - 1

    def exact_divide(self, g: "MultiPoly", var: str | None = None) -> "MultiPoly":
        """Quotient f/g, raising ``ValueError`` if g does not divide f.

        Division runs in ``var`` (default: the last variable in which g has
        positive degree); the leading coefficient of g there must be a unit
        of the coefficient ring times no other variable.
        """
        self._same(g)
        if not g.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        i = self.vars.index(var) if var is not None else self._main_var(g)
        dg = max(e[i] for e in g.terms)
        lead = {e: c for e, c in g.terms.items() if e[i] == dg}
        if len(lead) != 1:
            raise ValueError("leading coefficient is not a monomial")
        (le, lc), = lead.items()
        if any(k for j, k in enumerate(le) if j != i):
            raise ValueError("leading coefficient involves other variables")
        inv = self.ring.unit_inverse(lc)
        rem = dict(self.terms)
        quo: dict[tuple[int, ...], object] = {}
        gterms = list(g.terms.items())
        while rem:
            top = max(e[i] for e in rem)
            if top < dg:
                break
            for e in [e for e in rem if e[i] == top]:
                c = rem.get(e)
                if c is None:
                    continue
                qc = c * inv
                qe = list(e)
                qe[i] -= dg
                qe_t = tuple(qe)
                quo[qe_t] = quo[qe_t] + qc if qe_t in quo else qc
                for ge, gc in gterms:
                    te = tuple(a + b for a, b in zip(qe_t, ge))
                    v = rem.get(te)
                    s = -(qc * gc) if v is None else v - qc * gc
                    if s:
                        rem[te] = s
                    else:
                        rem.pop(te, None)
        if rem:
            raise ValueError("polynomial division is not exact")
        return MultiPoly(self.ring, self.vars, {e: c for e, c in quo.items() if c}, _trusted=True)

    # -- output ------------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "ring": self.ring.kind,
            "field": [self.ring.field.p, self.ring.field.m],
            "vars": list(self.vars),
            "terms": [[list(e), self.ring.serialize(self.terms[e])] for e in self.monomials()],
        }

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in reversed(self.monomials()):
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            c = _fmt(self.terms[e])
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)

    def first_difference(self, o: "MultiPoly"):
        """A monomial where self and o differ, with both coefficients, or None."""
        self._same(o)
        for e in sorted(set(self.terms) | set(o.terms), key=lambda e: (sum(e), e)):
            a, b = self.coefficient(e), o.coefficient(e)
            if a != b:
                return e, a, b
        return None


def product(factors: Iterable[MultiPoly], ring: Ring, variables: Sequence[str]) -> MultiPoly:
    acc = MultiPoly.one(ring, variables)
    for f in factors:
        acc = acc * f
    return acc


def subsets(n: int, k: int) -> Iterable[tuple[int, ...]]:
    """k-element subsets of range(n) as sorted tuples."""
    return itertools.combinations(range(n), k)
