"""Finite fields, polynomials over them and their fraction field.

Field elements are plain ints in ``[0, q)``: the base-``p`` digits of the int
are the coordinates in the power basis of the chosen generator.  Prime-field
values therefore encode as themselves in every extension of the same
characteristic.  ``Poly`` is immutable and stores a tuple of encoded
coefficients, lowest degree first.  The indeterminate prints as ``x``.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels

_TABLE_LIMIT = 1 << 12


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n**0.5) + 1))


def _fp_irreducible(c: Sequence[int], p: int) -> bool:
    # c monic over F_p; Rabin-style test via gcd(x^{p^i} - x, c)
    f = list(c)
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    xp = [0, 1]
    for i in range(1, n // 2 + 1):
        xp = _fp_powmod(xp, p, f, p)
        h = list(xp) + [0] * max(0, 2 - len(xp))
        h[1] = (h[1] - 1) % p
        while h and not h[-1]:
            h.pop()
        if len(kernels.gcd(h, f, p)) > 1:
            return False
    return True


def _fp_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = kernels.divmod_(a, f, p)[1]
    while e:
        if e & 1:
            result = kernels.divmod_(kernels.mul(result, base, p), f, p)[1]
        e >>= 1
        if e:
            base = kernels.divmod_(kernels.mul(base, base, p), f, p)[1]
    return result


class FieldDescriptor:
    """The finite field F_q, q = p^m, with lazily built operation tables."""

    __slots__ = ("p", "m", "q", "modulus", "label", "_add", "_mul", "_neg", "_inv", "_frob", "_gen",
                 "_reduce")

    def __init__(self, p: int, m: int, modulus: tuple[int, ...] | None) -> None:
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = modulus
        self.label = f"F_{self.q}"
        self._add = self._mul = self._neg = self._inv = self._frob = None
        self._gen: int | None = None
        self._reduce = None

    def __repr__(self) -> str:
        return f"FieldDescriptor(p={self.p}, m={self.m}, modulus={self.modulus})"

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, FieldDescriptor) and self.p == other.p and self.m == other.m
                and self.modulus == other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __reduce__(self):
        return (make_field, (self.p, self.m))

    @property
    def is_prime(self) -> bool:
        return self.m == 1

    # -- coordinates ------------------------------------------------------
    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, ds: Sequence[int]) -> int:
        v = 0
        for d in reversed(list(ds)):
            v = v * self.p + d % self.p
        return v

    def _poly_mod(self, ds: list[int]) -> list[int]:
        p, mod, m = self.p, self.modulus, self.m
        ds = list(ds)
        for k in range(len(ds) - 1, m - 1, -1):
            c = ds[k] % p
            if c:
                for j in range(m + 1):
                    ds[k - m + j] = (ds[k - m + j] - c * mod[j]) % p
        return [x % p for x in ds[:m]] + [0] * max(0, m - len(ds))

    def _build(self) -> None:
        if self.m == 1 or self._mul is not None:
            return
        q, p = self.q, self.p
        if q > _TABLE_LIMIT:
            raise ValueError(f"field of size {q} is too large for table arithmetic")
        dig = [self.digits(a) for a in range(q)]
        add = [[self.from_digits([(x + y) % p for x, y in zip(dig[a], dig[b])]) for b in range(q)]
               for a in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                prod = [0] * (2 * self.m - 1)
                for i, x in enumerate(dig[a]):
                    if x:
                        for j, y in enumerate(dig[b]):
                            prod[i + j] += x * y
                v = self.from_digits(self._poly_mod(prod))
                mul[a][b] = mul[b][a] = v
        neg = [self.from_digits([(-x) % p for x in dig[a]]) for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    inv[a] = b
                    break
        frob = [0] * q
        for a in range(q):
            r = 1
            for _ in range(p):
                r = mul[r][a]
            frob[a] = r
        self._add, self._mul, self._neg, self._inv, self._frob = add, mul, neg, inv, frob
        # alpha^k in coordinates, k < 2m - 1, for component-wise polynomial products
        red = []
        for k in range(2 * self.m - 1):
            e = [0] * (k + 1)
            e[k] = 1
            red.append(self._poly_mod(e))
        self._reduce = red

    # -- element arithmetic on encoded ints --------------------------------
    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        self._build()
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        self._build()
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        self._build()
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        self._build()
        return self._inv[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def frob(self, a: int, k: int = 1) -> int:
        """a^(p^k)."""
        if self.m == 1:
            return a
        self._build()
        for _ in range(k % self.m):
            a = self._frob[a]
        return a

    def elements(self) -> range:
        return range(self.q)

    def generator(self) -> int:
        """Smallest encoded generator of the multiplicative group."""
        if self._gen is None:
            for g in range(1, self.q):
                x, order = g, 1
                while x != 1:
                    x = self.mul(x, g)
                    order += 1
                if order == self.q - 1:
                    self._gen = g
                    break
        return self._gen  # type: ignore[return-value]

    def coerce(self, x: int) -> int:
        """Integer n mapped to n * 1 in the field."""
        return int(x) % self.p

    # -- poly helpers used by Poly ------------------------------------------
    def table(self, name: str):
        self._build()
        return getattr(self, "_" + name)


@lru_cache(maxsize=None)
def make_field(p: int, m: int = 1) -> FieldDescriptor:
    """F_{p^m}; the modulus is the first monic irreducible of degree m over F_p.

    Candidates are ordered by the integer whose base-p digits are the
    coefficients below the leading one (constant term least significant).
    """
    if not _is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if m < 1:
        raise ValueError("extension degree must be positive")
    if m == 1:
        return FieldDescriptor(p, 1, None)
    for k in range(p**m):
        c = [(k // p**i) % p for i in range(m)] + [1]
        if _fp_irreducible(c, p):
            return FieldDescriptor(p, m, tuple(c))
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FieldElement:
    """A field element with its descriptor attached."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldDescriptor, value: int) -> None:
        if not 0 <= value < field.q:
            raise ValueError(f"{value} is not an encoded element of {field.label}")
        self.field = field
        self.value = value

    def _other(self, o) -> int:
        if isinstance(o, FieldElement):
            if o.field != self.field:
                raise TypeError("field mismatch")
            return o.value
        if isinstance(o, int):
            return self.field.coerce(o)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, o):
        v = self._other(o)
        return NotImplemented if v is NotImplemented else FieldElement(self.field, self.field.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, o):
        v = self._other(o)
        return NotImplemented if v is NotImplemented else FieldElement(self.field, self.field.sub(self.value, v))

    def __rsub__(self, o):
        v = self._other(o)
        return NotImplemented if v is NotImplemented else FieldElement(self.field, self.field.sub(v, self.value))

    def __mul__(self, o):
        v = self._other(o)
        return NotImplemented if v is NotImplemented else FieldElement(self.field, self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, o):
        v = self._other(o)
        return NotImplemented if v is NotImplemented else FieldElement(self.field, self.field.mul(self.value, self.field.inv(v)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def frobenius(self, k: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.frob(self.value, k))

    def __eq__(self, o) -> bool:
        if isinstance(o, FieldElement):
            return self.field == o.field and self.value == o.value
        if isinstance(o, int):
            return self.value == self.field.coerce(o)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.q, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.field.label}({self.value})"


def _trim(c: list[int]) -> tuple[int, ...]:
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


class Poly:
    """Polynomial in x over a finite field, coefficients lowest degree first."""

    __slots__ = ("field", "c", "_h")

    def __init__(self, field: FieldDescriptor, coeffs: Iterable[int] = (), *, _trusted: bool = False) -> None:
        self.field = field
        if _trusted:
            self.c = coeffs  # type: ignore[assignment]
        else:
            q = field.q
            if field.m == 1:
                self.c = _trim([int(x) % q for x in coeffs])
            else:
                vals = [int(x) for x in coeffs]
                if any(not 0 <= x < q for x in vals):
                    raise ValueError("coefficient outside the field encoding")
                self.c = _trim(vals)
        self._h = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def _make(cls, field: FieldDescriptor, c) -> "Poly":
        obj = cls.__new__(cls)
        obj.field = field
        obj.c = c if isinstance(c, tuple) else tuple(c)
        obj._h = None
        return obj

    @classmethod
    def zero(cls, field: FieldDescriptor) -> "Poly":
        return cls._make(field, ())

    @classmethod
    def one(cls, field: FieldDescriptor) -> "Poly":
        return cls._make(field, (1,))

    @classmethod
    def x(cls, field: FieldDescriptor) -> "Poly":
        return cls._make(field, (0, 1))

    @classmethod
    def constant(cls, field: FieldDescriptor, value: int) -> "Poly":
        return cls(field, [value])

    @classmethod
    def monomial(cls, field: FieldDescriptor, k: int, coeff: int = 1) -> "Poly":
        return cls(field, [0] * k + [coeff])

    # -- basic properties --------------------------------------------------
    @property
    def deg(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.c) - 1

    @property
    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def is_monic(self) -> bool:
        return bool(self.c) and self.c[-1] == 1

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == (1,)

    def __bool__(self) -> bool:
        return bool(self.c)

    def __len__(self) -> int:
        return len(self.c)

    def coeff(self, k: int) -> int:
        return self.c[k] if 0 <= k < len(self.c) else 0

    def to_list(self) -> list[int]:
        return list(self.c)

    def __eq__(self, o) -> bool:
        if isinstance(o, Poly):
            return self.c == o.c and (self.field == o.field or _compatible(self.field, o.field))
        if isinstance(o, int):
            return self.c == _trim([self.field.coerce(o)])
        return NotImplemented

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash(self.c)
        return self._h

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)}, {self.field.label})"

    def __str__(self) -> str:
        return format_poly(self)

    # -- arithmetic ----------------------------------------------------------
    def _co(self, o) -> "Poly":
        if isinstance(o, Poly):
            if o.field is self.field or o.field == self.field:
                return o
            return _lift_pair(self, o)[1]
        if isinstance(o, int):
            return Poly._make(self.field, _trim([self.field.coerce(o)]))
        if isinstance(o, FieldElement):
            if o.field != self.field:
                raise TypeError("field mismatch")
            return Poly._make(self.field, _trim([o.value]))
        return NotImplemented  # type: ignore[return-value]

    def _pair(self, o):
        other = self._co(o)
        if other is NotImplemented:
            return None, None
        if other.field is self.field or other.field == self.field:
            return self, other
        return _lift_pair(self, other)

    def __add__(self, o):
        a, b = self._pair(o)
        if a is None:
            return NotImplemented
        return Poly._make(a.field, _addc(a.c, b.c, a.field))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        F = self.field
        if F.m == 1:
            p = F.p
            return Poly._make(F, tuple((p - x) % p for x in self.c))
        neg = F.table("neg")
        return Poly._make(F, tuple(neg[x] for x in self.c))

    def __sub__(self, o):
        a, b = self._pair(o)
        if a is None:
            return NotImplemented
        return Poly._make(a.field, _addc(a.c, (-b).c, a.field))

    def __rsub__(self, o):
        b = self._co(o)
        if b is NotImplemented:
            return NotImplemented
        return b - self

    def __mul__(self, o):
        if isinstance(o, Frac):
            return NotImplemented
        a, b = self._pair(o)
        if a is None:
            return NotImplemented
        return Poly._make(a.field, _mulc(a.c, b.c, a.field))

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        F = self.field
        if c == 0:
            return Poly.zero(F)
        if F.m == 1:
            return Poly._make(F, tuple(x * c % F.p for x in self.c))
        mul = F.table("mul")[c]
        return Poly._make(F, tuple(mul[x] for x in self.c))

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k (k >= 0)."""
        if not self.c:
            return self
        return Poly._make(self.field, (0,) * k + self.c)

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power of a polynomial; use Frac")
        F = self.field
        result = Poly.one(F)
        if e == 0:
            return result
        # peel off base-p digits: f^(p^k) is a cheap Frobenius spread
        base = self
        k = 0
        while e:
            e, d = divmod(e, F.p)
            if d:
                piece = base.frobenius(k) if k else base
                result = result * _small_pow(piece, d)
            k += 1
        return result

    def __divmod__(self, o) -> tuple["Poly", "Poly"]:
        a, b = self._pair(o)
        if a is None:
            return NotImplemented
        qc, rc = _divmodc(a.c, b.c, a.field)
        return Poly._make(a.field, qc), Poly._make(a.field, rc)

    def __floordiv__(self, o) -> "Poly":
        return divmod(self, o)[0]

    def __mod__(self, o) -> "Poly":
        return divmod(self, o)[1]

    def __truediv__(self, o):
        if isinstance(o, (Poly, int, FieldElement, Frac)):
            return Frac(self, Poly.one(self.field)) / o
        return NotImplemented

    def __rtruediv__(self, o):
        return Frac.coerce(o, self.field) / self

    def exact_div(self, o) -> "Poly":
        q, r = divmod(self, o)
        if r:
            raise ValueError("division is not exact")
        return q

    def divides(self, o: "Poly") -> bool:
        return not (o % self)

    def gcd(self, o: "Poly") -> "Poly":
        a, b = self._pair(o)
        return Poly._make(a.field, _gcdc(a.c, b.c, a.field))

    def monic(self) -> "Poly":
        if not self.c:
            return self
        if self.c[-1] == 1:
            return self
        return self.scale(self.field.inv(self.c[-1]))

    def derivative(self) -> "Poly":
        F = self.field
        return Poly._make(F, _trim([F.mul(F.coerce(k), x) for k, x in enumerate(self.c)][1:]))

    def frobenius(self, k: int = 1) -> "Poly":
        """self^(p^k): coefficients raised to p^k, exponents multiplied by p^k."""
        F = self.field
        if not self.c or k == 0:
            return self
        step = F.p**k
        out = [0] * ((len(self.c) - 1) * step + 1)
        for i, x in enumerate(self.c):
            if x:
                out[i * step] = F.frob(x, k)
        return Poly._make(F, tuple(out))

    def q_power(self, k: int = 1) -> "Poly":
        """self^(q^k) for q the size of the coefficient field."""
        return self.frobenius(self.field.m * k)

    def map_coefficients_frob(self, k: int) -> "Poly":
        """Apply x -> x^(p^k) to each coefficient, keeping exponents."""
        F = self.field
        if F.m == 1:
            return self
        return Poly._make(F, tuple(F.frob(x, k) for x in self.c))

    def __call__(self, x):
        """Horner evaluation at a field int, FieldElement, Poly or Frac."""
        F = self.field
        if isinstance(x, int) and not isinstance(x, bool):
            acc = 0
            for c in reversed(self.c):
                acc = F.add(F.mul(acc, x), c)
            return acc
        if isinstance(x, FieldElement):
            if x.field == F:
                return FieldElement(F, self(x.value))
            acc = FieldElement(x.field, 0)
            emb = embedding(F, x.field)
            for c in reversed(self.c):
                acc = acc * x + FieldElement(x.field, emb(c))
            return acc
        acc = None
        for c in reversed(self.c):
            acc = (acc * x + c) if acc is not None else (x * 0 + c)
        return acc if acc is not None else x * 0

    def embed(self, big: FieldDescriptor) -> "Poly":
        if big == self.field:
            return self
        emb = embedding(self.field, big)
        return Poly._make(big, tuple(emb(x) for x in self.c))


def _compatible(a: FieldDescriptor, b: FieldDescriptor) -> bool:
    return a.p == b.p and (a.m == 1 or b.m == 1)


def _lift_pair(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if a.field.p != b.field.p:
        raise TypeError("characteristic mismatch")
    if a.field == b.field:
        return a, b
    if a.field.m == 1:
        return Poly._make(b.field, a.c), b
    if b.field.m == 1:
        return a, Poly._make(a.field, b.c)
    raise TypeError(f"no implicit embedding between {a.field.label} and {b.field.label}")


def _small_pow(f: Poly, d: int) -> Poly:
    r = f
    for _ in range(d - 1):
        r = r * f
    return r


def _addc(a: tuple, b: tuple, F: FieldDescriptor) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    if F.m == 1:
        p = F.p
        out = [(x + y) % p for x, y in zip(a, b)]
    else:
        add = F.table("add")
        out = [add[x][y] for x, y in zip(a, b)]
    if len(a) > len(b):
        return tuple(out) + a[len(b):]
    return _trim(out)


def _components(c: tuple, F: FieldDescriptor) -> list[list[int]]:
    p, m = F.p, F.m
    arr = np.asarray(c, dtype=np.int64)
    comps = []
    for _ in range(m):
        comps.append((arr % p).tolist())
        arr = arr // p
    return comps


def _mulc(a: tuple, b: tuple, F: FieldDescriptor) -> tuple:
    if not a or not b:
        return ()
    p = F.p
    if F.m == 1:
        if len(a) == 1:
            x = a[0]
            return tuple(x * y % p for y in b)
        if len(b) == 1:
            y = b[0]
            return tuple(x * y % p for x in a)
        return tuple(kernels.mul(list(a), list(b), p))
    if len(a) * len(b) <= 64:
        add, mul = F.table("add"), F.table("mul")
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                row = mul[x]
                for j, y in enumerate(b):
                    out[i + j] = add[out[i + j]][row[y]]
        return _trim(out)
    # component decomposition: m^2 products over F_p, then reduce alpha^k
    m = F.m
    A, B = _components(a, F), _components(b, F)
    n = len(a) + len(b) - 1
    by_power = [np.zeros(n, dtype=np.int64) for _ in range(2 * m - 1)]
    for i in range(m):
        for j in range(m):
            prod = kernels.mul(_strip(A[i]), _strip(B[j]), p)
            if prod:
                by_power[i + j][: len(prod)] += np.asarray(prod, dtype=np.int64)
    red = F._reduce
    coords = [np.zeros(n, dtype=np.int64) for _ in range(m)]
    for k, vec in enumerate(by_power):
        for r, w in enumerate(red[k]):
            if w:
                coords[r] += w * vec
    enc = np.zeros(n, dtype=np.int64)
    for r in range(m - 1, -1, -1):
        enc = enc * p + coords[r] % p
    return _trim(enc.tolist())


def _strip(c: list[int]) -> list[int]:
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return c[:n]


def _divmodc(a: tuple, b: tuple, F: FieldDescriptor) -> tuple[tuple, tuple]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), a
    if F.m == 1:
        qq, rr = kernels.divmod_(list(a), list(b), F.p)
        return tuple(qq), tuple(rr)
    add, mul, neg = F.table("add"), F.table("mul"), F.table("neg")
    inv = F.inv(b[-1])
    r = list(a)
    db = len(b) - 1
    quo = [0] * (len(a) - db)
    nb = [neg[x] for x in b]
    for i in range(len(a) - len(b), -1, -1):
        c = r[i + db]
        if c:
            c = mul[c][inv]
            quo[i] = c
            row = mul[c]
            for j in range(db + 1):
                r[i + j] = add[r[i + j]][row[nb[j]]]
    return _trim(quo), _trim(r[:db])


def _gcdc(a: tuple, b: tuple, F: FieldDescriptor) -> tuple:
    if F.m == 1:
        return tuple(kernels.gcd(list(a), list(b), F.p))
    while b:
        a, b = b, _divmodc(a, b, F)[1]
    if not a:
        return ()
    return Poly._make(F, a).monic().c


class Frac:
    """Reduced fraction num/den of polynomials with den monic."""

    __slots__ = ("num", "den", "_h")

    def __init__(self, num, den=None) -> None:
        if den is None:
            if isinstance(num, Frac):
                self.num, self.den, self._h = num.num, num.den, None
                return
            den = Poly.one(num.field)
        if isinstance(num, int):
            num = Poly.constant(den.field, num)
        if isinstance(den, int):
            den = Poly.constant(num.field, den)
        if num.field != den.field:
            num, den = _lift_pair(num, den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if den.deg > 0 and num:
            g = num.gcd(den)
            if g.deg > 0:
                num, den = num // g, den // g
        elif not num:
            den = Poly.one(den.field)
        if den.lc != 1:
            inv = den.field.inv(den.lc)
            num, den = num.scale(inv), den.scale(inv)
        self.num, self.den, self._h = num, den, None

    @classmethod
    def _make(cls, num: Poly, den: Poly) -> "Frac":
        obj = cls.__new__(cls)
        obj.num, obj.den, obj._h = num, den, None
        return obj

    @classmethod
    def coerce(cls, x, field: FieldDescriptor) -> "Frac":
        if isinstance(x, Frac):
            return x
        if isinstance(x, Poly):
            return cls._make(x, Poly.one(x.field))
        if isinstance(x, FieldElement):
            return cls._make(Poly._make(x.field, _trim([x.value])), Poly.one(x.field))
        if isinstance(x, int):
            return cls._make(Poly.constant(field, x), Poly.one(field))
        raise TypeError(f"cannot coerce {type(x).__name__} to a fraction")

    @classmethod
    def zero(cls, field: FieldDescriptor) -> "Frac":
        return cls._make(Poly.zero(field), Poly.one(field))

    @classmethod
    def one(cls, field: FieldDescriptor) -> "Frac":
        return cls._make(Poly.one(field), Poly.one(field))

    @property
    def field(self) -> FieldDescriptor:
        return self.num.field

    def is_polynomial(self) -> bool:
        return self.den.c == (1,)

    def __bool__(self) -> bool:
        return bool(self.num.c)

    def __eq__(self, o) -> bool:
        if isinstance(o, Frac):
            return self.num == o.num and self.den == o.den
        if isinstance(o, (Poly, int, FieldElement)):
            return self == Frac.coerce(o, self.field)
        return NotImplemented

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash((self.num.c, self.den.c))
        return self._h

    def __repr__(self) -> str:
        return f"Frac({format_frac(self)}, {self.field.label})"

    def __str__(self) -> str:
        return format_frac(self)

    def _co(self, o) -> "Frac":
        if isinstance(o, Frac):
            return o
        if isinstance(o, (Poly, int, FieldElement)):
            return Frac.coerce(o, self.field)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, o):
        o = self._co(o)
        if o is NotImplemented:
            return NotImplemented
        a, b, c, d = self.num, self.den, o.num, o.den
        if not a:
            return o
        if not c:
            return self
        if b.c == (1,) and d.c == (1,):
            return Frac._make(a + c, b)
        if b == d:
            t = a + c
            if not t:
                return Frac.zero(self.field)
            g = t.gcd(b)
            if g.c == (1,):
                return Frac._make(t, b)
            return Frac._make(t // g, b // g)
        g = b.gcd(d)
        if g.c == (1,):
            return Frac._make(a * d + b * c, b * d)
        bg, dg = b // g, d // g
        t = a * dg + c * bg
        if not t:
            return Frac.zero(self.field)
        g2 = t.gcd(g)
        if g2.c != (1,):
            t, g = t // g2, g // g2
        return Frac._make(t, bg * dg * g)

    __radd__ = __add__

    def __neg__(self) -> "Frac":
        return Frac._make(-self.num, self.den)

    def __sub__(self, o):
        o = self._co(o)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        o = self._co(o)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, o):
        o = self._co(o)
        if o is NotImplemented:
            return NotImplemented
        a, b, c, d = self.num, self.den, o.num, o.den
        if not a or not c:
            return Frac.zero(self.field)
        if b.c == (1,) and d.c == (1,):
            return Frac._make(a * c, b)
        g1 = a.gcd(d) if d.c != (1,) else d
        g2 = c.gcd(b) if b.c != (1,) else b
        if g1.c != (1,):
            a, d = a // g1, d // g1
        if g2.c != (1,):
            c, b = c // g2, b // g2
        return Frac._make(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "Frac":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        lc = self.num.lc
        inv = self.field.inv(lc)
        return Frac._make(self.den.scale(inv), self.num.scale(inv))

    def __truediv__(self, o):
        o = self._co(o)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, o):
        o = self._co(o)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int) -> "Frac":
        if e < 0:
            return self.inverse() ** (-e)
        return Frac._make(self.num**e, self.den**e)

    def frobenius(self, k: int = 1) -> "Frac":
        return Frac._make(self.num.frobenius(k), self.den.frobenius(k))

    def q_power(self, k: int = 1) -> "Frac":
        return Frac._make(self.num.q_power(k), self.den.q_power(k))

    def embed(self, big: FieldDescriptor) -> "Frac":
        return Frac._make(self.num.embed(big), self.den.embed(big))

    def valuation_infinity(self) -> int:
        """-deg: the valuation at the infinite place (u = 1/x)."""
        if not self.num:
            raise ValueError("valuation of zero")
        return self.den.deg - self.num.deg


# -- enumeration and factorisation helpers --------------------------------

def enumerate_monic(F: FieldDescriptor, d: int, mode: str = "exact") -> Iterator[Poly]:
    """Monic polynomials of degree d (``mode='exact'``), or with ``mode='below'``
    the set A(d) of all polynomials of degree < d, zero included.

    Order: by degree, then by the integer whose base-q digits are the lower
    coefficients with the constant term least significant.
    """
    q = F.q
    if mode == "exact":
        for low in itertools.product(range(q), repeat=d):
            yield Poly._make(F, low[::-1] + (1,))
    elif mode == "below":
        yield Poly.zero(F)
        for k in range(d):
            for low in itertools.product(range(q), repeat=k):
                for lead in range(1, q):
                    yield Poly._make(F, low[::-1] + (lead,))
    else:
        raise ValueError(f"unknown mode {mode!r}")


@lru_cache(maxsize=None)
def _irreducibles(F: FieldDescriptor, d: int) -> tuple[Poly, ...]:
    if d < 1:
        return ()
    return tuple(f for f in enumerate_monic(F, d) if is_irreducible(f))


def enumerate_irreducibles(F: FieldDescriptor, d: int) -> list[Poly]:
    """All monic irreducible polynomials of degree exactly d, in enumeration order."""
    return list(_irreducibles(F, d))


def is_irreducible(f: Poly) -> bool:
    """Rabin test: f | x^{q^n} - x and gcd(x^{q^i} - x, f) = 1 for i <= n/2."""
    n = f.deg
    if n < 1:
        return False
    if n == 1:
        return True
    F = f.field
    f = f.monic()
    x = Poly.x(F)
    xq = x
    for i in range(1, n + 1):
        xq = _powmod(xq, F.q, f)
        if i <= n // 2 and (xq - x).gcd(f).deg > 0:
            return False
    return (xq - x) % f == Poly.zero(F)


def _powmod(a: Poly, e: int, f: Poly) -> Poly:
    result = Poly.one(a.field)
    base = a % f
    while e:
        if e & 1:
            result = (result * base) % f
        e >>= 1
        if e:
            base = (base * base) % f
    return result


def valuation(f: Poly | Frac, v: Poly) -> int:
    """Exponent of the irreducible v in f (negative for denominators)."""
    if isinstance(f, Frac):
        return valuation(f.num, v) - valuation(f.den, v)
    if not f:
        raise ValueError("valuation of zero")
    if v.deg < 1:
        raise ValueError("valuation needs a nonconstant polynomial")
    k = 0
    while True:
        quo, rem = divmod(f, v)
        if rem:
            return k
        f, k = quo, k + 1


class Embedding:
    """Field embedding small -> big sending the small generator to a fixed root."""

    def __init__(self, small: FieldDescriptor, big: FieldDescriptor) -> None:
        if small.p != big.p or big.m % small.m:
            raise ValueError(f"{small.label} does not embed in {big.label}")
        self.small, self.big = small, big
        if small.m == 1:
            self.image_of_generator = None
            self.table = list(range(small.q))
            return
        # smallest root in big of the small modulus
        mod = [int(x) for x in small.modulus]  # type: ignore[union-attr]
        root = None
        for cand in range(big.q):
            acc = 0
            for c in reversed(mod):
                acc = big.add(big.mul(acc, cand), c)
            if acc == 0:
                root = cand
                break
        assert root is not None
        self.image_of_generator = root
        pw = [1]
        for _ in range(small.m - 1):
            pw.append(big.mul(pw[-1], root))
        table = []
        for a in range(small.q):
            acc = 0
            for d, g in zip(small.digits(a), pw):
                for _ in range(d):
                    acc = big.add(acc, g)
            table.append(acc)
        self.table = table

    def __call__(self, a: int) -> int:
        return self.table[a]


@lru_cache(maxsize=None)
def embedding(small: FieldDescriptor, big: FieldDescriptor) -> Embedding:
    return Embedding(small, big)


def extension(F: FieldDescriptor, d: int) -> FieldDescriptor:
    """F_{q^d} for F = F_q."""
    return make_field(F.p, F.m * d)


def roots_in_extension(v: Poly, d: int | None = None) -> tuple[FieldDescriptor, list[int]]:
    """Roots of an irreducible v over F_q inside F_{q^d}, d = deg v.

    The roots come back as one Frobenius orbit: the smallest encoded root
    followed by its successive q-th powers.
    """
    d = v.deg if d is None else d
    if v.deg != d:
        raise ValueError("degree mismatch")
    if not is_irreducible(v):
        raise ValueError("polynomial is reducible")
    big = extension(v.field, d)
    w = v.embed(big)
    found = [a for a in big.elements() if w(a) == 0]
    if len(found) != d:
        raise AssertionError("wrong number of roots")  # pragma: no cover
    orbit = [found[0]]
    for _ in range(d - 1):
        orbit.append(big.frob(orbit[-1], v.field.m))
    if sorted(orbit) != found:
        raise AssertionError("roots do not form one orbit")  # pragma: no cover
    return big, orbit


# -- text form -----------------------------------------------------------------

def _fmt_coeff(F: FieldDescriptor, c: int) -> str:
    if F.m == 1:
        return str(c)
    return "{" + ",".join(str(d) for d in F.digits(c)) + "}"


def format_poly(f: Poly) -> str:
    if not f.c:
        return "0"
    parts = []
    for k in range(len(f.c) - 1, -1, -1):
        c = f.c[k]
        if not c:
            continue
        cs = _fmt_coeff(f.field, c)
        if k == 0:
            parts.append(cs)
        else:
            mon = "x" if k == 1 else f"x^{k}"
            parts.append(mon if c == 1 else f"{cs}*{mon}")
    return " + ".join(parts)


def format_frac(f: Frac) -> str:
    if f.is_polynomial():
        return format_poly(f.num)
    return f"({format_poly(f.num)})/({format_poly(f.den)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|(x)|(.))")


def parse_element(text: str, F: FieldDescriptor) -> Frac:
    """Parse an expression in x such as ``1/x``, ``x^2+2`` or ``(x+1)/(x^3-x)``."""
    tokens = []
    for num, var, op in _TOKEN.findall(text):
        if num:
            tokens.append(("n", int(num)))
        elif var:
            tokens.append(("x", None))
        elif op.strip():
            if op not in "+-*/^()":
                raise ValueError(f"unexpected character {op!r} in {text!r}")
            tokens.append((op, None))
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take(kind=None):
        nonlocal pos
        if pos >= len(tokens) or (kind and tokens[pos][0] != kind):
            raise ValueError(f"malformed expression {text!r}")
        tok = tokens[pos]
        pos += 1
        return tok

    def atom() -> Frac:
        kind = peek()
        if kind == "n":
            return Frac.coerce(take()[1], F)
        if kind == "x":
            take()
            return Frac.coerce(Poly.x(F), F)
        if kind == "(":
            take()
            val = expr()
            take(")")
            return val
        if kind == "-":
            take()
            return -factor()
        raise ValueError(f"malformed expression {text!r}")

    def factor() -> Frac:
        base = atom()
        if peek() == "^":
            take()
            neg = False
            if peek() == "-":
                take()
                neg = True
            e = take("n")[1]
            return base ** (-e if neg else e)
        return base

    def term() -> Frac:
        val = factor()
        while peek() in ("*", "/", "x", "("):
            kind = peek()
            if kind in ("*", "/"):
                take()
            rhs = factor()
            val = val / rhs if kind == "/" else val * rhs
        return val

    def expr() -> Frac:
        val = term()
        while peek() in ("+", "-"):
            op = take()[0]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    if not tokens:
        raise ValueError("empty expression")
    result = expr()
    if pos != len(tokens):
        raise ValueError(f"malformed expression {text!r}")
    return result
