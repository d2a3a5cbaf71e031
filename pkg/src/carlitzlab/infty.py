"""Truncated arithmetic at the infinite place.

Elements are finite windows of series in u = 1/x.  Three flavours share one
dense representation:

* ``TruncatedLaurent``: sum_i c_i u^i, an element of K_inf;
* ``RamifiedElement``: sum_r iota^r x_r(u) for r < q-1, where iota is a fixed
  root of X^(q-1) + x, so iota^(q-1) = -x;
* ``TateTruncation``: a polynomial in t_1..t_s, each exponent at most a cap
  M, whose coefficients are ramified series.

The array has shape ``(grades, m, (M+1,)*s, L)``: grade r, base-p
coordinate of the coefficient field F_{p^m}, monomial, and u-exponent
``val + index``.  Everything with exponent >= ``prec`` is unknown; ``prec``
is ``None`` for values stored exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .algebra import FieldDescriptor, Frac, Poly, embedding, make_field

INF = math.inf


def _pmin(*xs):
    vals = [x for x in xs if x is not None]
    return min(vals) if vals else None


def _padd(a, b):
    if a is None or b is None:
        return None
    return a + b


class _Series:
    __slots__ = ("base", "field", "nvars", "cap", "g", "val", "arr", "prec", "tail")

    def __init__(self, base: FieldDescriptor, field: FieldDescriptor, nvars: int, cap: int, g: int, val: int,
                 arr: np.ndarray, prec: int | None, tail: tuple[int, int] | None = None, *,
                 normalize: bool = True) -> None:
        self.base = base
        self.field = field
        self.nvars = nvars
        self.cap = cap
        self.g = g
        self.val = val
        self.arr = arr
        self.prec = prec
        self.tail = tail
        if normalize:
            self._normalize()

    # -- representation helpers ------------------------------------------
    @property
    def q(self) -> int:
        return self.base.q

    @property
    def length(self) -> int:
        return self.arr.shape[-1]

    @property
    def mono_shape(self) -> tuple[int, ...]:
        return (self.cap + 1,) * self.nvars

    def _normalize(self) -> None:
        arr = self.arr
        if self.prec is not None:
            keep = self.prec - self.val
            if keep < arr.shape[-1]:
                arr = arr[..., :max(keep, 0)]
        L = arr.shape[-1]
        if L:
            cols = np.flatnonzero(arr.reshape(-1, L).any(axis=0))
        else:
            cols = np.array([], dtype=np.int64)
        if cols.size == 0:
            arr = arr[..., :0]
            self.val = self.prec if self.prec is not None else 0
        else:
            lo = int(cols[0])
            hi = int(cols[-1]) + 1 if self.prec is None else L
            arr = arr[..., lo:hi]
            self.val += lo
        self.arr = np.ascontiguousarray(arr)

    def _like(self, val: int, arr: np.ndarray, prec, tail=None, **kw) -> "_Series":
        nvars = kw.get("nvars", self.nvars)
        cap = kw.get("cap", self.cap)
        g = kw.get("g", self.g)
        field = kw.get("field", self.field)
        cls = _class_for(nvars, g)
        return cls(self.base, field, nvars, cap, g, val, arr, prec, tail)

    def is_zero(self) -> bool:
        """Zero modulo its precision."""
        return self.arr.shape[-1] == 0

    def is_exact(self) -> bool:
        return self.prec is None

    # -- promotion -------------------------------------------------------------
    def _as(self, field: FieldDescriptor, g: int, nvars: int, cap: int) -> "_Series":
        x = self
        if field != x.field:
            x = x.change_field(field)
        if g != x.g:
            if x.g != 1:
                raise TypeError("cannot change the ramification grading")
            arr = np.zeros((g,) + x.arr.shape[1:], dtype=np.int64)
            arr[0] = x.arr[0]
            x = x._like(x.val, arr, x.prec, x.tail, g=g)
        if nvars != x.nvars or cap != x.cap:
            if x.nvars != 0:
                raise TypeError("variable lists or caps differ")
            shape = (g, field.m) + (cap + 1,) * nvars + (x.length,)
            arr = np.zeros(shape, dtype=np.int64)
            arr[(slice(None), slice(None)) + (0,) * nvars] = x.arr
            tail = x.tail if x.tail is not None else (0, x.val)
            x = x._like(x.val, arr, x.prec, tail, nvars=nvars, cap=cap)
        return x

    def _pair(self, o) -> tuple["_Series", "_Series"]:
        if not isinstance(o, _Series):
            o = _scalar(self.base, o, self.field, self.prec)
        if o.base != self.base:
            raise TypeError("base field mismatch")
        if o.field.p != self.field.p:
            raise TypeError("coefficient fields of different characteristic")
        field = self.field if self.field.m >= o.field.m else o.field
        g = max(self.g, o.g)
        if self.nvars and o.nvars and (self.nvars != o.nvars or self.cap != o.cap):
            raise TypeError("variable lists or caps differ")
        nvars = max(self.nvars, o.nvars)
        cap = self.cap if self.nvars else o.cap
        return self._as(field, g, nvars, cap), o._as(field, g, nvars, cap)

    def change_field(self, big: FieldDescriptor) -> "_Series":
        """Same element with coefficients embedded in a larger field."""
        if big == self.field:
            return self
        enc = _encode(self.arr, self.field)
        emb = embedding(self.field, big)
        table = np.asarray(emb.table, dtype=np.int64)
        big_enc = table[enc]
        return self._like(self.val, _decode(big_enc, big), self.prec, self.tail, field=big)

    # -- ring operations -------------------------------------------------------
    def __add__(self, o):
        try:
            a, b = self._pair(o)
        except TypeError:
            return NotImplemented
        prec = _pmin(a.prec, b.prec)
        if a.is_zero() and a.prec is None:
            return b._with_prec(prec)
        if b.is_zero() and b.prec is None:
            return a._with_prec(prec)
        val = min(a.val, b.val)
        if prec is None:
            top = max(a.val + a.length, b.val + b.length)
        else:
            top = prec
        L = max(top - val, 0)
        arr = _place(a.arr, a.val - val, L) + _place(b.arr, b.val - val, L)
        arr %= a.field.p
        tail = _tail_sum(a, b)
        return a._like(val, arr, prec, tail)

    __radd__ = __add__

    def __neg__(self):
        return self._like(self.val, (-self.arr) % self.field.p, self.prec, self.tail)

    def __sub__(self, o):
        try:
            a, b = self._pair(o)
        except TypeError:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, o):
        return (-self) + o

    def _with_prec(self, prec):
        if prec == self.prec:
            return self
        return self._like(self.val, self.arr, prec, self.tail)

    def truncate(self, prec: int) -> "_Series":
        """Forget everything at u-exponent >= prec."""
        return self._with_prec(_pmin(self.prec, prec))

    def __mul__(self, o):
        try:
            a, b = self._pair(o)
        except TypeError:
            return NotImplemented
        return _multiply(a, b)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.invert() ** (-e)
        result = _one_like(self)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, o):
        if isinstance(o, _Series):
            return self * o.invert()
        if isinstance(o, (Poly, Frac, int)):
            P = self.prec if self.prec is not None else None
            return self * _scalar(self.base, o, self.field, P, invert=True, ref=self)
        return NotImplemented

    # -- Frobenius -------------------------------------------------------------
    def q_power(self, k: int = 1) -> "_Series":
        """x^(q^k); on Tate elements this is the twist tau^k (t untouched)."""
        x = self
        for _ in range(k):
            x = x._q_power_once()
        return x

    twist = q_power

    def _q_power_once(self) -> "_Series":
        q, g, p = self.q, self.g, self.field.p
        arr = self.arr
        if self.field.m > 1:
            enc = _encode(arr, self.field)
            frob = np.asarray(self.field.table("frob"), dtype=np.int64)
            for _ in range(self.base.m):
                enc = frob[enc]
            arr = _decode(enc, self.field)
        L = arr.shape[-1]
        shift = g - 1
        newL = (q * (L - 1) + 1 + shift) if L else 0
        out = np.zeros(arr.shape[:-1] + (newL,), dtype=np.int64)
        for r in range(g):
            # (iota^r)^q = iota^r (-x)^r = iota^r (-1)^r u^(-r)
            sign = -1 if r % 2 else 1
            off = shift - r
            if L:
                out[r, ..., off:off + q * (L - 1) + 1:q] = sign * arr[r]
        out %= p
        val = q * self.val - shift
        prec = None if self.prec is None else q * self.prec - shift
        tail = None if self.tail is None else (self.tail[0], q * self.tail[1] - shift) if q * self.tail[1] - shift < self.tail[1] else self.tail
        return self._like(val, out, prec, tail)

    # -- inversion ---------------------------------------------------------------
    def invert(self, prec: int | None = None) -> "_Series":
        """Multiplicative inverse; ``prec`` is required when self is exact."""
        if self.nvars:
            raise NotImplementedError("inversion of Tate truncations is not supported")
        if self.is_zero():
            raise ZeroDivisionError("inverse of an element that is zero modulo its precision")
        grades = [r for r in range(self.g) if self.arr[r].any()]
        if len(grades) == 1:
            return _invert_pure(self, grades[0], prec)
        # multiply by the Galois conjugates iota -> zeta iota to reach grade 0
        F = self.base
        gen = F.generator()
        conj = None
        for k in range(1, self.q - 1):
            zeta = F.pow(gen, k)
            c = self.conjugate(zeta)
            conj = c if conj is None else conj * c
        norm = self * conj
        return conj * _invert_pure(norm, 0, None if prec is None else prec)

    def conjugate(self, zeta: int) -> "_Series":
        """Image under iota -> zeta * iota for zeta in F_q^x."""
        F = self.base
        arr = self.arr.copy()
        for r in range(1, self.g):
            c = F.pow(zeta, r)
            if c != 1:
                arr[r] = _scale_const(arr[r], c, self.field, F)
        return self._like(self.val, arr, self.prec, self.tail)

    def scale(self, c: int) -> "_Series":
        """Multiply by an (encoded) constant of the coefficient field."""
        return self._like(self.val, _scale_const(self.arr, c, self.field, self.field), self.prec, self.tail)

    # -- valuations -------------------------------------------------------------
    def _grade_vals(self) -> dict[int, int]:
        out = {}
        L = self.length
        for r in range(self.g):
            block = self.arr[r].reshape(-1, L) if L else None
            if block is None:
                continue
            cols = np.flatnonzero(block.any(axis=0))
            if cols.size:
                out[r] = self.val + int(cols[0])
        return out

    @property
    def valuation(self) -> Fraction:
        """Valuation in u-units (iota has valuation -1/(q-1)); +inf if zero mod precision.

        For Tate truncations this is the Gauss valuation."""
        gv = self._grade_vals()
        if not gv:
            return Fraction(self.prec) if self.prec is not None else INF  # type: ignore[return-value]
        return min(Fraction(v) - Fraction(r, self.q - 1) for r, v in gv.items())

    gauss_valuation = valuation

    def abs(self) -> float:
        """|x| = q^(-valuation) (Gauss norm for Tate truncations)."""
        v = self.valuation
        return 0.0 if v == INF else float(self.q) ** (-float(v))

    norm = abs

    def grade_components(self) -> list["_Series"]:
        """x_0, ..., x_{g-1} with self = sum_r iota^r x_r (each with nvars kept)."""
        out = []
        for r in range(self.g):
            arr = self.arr[r:r + 1]
            out.append(self._like(self.val, arr.copy(), self.prec, self.tail, g=1))
        return out

    def is_grade_pure(self, r: int = 0) -> bool:
        return all(not self.arr[k].any() for k in range(self.g) if k != r)

    def to_grade0(self) -> "_Series":
        """Drop the grading after checking the element lies in grade 0."""
        if not self.is_grade_pure(0):
            raise ValueError("element has nonzero iota-graded components")
        return self._like(self.val, self.arr[:1].copy(), self.prec, self.tail, g=1)

    # -- coefficients ------------------------------------------------------------
    def coefficient(self, k: int, grade: int = 0, mono: Sequence[int] = ()) -> int:
        """Encoded coefficient of iota^grade t^mono u^k."""
        if self.prec is not None and k >= self.prec:
            raise ValueError("coefficient beyond precision")
        i = k - self.val
        if i < 0 or i >= self.length:
            return 0
        comps = self.arr[(grade, slice(None)) + tuple(mono) + (i,)]
        return self.field.from_digits([int(c) for c in comps])

    def monomial_coefficient(self, mono: Sequence[int]) -> "_Series":
        """Coefficient of t^mono as a ramified element."""
        if len(mono) != self.nvars:
            raise ValueError("wrong number of exponents")
        arr = self.arr[(slice(None), slice(None)) + tuple(mono)].copy()
        cls = _class_for(0, self.g)
        return cls(self.base, self.field, 0, 0, self.g, self.val, arr, self.prec)

    def nonzero_monomials(self) -> list[tuple[int, ...]]:
        if not self.nvars:
            return [()]
        mask = self.arr.any(axis=(0, 1, -1)) if self.length else np.zeros(self.mono_shape, bool)
        return [tuple(int(x) for x in idx) for idx in np.argwhere(mask)]

    # -- Tate specific ---------------------------------------------------------
    def with_tail(self, slope: int, offset: int) -> "_Series":
        """Declare: every coefficient of t^beta (any beta) has u-valuation >= slope*|beta| + offset."""
        return self._like(self.val, self.arr, self.prec, (slope, offset))

    def embed_variable(self, i: int, nvars: int) -> "_Series":
        """Univariate truncation in t placed as variable i (0-based) of nvars."""
        if self.nvars != 1:
            raise ValueError("expected a univariate truncation")
        shape = (self.g, self.field.m) + self.mono_shape * 0 + (self.cap + 1,) * nvars + (self.length,)
        arr = np.zeros(shape, dtype=np.int64)
        for k in range(self.cap + 1):
            idx = [0] * nvars
            idx[i] = k
            arr[(slice(None), slice(None)) + tuple(idx)] = self.arr[:, :, k]
        return self._like(self.val, arr, self.prec, self.tail, nvars=nvars)

    def substitute_power(self, var: int, e: int) -> "_Series":
        """t_var -> t_var^e under the cap (monomials pushed past the cap are dropped)."""
        if e < 1:
            raise ValueError("exponent must be positive")
        arr = np.zeros_like(self.arr)
        for k in range(self.cap // e + 1):
            src = [slice(None)] * self.arr.ndim
            dst = [slice(None)] * self.arr.ndim
            src[2 + var] = k
            dst[2 + var] = k * e
            arr[tuple(dst)] = self.arr[tuple(src)]
        return self._like(self.val, arr, self.prec, None)

    def substitute(self, var: int, value) -> "_Series":
        """t_var -> value for a constant value.

        ``value`` is an encoded finite field element given as ``(field, int)``
        or a ramified element.  Dropped monomials beyond the cap are
        controlled by the declared tail bound (slope, offset): the t^k
        coefficient has u-valuation >= slope*k + offset, so the value must
        satisfy slope + v(value) > 0 and the result is capped at precision
        (slope + v(value)) * (cap + 1) + offset.
        """
        if isinstance(value, tuple):
            vfield, c = value
            x = _const(self.base, vfield, c)
        else:
            x = value
        if self.tail is None:
            raise ValueError("no tail bound declared; cannot substitute")
        slope, offset = self.tail
        vx = x.valuation
        vx = 0 if vx == INF else math.floor(vx)
        if slope + vx <= 0:
            raise ValueError("substituted value is too large for the declared tail bound")
        tail_prec = (slope + vx) * (self.cap + 1) + offset
        src = self
        if x.field.m > src.field.m:
            src = src.change_field(x.field)
        elif x.field != src.field:
            x = x.change_field(src.field)
        nv = src.nvars - 1
        result = None
        power = _one_like(x)
        for k in range(src.cap + 1):
            idx = [slice(None)] * src.arr.ndim
            idx[2 + var] = k
            sub = src.arr[tuple(idx)]
            cls = _class_for(nv, src.g)
            coeff = cls(src.base, src.field, nv, src.cap if nv else 0, src.g, src.val, sub.copy(), src.prec)
            term = coeff * power
            result = term if result is None else result + term
            power = power * x
        out = result.truncate(tail_prec)
        if out.nvars:
            out = out._like(out.val, out.arr, out.prec, (slope, offset))
        return out

    # -- output ---------------------------------------------------------------------
    def to_json(self) -> dict:
        def lau(arr2: np.ndarray) -> dict:
            coeffs = [self.field.from_digits([int(c) for c in arr2[:, i]]) for i in range(arr2.shape[-1])]
            return {"valuation": self.val, "coefficients": coeffs, "precision": self.prec}

        if self.nvars == 0 and self.g == 1:
            return lau(self.arr[0])
        if self.nvars == 0:
            return {"grades": [lau(self.arr[r]) for r in range(self.g)]}
        terms = []
        for mono in self.nonzero_monomials():
            idx = (slice(None), slice(None)) + mono
            terms.append([list(mono), [lau(self.arr[idx][r]) for r in range(self.g)]])
        return {"cap": self.cap, "precision": self.prec, "terms": terms}

    def __repr__(self) -> str:
        return (f"{type(self).__name__}(q={self.q}, field={self.field.label}, vars={self.nvars}, cap={self.cap}, "
                f"val={self.val}, len={self.length}, prec={self.prec})")


class TruncatedLaurent(_Series):
    """Element of K_inf known modulo u^prec."""

    __slots__ = ()


class RamifiedElement(_Series):
    """Element sum_r iota^r x_r of K_inf(iota)."""

    __slots__ = ()


class TateTruncation(_Series):
    """Truncated element of the Tate algebra in t_1..t_s with ramified coefficients."""

    __slots__ = ()


def _class_for(nvars: int, g: int):
    if nvars:
        return TateTruncation
    return RamifiedElement if g > 1 else TruncatedLaurent


# -- low level array helpers --------------------------------------------------------

def _encode(arr: np.ndarray, field: FieldDescriptor) -> np.ndarray:
    p = field.p
    enc = np.zeros(arr.shape[:1] + arr.shape[2:], dtype=np.int64)
    for i in range(field.m - 1, -1, -1):
        enc = enc * p + arr[:, i]
    return enc


def _decode(enc: np.ndarray, field: FieldDescriptor) -> np.ndarray:
    p = field.p
    out = np.zeros(enc.shape[:1] + (field.m,) + enc.shape[1:], dtype=np.int64)
    e = enc.copy()
    for i in range(field.m):
        out[:, i] = e % p
        e //= p
    return out


def _place(arr: np.ndarray, offset: int, L: int) -> np.ndarray:
    out = np.zeros(arr.shape[:-1] + (L,), dtype=np.int64)
    n = min(arr.shape[-1], L - offset)
    if n > 0:
        out[..., offset:offset + n] = arr[..., :n]
    return out


def _scale_const(arr: np.ndarray, c: int, field: FieldDescriptor, cfield: FieldDescriptor) -> np.ndarray:
    """Multiply a component array (leading axis = coordinates) by a constant."""
    if field.m == 1:
        return (arr * c) % field.p
    if cfield != field:
        c = embedding(cfield, field)(c)
    enc = np.zeros(arr.shape[1:], dtype=np.int64)
    for i in range(field.m - 1, -1, -1):
        enc = enc * field.p + arr[i]
    row = np.asarray(field.table("mul")[c], dtype=np.int64)
    enc = row[enc]
    out = np.zeros_like(arr)
    for i in range(field.m):
        out[i] = enc % field.p
        enc //= field.p
    return out


def _tail_sum(a: _Series, b: _Series):
    if a.tail is None or b.tail is None:
        return None
    return (min(a.tail[0], b.tail[0]), min(a.tail[1], b.tail[1]))


def _toeplitz(x: np.ndarray, n: int) -> np.ndarray:
    """Matrix T with (row @ T) = convolution of a length-n row with x."""
    k = x.shape[-1]
    T = np.zeros((n, n + k - 1), dtype=np.float64)
    rows = np.arange(n)
    for j in range(k):
        if x[j]:
            T[rows, rows + j] = x[j]
    return T


def _multiply(a: _Series, b: _Series) -> _Series:
    p, m, g = a.field.p, a.field.m, a.g
    prec_mul = _pmin(_padd(a.prec, b.val) if a.prec is not None else None,
                     _padd(b.prec, a.val) if b.prec is not None else None)
    if a.is_zero() or b.is_zero():
        prec = prec_mul
        if a.prec is None and a.is_zero() or b.prec is None and b.is_zero():
            prec = None
        arr = np.zeros(a.arr.shape[:-1] + (0,), dtype=np.int64)
        return a._like(prec if prec is not None else 0, arr, prec, None)
    blocks_a = _blocks(a)
    blocks_b = _blocks(b)
    small, big, sblocks = (a, b, blocks_a) if len(blocks_a) <= len(blocks_b) else (b, a, blocks_b)
    maxg = max(r for r, *_ in blocks_a) + max(r for r, *_ in blocks_b)
    carry = g > 1 and maxg >= g
    shift = 1 if carry else 0
    Ls, Lb = small.length, big.length
    Lout = Ls + Lb - 1 + shift
    nv, cap = a.nvars, a.cap
    out = np.zeros((g, 2 * m - 1) + (cap + 1,) * nv + (Lout,), dtype=np.float64)
    big_grades = [r for r in range(g) if big.arr[r].any()]
    for (ga, *beta) in sblocks:
        beta = tuple(beta)
        x = small.arr[(ga, slice(None)) + beta]  # (m, Ls)
        sl = tuple(slice(0, cap + 1 - bi) for bi in beta)
        osl = tuple(slice(bi, cap + 1) for bi in beta)
        Ts = [_toeplitz(x[i], Lb) if x[i].any() else None for i in range(m)]
        for gb in big_grades:
            blk = big.arr[(gb, slice(None)) + sl]
            gc = ga + gb
            sign, off = 1.0, shift
            if gc >= g:
                gc -= g
                sign, off = -1.0, 0
            for j in range(m):
                bj = blk[j]
                if not bj.any():
                    continue
                bjf = bj.astype(np.float64)
                for i in range(m):
                    if Ts[i] is None:
                        continue
                    prod = bjf @ Ts[i]
                    tgt = (gc, i + j) + osl + (slice(off, off + Lb + Ls - 1),)
                    if sign > 0:
                        out[tgt] += prod
                    else:
                        out[tgt] -= prod
    res = np.rint(out).astype(np.int64)
    if m > 1:
        red = a.field._reduce
        comp = np.zeros((g, m) + res.shape[2:], dtype=np.int64)
        for k in range(2 * m - 1):
            for r, w in enumerate(red[k]):
                if w:
                    comp[:, r] += w * res[:, k]
        res = comp
    res %= p
    val = a.val + b.val - shift
    prec = prec_mul
    if prec is not None and carry:
        prec -= 1
    tail = None
    if a.tail is not None and b.tail is not None:
        tail = (min(a.tail[0], b.tail[0]), a.tail[1] + b.tail[1] - shift)
    return a._like(val, res, prec, tail)


def _blocks(x: _Series) -> list[tuple[int, ...]]:
    L = x.length
    mask = x.arr.any(axis=(1, x.arr.ndim - 1)) if L else np.zeros(x.arr.shape[:1] + x.mono_shape, bool)
    return [tuple(int(v) for v in idx) for idx in np.argwhere(mask)]


def _one_like(x: _Series) -> _Series:
    arr = np.zeros((x.g, x.field.m) + x.mono_shape + (1,), dtype=np.int64)
    arr[(0, 0) + (0,) * x.nvars + (0,)] = 1
    return x._like(0, arr, None, (0, 0) if x.nvars else None)


def _series_inverse(c: np.ndarray, n: int, field: FieldDescriptor) -> np.ndarray:
    """First n terms of 1/c for a component array c of shape (m, L) with c[:,0] != 0."""
    p = field.p
    if field.m == 1:
        out = kernels.series_inv([int(v) for v in c[0]], n, p)
        res = np.zeros((1, n), dtype=np.int64)
        res[0, :len(out)] = out
        return res
    enc = [field.from_digits([int(v) for v in c[:, i]]) for i in range(c.shape[1])]
    add, mul, neg = field.table("add"), field.table("mul"), field.table("neg")
    inv0 = field.inv(enc[0])
    out = [0] * n
    out[0] = inv0
    for k in range(1, n):
        acc = 0
        for j in range(1, min(k, len(enc) - 1) + 1):
            if enc[j] and out[k - j]:
                acc = add[acc][mul[enc[j]][out[k - j]]]
        out[k] = mul[neg[acc]][inv0]
    return _decode(np.asarray([out], dtype=np.int64), field)[0]


def _invert_pure(x: _Series, r: int, prec: int | None) -> _Series:
    """Inverse of iota^r y with y a unit series (x pure of grade r)."""
    y = x.arr[r]  # (m, L)
    v = x.val
    if x.prec is None:
        if prec is None:
            raise ValueError("inverting an exact element needs a target precision")
        target = prec
    else:
        target = x.prec - 2 * v
        if prec is not None:
            target = min(target, prec)
    n = target + v  # result starts at u^(-v)
    if n <= 0:
        arr = np.zeros((x.g, x.field.m, 0), dtype=np.int64)
        return x._like(target, arr, target)
    inv = _series_inverse(y, n, x.field)
    arr = np.zeros((x.g, x.field.m, n), dtype=np.int64)
    if r == 0:
        arr[0] = inv
        return x._like(-v, arr, target)
    # iota^(-r) = -u * iota^(g-r)
    arr[x.g - r] = (-inv) % x.field.p
    return x._like(-v + 1, arr, target + 1)


# -- constructors ---------------------------------------------------------------------

def _base_g(base: FieldDescriptor) -> int:
    return max(base.q - 1, 1)


def _const(base: FieldDescriptor, field: FieldDescriptor, c: int) -> _Series:
    arr = np.zeros((1, field.m, 1), dtype=np.int64)
    arr[0, :, 0] = field.digits(c)
    return TruncatedLaurent(base, field, 0, 0, 1, 0, arr, None)


def laurent(x, base: FieldDescriptor, prec: int | None = None, field: FieldDescriptor | None = None) -> _Series:
    """Element of A or K (or an int) as a TruncatedLaurent.

    Polynomials are exact; fractions with nonconstant denominators need
    ``prec`` (absolute precision of the result).
    """
    field = field or base
    if isinstance(x, int):
        x = Poly.constant(base, x)
    if isinstance(x, Poly):
        f = x.embed(field) if x.field != field else x
        if not f:
            return TruncatedLaurent(base, field, 0, 0, 1, 0, np.zeros((1, field.m, 0), dtype=np.int64), None)
        d = f.deg
        coeffs = list(reversed(f.c))
        arr = np.zeros((1, field.m, d + 1), dtype=np.int64)
        for i, c in enumerate(coeffs):
            arr[0, :, i] = field.digits(c)
        out = TruncatedLaurent(base, field, 0, 0, 1, -d, arr, None)
        return out if prec is None else out.truncate(prec)
    if isinstance(x, Frac):
        num = laurent(x.num, base, None, field)
        if x.den.deg == 0 and x.den.c == (1,):
            return num if prec is None else num.truncate(prec)
        if prec is None:
            raise ValueError("a fraction needs a target precision")
        den = laurent(x.den, base, None, field)
        # num exact with valuation -deg num; the quotient needs den^-1 to prec + deg num
        inv = den.invert(prec + max(x.num.deg, 0))
        return (num * inv).truncate(prec)
    raise TypeError(f"cannot convert {type(x).__name__}")


def _scalar(base: FieldDescriptor, x, field: FieldDescriptor, prec, invert: bool = False, ref=None) -> _Series:
    if isinstance(x, _Series):
        return x
    P = prec if prec is not None else 64
    if invert:
        if isinstance(x, int):
            x = Poly.constant(base, x)
        x = Frac(Poly.one(base), x) if isinstance(x, Poly) else x.inverse()
        extra = 0
        if ref is not None:
            extra = max(0, -ref.val)
        return laurent(x, base, P + extra + 2, field)
    if isinstance(x, Frac) and not x.is_polynomial():
        return laurent(x, base, P + 2, field)
    return laurent(x, base, None, field)


def u_power(base: FieldDescriptor, k: int) -> TruncatedLaurent:
    arr = np.zeros((1, base.m, 1), dtype=np.int64)
    arr[0, 0, 0] = 1
    return TruncatedLaurent(base, base, 0, 0, 1, k, arr, None)


def theta(base: FieldDescriptor) -> TruncatedLaurent:
    return u_power(base, -1)


def iota(base: FieldDescriptor) -> RamifiedElement:
    """The fixed root of X^(q-1) + x (grade 1, exact)."""
    g = _base_g(base)
    if g == 1:
        return (-theta(base))  # type: ignore[return-value]
    arr = np.zeros((g, base.m, 1), dtype=np.int64)
    arr[1, 0, 0] = 1
    return RamifiedElement(base, base, 0, 0, g, 0, arr, None)


def geometric(base: FieldDescriptor, step: int, prec: int) -> TruncatedLaurent:
    """(1 - u^step)^(-1) modulo u^prec."""
    arr = np.zeros((1, base.m, max(prec, 0)), dtype=np.int64)
    arr[0, 0, ::step] = 1
    return TruncatedLaurent(base, base, 0, 0, 1, 0, arr, prec)


def pi_bar(base: FieldDescriptor, N: int) -> RamifiedElement:
    """iota x prod_{j>=1} (1 - u^(q^j - 1))^(-1), to precision >= N."""
    if N < 1:
        raise ValueError("precision must be positive")
    q = base.q
    P = N + 1
    unit = u_power(base, 0).truncate(P)
    j = 1
    while q**j - 1 < P:
        unit = unit * geometric(base, q**j - 1, P)
        j += 1
    return iota(base) * theta(base) * unit  # type: ignore[return-value]


def _tate_univariate(base: FieldDescriptor, cap: int, coeffs: dict[int, _Series], prec) -> TateTruncation:
    """sum_k coeffs[k] t^k with Laurent coefficients (grade 0)."""
    vals = [c.val for c in coeffs.values() if not c.is_zero()]
    val = min(vals) if vals else 0
    top = prec if prec is not None else max(c.val + c.length for c in coeffs.values())
    L = max(top - val, 0)
    arr = np.zeros((1, base.m, cap + 1, L), dtype=np.int64)
    for k, c in coeffs.items():
        if k <= cap and not c.is_zero():
            arr[0, :, k] = _place(c.arr[0], c.val - val, L)
    return TateTruncation(base, base, 1, cap, 1, val, arr, prec)


def geometric_t(base: FieldDescriptor, cap: int, shift: int, prec: int | None) -> TateTruncation:
    """sum_{k<=cap} t^k u^(shift*(k+1)) = u^shift / (1 - t u^shift) under the cap."""
    coeffs = {k: u_power(base, shift * (k + 1)) for k in range(cap + 1)}
    return _tate_univariate(base, cap, coeffs, prec)


def omega(base: FieldDescriptor, N: int, M: int) -> TateTruncation:
    """iota prod_{j>=0} (1 - t u^(q^j))^(-1): factors with q^j < N, cap M."""
    q = base.q
    acc = None
    j = 0
    while q**j < N:
        f = geometric_t(base, M, q**j, None)
        # (1 - t u^c)^-1 = 1 + t u^c geometric: shift back by one step
        f = _tate_univariate(base, M, {k: u_power(base, q**j * k) for k in range(M + 1)}, N)
        acc = f if acc is None else acc * f
        j += 1
    if acc is None:
        acc = _tate_univariate(base, M, {0: u_power(base, 0)}, N)
    out = acc * iota(base)
    return out.with_tail(1, -1)  # type: ignore[return-value]


def omega_inverse(base: FieldDescriptor, N: int, M: int) -> TateTruncation:
    """1/omega = iota^(-1) prod_{j>=0} (1 - t u^(q^j)), exact factors with q^j < N + 2."""
    q = base.q
    P = N + 2
    acc = _tate_univariate(base, M, {0: u_power(base, 0)}, None)
    j = 0
    while q**j < P:
        f = _tate_univariate(base, M, {0: u_power(base, 0), 1: -u_power(base, q**j)}, None)
        acc = acc * f
        j += 1
    iota_inv = iota(base).invert(P + 4)
    return (acc.truncate(P) * iota_inv).with_tail(0, -1)  # type: ignore[return-value]


def _valuation_floor(x: _Series) -> int:
    v = x.valuation
    return math.floor(v) if v != INF else (x.prec or 0)


def carlitz_exp(x: _Series, N: int) -> _Series:
    """e_C(x) = sum_j x^(q^j)/D_j, terms kept while their valuation is below N."""
    from .carlitz import carlitz_cache

    if x.nvars:
        raise ValueError("carlitz_exp takes a scalar")
    base = x.base
    q = base.q
    C = carlitz_cache(base)
    if x.is_zero():
        return x
    vx = x.valuation
    total = None
    y = x
    j = 0
    while True:
        vj = q**j * (vx + j)
        if vj >= N and vx + j >= 0:
            break
        if j:
            y = y.q_power(1)
        Dinv = laurent(Frac(Poly.one(base), C.D(j)), base, N + math.ceil(-min(q**j * vx, 0)) + j * q**j + 4)
        term = y * Dinv
        total = term if total is None else total + term
        j += 1
    if total is None:
        return x.truncate(N)
    # the first dropped term has valuation >= vj >= N
    return total.truncate(min(N, math.floor(vj)) if total.prec is None else min(total.prec, math.floor(vj)))


def agf(x: _Series, N: int, M: int) -> TateTruncation:
    """f_C(x; t) = sum_j x^(q^j) / (D_j (theta^(q^j) - t)), each 1/(theta^(q^j) - t) expanded in t."""
    from .carlitz import carlitz_cache

    base = x.base
    q = base.q
    C = carlitz_cache(base)
    vx = x.valuation
    total = None
    y = x
    j = 0
    while True:
        # term valuation at t^0: q^j (vx + j) + q^j
        vj = q**j * (vx + j + 1)
        if vj >= N and vx + j + 1 >= 0:
            break
        if j:
            y = y.q_power(1)
        Dinv = laurent(Frac(Poly.one(base), C.D(j)), base, N + math.ceil(-min(q**j * vx, 0)) + j * q**j + 4)
        geo = geometric_t(base, M, q**j, None)
        term = geo * (y * Dinv)
        total = term if total is None else total + term
        j += 1
    if total is None:
        return geometric_t(base, M, 1, N) * x.truncate(N) * 0
    cut = math.floor(vj)
    out = total.truncate(cut if total.prec is None else min(total.prec, cut))
    off = math.floor(vx) + 1 - 1 if vx != INF else 0
    return out.with_tail(1, off - 1)  # type: ignore[return-value]


def tate_variable(base: FieldDescriptor, nvars: int, cap: int, i: int) -> TateTruncation:
    arr = np.zeros((1, base.m) + (cap + 1,) * nvars + (1,), dtype=np.int64)
    idx = [0] * nvars
    idx[i] = 1
    arr[(0, 0) + tuple(idx) + (0,)] = 1
    return TateTruncation(base, base, nvars, cap, 1, 0, arr, None, (0, 0))


class TateComparison:
    """Result of comparing two truncations at their common precision."""

    def __init__(self, equal: bool, precision, agreement, witness) -> None:
        self.equal = equal
        self.precision = precision
        self.agreement = agreement
        self.witness = witness

    def __bool__(self) -> bool:
        return self.equal

    def __repr__(self) -> str:
        return (f"TateComparison(equal={self.equal}, precision={self.precision}, "
                f"agreement={self.agreement}, witness={self.witness})")


def tate_equal(a: _Series, b: _Series) -> TateComparison:
    """Equality modulo the weaker precision.

    ``precision`` is the u-exponent below which all coefficients were
    compared; ``agreement`` is the smallest u-exponent where the difference
    is nonzero (equal to ``precision`` when equal).
    """
    if a.nvars and b.nvars and a.cap != b.cap:
        raise ValueError("cap mismatch")
    diff = a - b
    prec = diff.prec
    if diff.is_zero():
        return TateComparison(True, prec, prec, None)
    L = diff.length
    flat = diff.arr.reshape(diff.arr.shape[0], diff.arr.shape[1], -1, L)
    cols = np.flatnonzero(diff.arr.reshape(-1, L).any(axis=0))
    first = diff.val + int(cols[0])
    where = np.argwhere(diff.arr[..., int(cols[0])])[0]
    witness = {"u_exponent": first, "grade": int(where[0]),
               "monomial": [int(v) for v in where[2:]]}
    del flat
    return TateComparison(False, prec, first, witness)


def char_field(base: FieldDescriptor, d: int) -> FieldDescriptor:
    return make_field(base.p, base.m * d)
