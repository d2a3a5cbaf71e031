# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled F_p polynomial kernels.

Polynomials are Python lists of ints in [0, p), lowest degree first, with no
trailing zeros.  Every function here has a twin in ``_fallback.py``.
"""

from libc.stdlib cimport malloc, free, calloc
from libc.string cimport memset
from libc.stdint cimport int64_t

cdef int KARATSUBA_CUTOFF = 40
# lazy reduction: coefficients stay below n * 2^depth * p^2, far from 2^63
cdef int64_t LAZY_P_LIMIT = 1 << 10


cdef inline int64_t _md(int64_t x, int64_t p) nogil:
    x %= p
    if x < 0:
        x += p
    return x


cdef int64_t* _load(list a, Py_ssize_t n) except NULL:
    cdef int64_t* buf = <int64_t*> malloc((n if n > 0 else 1) * sizeof(int64_t))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        buf[i] = a[i]
    return buf


cdef list _dump(int64_t* buf, Py_ssize_t n, int64_t p):
    while n > 0 and _md(buf[n - 1], p) == 0:
        n -= 1
    cdef list out = [0] * n
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = _md(buf[i], p)
    return out


cdef void _school(const int64_t* a, Py_ssize_t na, const int64_t* b, Py_ssize_t nb,
                  int64_t* out) nogil:
    # out must hold na + nb - 1 entries and is accumulated into
    cdef Py_ssize_t i, j
    cdef int64_t ai
    for i in range(na):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(nb):
            out[i + j] += ai * b[j]


cdef void _kara(const int64_t* a, const int64_t* b, Py_ssize_t n, int64_t* out,
                int64_t* scratch) nogil:
    # a, b have length n; out gets 2n - 1 entries (overwritten)
    cdef Py_ssize_t i
    if n <= KARATSUBA_CUTOFF:
        for i in range(2 * n - 1):
            out[i] = 0
        _school(a, n, b, n, out)
        return
    cdef Py_ssize_t h = n // 2
    cdef Py_ssize_t k = n - h
    cdef int64_t* sa = scratch
    cdef int64_t* sb = scratch + k
    cdef int64_t* mid = scratch + 2 * k
    cdef int64_t* rest = scratch + 4 * k
    # low product into out[0 : 2h-1], high product into out[2h : 2n-1]
    _kara(a, b, h, out, rest)
    out[2 * h - 1] = 0
    _kara(a + h, b + h, k, out + 2 * h, rest)
    for i in range(k):
        sa[i] = a[h + i]
        sb[i] = b[h + i]
    for i in range(h):
        sa[i] += a[i]
        sb[i] += b[i]
    _kara(sa, sb, k, mid, rest)
    for i in range(2 * h - 1):
        mid[i] -= out[i]
    for i in range(2 * k - 1):
        mid[i] -= out[2 * h + i]
    for i in range(2 * k - 1):
        out[h + i] += mid[i]


cdef void _mul_into(const int64_t* a, Py_ssize_t na, const int64_t* b, Py_ssize_t nb,
                    int64_t* out, int64_t* scratch, int64_t* tmp) nogil:
    # unbalanced sizes: chop the longer operand into blocks of the shorter length
    cdef Py_ssize_t i, off, blk
    if na < nb:
        _mul_into(b, nb, a, na, out, scratch, tmp)
        return
    for i in range(na + nb - 1):
        out[i] = 0
    if nb <= KARATSUBA_CUTOFF:
        _school(a, na, b, nb, out)
        return
    off = 0
    while off < na:
        blk = nb if na - off >= nb else na - off
        if blk == nb:
            _kara(a + off, b, nb, tmp, scratch)
            for i in range(2 * nb - 1):
                out[off + i] += tmp[i]
        else:
            for i in range(blk + nb - 1):
                tmp[i] = 0
            _school(a + off, blk, b, nb, tmp)
            for i in range(blk + nb - 1):
                out[off + i] += tmp[i]
        off += blk


def mul(list a, list b, long p):
    """Product of two F_p polynomials."""
    cdef Py_ssize_t na = len(a), nb = len(b)
    if na == 0 or nb == 0:
        return []
    cdef int64_t* ca = _load(a, na)
    cdef int64_t* cb = _load(b, nb)
    cdef Py_ssize_t n = na + nb - 1
    cdef Py_ssize_t m = na if na < nb else nb
    cdef int64_t* out = <int64_t*> calloc(n, sizeof(int64_t))
    cdef int64_t* scratch = <int64_t*> calloc(8 * m + 64, sizeof(int64_t))
    cdef int64_t* tmp = <int64_t*> calloc(2 * m + 1, sizeof(int64_t))
    cdef Py_ssize_t i, j
    cdef int64_t pp = p
    try:
        if p > LAZY_P_LIMIT:
            for i in range(na):
                for j in range(nb):
                    out[i + j] = (out[i + j] + ca[i] * cb[j]) % pp
        else:
            with nogil:
                _mul_into(ca, na, cb, nb, out, scratch, tmp)
        return _dump(out, n, pp)
    finally:
        free(ca)
        free(cb)
        free(out)
        free(scratch)
        free(tmp)


def mullow(list a, list b, Py_ssize_t n, long p):
    """Product of two F_p polynomials truncated to its first n coefficients."""
    cdef Py_ssize_t na = len(a), nb = len(b)
    if na > n:
        na = n
    if nb > n:
        nb = n
    if na == 0 or nb == 0 or n <= 0:
        return []
    cdef int64_t* ca = _load(a, na)
    cdef int64_t* cb = _load(b, nb)
    cdef Py_ssize_t top = na + nb - 1
    if top > n:
        top = n
    cdef Py_ssize_t full = na + nb - 1
    cdef Py_ssize_t m = na if na < nb else nb
    cdef bint kara = p <= LAZY_P_LIMIT and 2 * top >= full and m > KARATSUBA_CUTOFF
    cdef int64_t* out = <int64_t*> calloc(full if kara else top, sizeof(int64_t))
    cdef int64_t* scratch = NULL
    cdef int64_t* tmp = NULL
    cdef Py_ssize_t i, j, lim
    cdef int64_t pp = p
    try:
        if kara:
            # most of the product survives: a full Karatsuba product is cheaper
            scratch = <int64_t*> calloc(8 * m + 64, sizeof(int64_t))
            tmp = <int64_t*> calloc(2 * m + 1, sizeof(int64_t))
            with nogil:
                _mul_into(ca, na, cb, nb, out, scratch, tmp)
        elif p <= LAZY_P_LIMIT:
            with nogil:
                for i in range(na):
                    if ca[i] == 0:
                        continue
                    lim = top - i
                    if lim > nb:
                        lim = nb
                    for j in range(lim):
                        out[i + j] += ca[i] * cb[j]
        else:
            with nogil:
                for i in range(na):
                    if ca[i] == 0:
                        continue
                    lim = top - i
                    if lim > nb:
                        lim = nb
                    for j in range(lim):
                        out[i + j] = (out[i + j] + ca[i] * cb[j]) % pp
        return _dump(out, top, pp)
    finally:
        free(ca)
        free(cb)
        free(out)
        free(scratch)
        free(tmp)


def series_inv(list a, Py_ssize_t n, long p):
    """First n coefficients of 1/a as a power series; a[0] must be nonzero."""
    if n <= 0:
        return []
    if len(a) == 0 or a[0] % p == 0:
        raise ZeroDivisionError("constant term is not invertible")
    cdef Py_ssize_t na = len(a)
    if na > n:
        na = n
    cdef int64_t* ca = _load(a, na)
    cdef int64_t* out = <int64_t*> calloc(n, sizeof(int64_t))
    cdef int64_t pp = p
    cdef int64_t inv0 = pow(int(a[0]), p - 2, p)
    cdef Py_ssize_t k, j, lim
    cdef int64_t acc
    try:
        with nogil:
            out[0] = inv0
            for k in range(1, n):
                acc = 0
                lim = k if k < na - 1 else na - 1
                for j in range(1, lim + 1):
                    acc = (acc + ca[j] * out[k - j]) % pp
                out[k] = _md(-acc * inv0, pp)
        return _dump(out, n, pp)
    finally:
        free(ca)
        free(out)


cdef Py_ssize_t _rem_inplace(int64_t* r, Py_ssize_t nr, const int64_t* b, Py_ssize_t nb,
                             int64_t inv, int64_t p, int64_t* quo) nogil:
    # reduce r (length nr) modulo b (length nb); returns the new length of r
    cdef Py_ssize_t i, j, db = nb - 1
    cdef int64_t c
    for i in range(nr - nb, -1, -1):
        c = _md(r[i + db], p)
        r[i + db] = 0
        if c != 0:
            c = (c * inv) % p
            for j in range(db):
                r[i + j] = (r[i + j] - c * b[j]) % p
        if quo != NULL:
            quo[i] = c
    cdef Py_ssize_t n = nr if nr < db else db
    while n > 0 and _md(r[n - 1], p) == 0:
        n -= 1
    return n


def divmod_(list a, list b, long p):
    """Quotient and remainder of F_p polynomials; b must be nonzero."""
    cdef Py_ssize_t na = len(a), nb = len(b)
    if nb == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if na < nb:
        return [], list(a)
    cdef int64_t* ca = _load(a, na)
    cdef int64_t* cb = _load(b, nb)
    cdef int64_t* quo = <int64_t*> calloc(na - nb + 1, sizeof(int64_t))
    cdef int64_t inv = pow(int(b[nb - 1]), p - 2, p)
    cdef Py_ssize_t nr
    try:
        with nogil:
            nr = _rem_inplace(ca, na, cb, nb, inv, p, quo)
        return _dump(quo, na - nb + 1, p), _dump(ca, nr, p)
    finally:
        free(ca)
        free(cb)
        free(quo)


def gcd(list a, list b, long p):
    """Monic gcd of two F_p polynomials (empty list when both are zero)."""
    cdef Py_ssize_t na = len(a), nb = len(b)
    cdef int64_t* x = _load(a, na)
    cdef int64_t* y = _load(b, nb)
    cdef int64_t* t
    cdef Py_ssize_t nt
    cdef int64_t inv
    cdef Py_ssize_t i
    try:
        with nogil:
            while nb > 0:
                if na >= nb:
                    inv = _md(y[nb - 1], p)
                    inv = _powmod(inv, p - 2, p)
                    na = _rem_inplace(x, na, y, nb, inv, p, NULL)
                t = x
                x = y
                y = t
                nt = na
                na = nb
                nb = nt
            if na > 0:
                inv = _powmod(_md(x[na - 1], p), p - 2, p)
                for i in range(na):
                    x[i] = (_md(x[i], p) * inv) % p
        return _dump(x, na, p)
    finally:
        free(x)
        free(y)


cdef int64_t _powmod(int64_t b, int64_t e, int64_t p) nogil:
    cdef int64_t r = 1
    b %= p
    while e > 0:
        if e & 1:
            r = (r * b) % p
        b = (b * b) % p
        e >>= 1
    return r
