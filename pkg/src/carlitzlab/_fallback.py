"""Pure-Python/numpy twins of the compiled kernels in ``_kernels.pyx``.

Same contract: lists of ints in [0, p), low degree first, no trailing zeros.
"""

from __future__ import annotations

import numpy as np

_SMALL = 48


def _trim(c: list[int]) -> list[int]:
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    del c[n:]
    return c


def mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    if min(len(a), len(b)) <= _SMALL:
        if len(a) < len(b):
            a, b = b, a
        out = [0] * (len(a) + len(b) - 1)
        for j, bj in enumerate(b):
            if bj:
                for i, ai in enumerate(a):
                    out[i + j] += ai * bj
        return _trim([x % p for x in out])
    # int64 convolution is exact while len * p^2 < 2^63
    out = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % p
    return _trim(out.tolist())


def mullow(a: list[int], b: list[int], n: int, p: int) -> list[int]:
    if n <= 0:
        return []
    return _trim(mul(a[:n], b[:n], p)[:n])


def series_inv(a: list[int], n: int, p: int) -> list[int]:
    if n <= 0:
        return []
    if not a or a[0] % p == 0:
        raise ZeroDivisionError("constant term is not invertible")
    inv0 = pow(a[0], p - 2, p)
    a = a[:n]
    out = [0] * n
    out[0] = inv0
    for k in range(1, n):
        acc = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            acc += a[j] * out[k - j]
        out[k] = (-acc * inv0) % p
    return _trim(out)


def divmod_(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], list(a)
    db = len(b) - 1
    inv = pow(b[-1], p - 2, p)
    if len(a) - db <= _SMALL or db <= 4:
        r = list(a)
        quo = [0] * (len(a) - db)
        for i in range(len(a) - len(b), -1, -1):
            c = r[i + db] % p
            r[i + db] = 0
            if c:
                c = c * inv % p
                quo[i] = c
                for j in range(db):
                    r[i + j] = (r[i + j] - c * b[j]) % p
        return _trim(quo), _trim(r[:db])
    r = np.asarray(a, dtype=np.int64)
    bb = np.asarray(b[:db], dtype=np.int64)
    quo = np.zeros(len(a) - db, dtype=np.int64)
    for i in range(len(a) - len(b), -1, -1):
        c = int(r[i + db]) % p
        if c:
            c = c * inv % p
            quo[i] = c
            seg = r[i:i + db]
            seg -= c * bb
            seg %= p
    return _trim(quo.tolist()), _trim((r[:db] % p).tolist())


def gcd(a: list[int], b: list[int], p: int) -> list[int]:
    x, y = list(a), list(b)
    while y:
        x, y = y, divmod_(x, y, p)[1]
    if not x:
        return []
    inv = pow(x[-1], p - 2, p)
    return [c * inv % p for c in x]
