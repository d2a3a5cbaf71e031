"""Slow, independent reference computations used only by the tests."""

from __future__ import annotations

import itertools

from carlitzlab.algebra import Frac, Poly, enumerate_irreducibles, enumerate_monic


def brute_D(F, j):
    """Product of all monic polynomials of degree j."""
    acc = Poly.one(F)
    for a in enumerate_monic(F, j, "exact"):
        acc = acc * a
    return acc


def brute_factorial(F, n):
    q = F.q
    acc = Poly.one(F)
    i = 0
    while n:
        n, r = divmod(n, q)
        for _ in range(r):
            acc = acc * brute_D(F, i)
        i += 1
    return acc


def bc_by_series_inversion(F, upto):
    """BC(n) for n <= upto read off z / e_C(z) = sum BC(n)/Pi(n) z^n.

    e_C(z)/z = sum_j z^(q^j - 1) / D_j is inverted term by term as a power
    series with coefficients in K.
    """
    q = F.q
    one = Frac.one(F)
    zero = Frac.zero(F)
    e = [zero] * (upto + 1)
    j = 0
    while q**j - 1 <= upto:
        e[q**j - 1] = Frac(Poly.one(F), brute_D(F, j))
        j += 1
    inv = [zero] * (upto + 1)
    inv[0] = one
    for n in range(1, upto + 1):
        acc = zero
        for k in range(1, n + 1):
            if e[k]:
                acc = acc + e[k] * inv[n - k]
        inv[n] = -acc
    return {n: inv[n] * Frac(brute_factorial(F, n)) for n in range(upto + 1)}


# -- u-adic series over a prime field, u = 1/x ------------------------------------

def _mul(a, b, N, p):
    out = [0] * N
    for i, x in enumerate(a[:N]):
        if x:
            for j, y in enumerate(b[: N - i]):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _inv(a, N, p):
    inv0 = pow(a[0], p - 2, p)
    out = [0] * N
    out[0] = inv0
    for n in range(1, N):
        s = sum(a[k] * out[n - k] for k in range(1, min(n, len(a) - 1) + 1)) % p
        out[n] = (-s * inv0) % p
    return out


def _pow(a, e, N, p):
    out = [1] + [0] * (N - 1)
    for _ in range(e):
        out = _mul(out, a, N, p)
    return out


def inverse_power_series(a: Poly, n: int, N: int):
    """u-expansion of a^(-n) for monic a, coefficients of u^0..u^(N-1)."""
    p = a.field.p
    d = a.deg
    r = list(reversed(a.c))          # a = x^d * r(u)
    body = _inv(_pow(r, n, N, p), N, p)
    shift = d * n
    return [0] * min(shift, N) + body[: max(0, N - shift)]


def euler_zeta(F, n, D, N):
    """prod over monic irreducibles P with deg P < D of (1 - P^-n)^-1, mod u^N."""
    p = F.p
    acc = [1] + [0] * (N - 1)
    for d in range(1, D):
        for P in enumerate_irreducibles(F, d):
            x = inverse_power_series(P, n, N)
            one_minus = [(-c) % p for c in x]
            one_minus[0] = (one_minus[0] + 1) % p
            acc = _mul(acc, _inv(one_minus, N, p), N, p)
    return acc


def direct_zeta(F, n, D, N):
    p = F.p
    acc = [0] * N
    for d in range(D):
        for a in enumerate_monic(F, d, "exact"):
            x = inverse_power_series(a, n, N)
            acc = [(s + t) % p for s, t in zip(acc, x)]
    return acc


def necklace(q, d):
    def mobius(k):
        out, m, f = 1, k, 2
        while f * f <= m:
            if m % f == 0:
                m //= f
                if m % f == 0:
                    return 0
                out = -out
            f += 1
        return -out if m > 1 else out

    return sum(mobius(e) * q ** (d // e) for e in range(1, d + 1) if d % e == 0) // d


def brute_E(cache, d):
    """D_d^-1 prod_{a in A(d)} (z - a) as a dict of z-exponent -> Frac."""
    F = cache.field
    poly = {0: Frac.one(F)}
    for c in itertools.product(range(F.q), repeat=d):
        a = Frac(Poly(F, c))
        nxt = {}
        for k, v in poly.items():
            nxt[k + 1] = nxt.get(k + 1, Frac.zero(F)) + v
            nxt[k] = nxt.get(k, Frac.zero(F)) - v * a
        poly = nxt
    den = Frac(Poly.one(F), cache.D(d))
    return {k: v * den for k, v in poly.items() if v}


def brute_max_norm2(n, q):
    """Ordered length-2(q-1) tuples maximising |.|_2 subject to |.|_1 <= n (exhaustive)."""
    from carlitzlab.bcnum import norm1, norm2, ordered_split

    K = 2 * (q - 1)
    top = 0
    while q ** (top + 1) <= n:
        top += 1
    best = None
    for beta in itertools.product(range(top + 1), repeat=K):
        if ordered_split(beta) is None or norm1(beta, q) > n:
            continue
        v = norm2(beta, q)
        if best is None or v > best:
            best = v
    return best
