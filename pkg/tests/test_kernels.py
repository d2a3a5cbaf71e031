import os
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from carlitzlab import _fallback, kernels

try:
    from carlitzlab import _kernels
except ImportError:  # extension not built
    _kernels = None

needs_ext = pytest.mark.skipif(_kernels is None, reason="compiled extension not built")
primes = st.sampled_from([2, 3, 5, 7])


def coeffs(p, max_len=120):
    return st.lists(st.integers(0, p - 1), max_size=max_len).map(_fallback._trim)


@needs_ext
@given(primes.flatmap(lambda p: st.tuples(st.just(p), coeffs(p), coeffs(p))))
def test_mul_agrees(args):
    p, a, b = args
    assert _kernels.mul(list(a), list(b), p) == _fallback.mul(a, b, p)


@needs_ext
@given(primes.flatmap(lambda p: st.tuples(st.just(p), coeffs(p), coeffs(p), st.integers(0, 150))))
def test_mullow_agrees(args):
    p, a, b, n = args
    assert _kernels.mullow(list(a), list(b), n, p) == _fallback.mullow(a, b, n, p)


@needs_ext
@given(primes.flatmap(lambda p: st.tuples(st.just(p), coeffs(p).filter(lambda c: c and c[0]), st.integers(1, 90))))
def test_series_inv_agrees(args):
    p, a, n = args
    inv = _kernels.series_inv(list(a), n, p)
    assert inv == _fallback.series_inv(a, n, p)
    prod = _fallback.mullow(a, inv, n, p)
    assert prod == [1]


@needs_ext
@given(primes.flatmap(lambda p: st.tuples(st.just(p), coeffs(p), coeffs(p, 40).filter(bool))))
def test_divmod_and_gcd_agree(args):
    p, a, b = args
    assert _kernels.divmod_(list(a), list(b), p) == _fallback.divmod_(a, b, p)
    assert _kernels.gcd(list(a), list(b), p) == _fallback.gcd(a, b, p)


def test_large_product_takes_numpy_path():
    p = 3
    a = [(i * 7 + 1) % p for i in range(400)]
    b = [(i * 5 + 2) % p for i in range(300)]
    small = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            small[i + j] += x * y
    assert _fallback.mul(a, b, p) == _fallback._trim([c % p for c in small])


def test_pure_switch():
    env = dict(os.environ, CARLITZLAB_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from carlitzlab import kernels; print(kernels.BACKEND)"],
                         capture_output=True, text=True, env=env)
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND in ("compiled", "python")
