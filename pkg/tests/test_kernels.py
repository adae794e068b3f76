"""Parity between the compiled and pure kernel backends, including the
int64 overflow boundary where the compiled path must fall back."""

import random

import pytest

from llv_lab._kernels import pyref

try:
    from llv_lab._kernels import _speedups
except ImportError:
    _speedups = None

needs_compiled = pytest.mark.skipif(_speedups is None,
                                    reason="compiled kernels not built")

MAGNITUDES = [5, 2**30, 2**62, 2**80]


def _rand_vec(rng, n, mag):
    return [rng.randint(-mag, mag) for _ in range(n)]


@needs_compiled
def test_row_combine_parity():
    rng = random.Random(0)
    for _ in range(500):
        n = rng.randint(0, 12)
        mag = rng.choice(MAGNITUDES)
        r1 = _rand_vec(rng, n, mag)
        r2 = r1[:]
        row = _rand_vec(rng, n, mag)
        a, b = rng.randint(-mag, mag), rng.randint(-mag, mag)
        start = rng.randint(0, max(n, 1) - 1) if n else 0
        pyref.row_combine(r1, row, a, b, start)
        _speedups.row_combine(r2, row, a, b, start)
        assert r1 == r2


@needs_compiled
def test_content_divexact_dot_parity():
    rng = random.Random(1)
    for _ in range(500):
        n = rng.randint(0, 10)
        mag = rng.choice(MAGNITUDES)
        v = _rand_vec(rng, n, mag)
        assert pyref.vec_content(v[:]) == _speedups.vec_content(v[:])
        u = _rand_vec(rng, n, mag)
        assert pyref.dot(u, v) == _speedups.dot(u, v)
        g = rng.choice([1, 2, 3, 7])
        w1 = [x * g for x in v]
        w2 = w1[:]
        pyref.vec_divexact(w1, g)
        _speedups.vec_divexact(w2, g)
        assert w1 == w2


@needs_compiled
def test_mat_mul_parity():
    rng = random.Random(2)
    for _ in range(200):
        m, k, n = (rng.randint(1, 6) for _ in range(3))
        mag = rng.choice(MAGNITUDES)
        A = [_rand_vec(rng, k, mag) for _ in range(m)]
        B = [_rand_vec(rng, n, mag) for _ in range(k)]
        assert pyref.mat_mul(A, B) == _speedups.mat_mul(A, B)
        v = _rand_vec(rng, k, mag)
        assert pyref.mat_vec(A, v) == _speedups.mat_vec(A, v)


@needs_compiled
def test_dot_overflow_boundary():
    # products and partial sums right at the int64 edge
    big = 2**62
    assert _speedups.dot([big, big], [2, -2]) == 0
    assert _speedups.dot([2**31, 2**31, 1], [2**31, 2**31, 7]) == 2**63 + 7
    assert _speedups.dot([2**63 - 1], [1]) == 2**63 - 1
    assert _speedups.dot([2**63 - 1, 1], [1, 1]) == 2**63
    assert _speedups.dot([2**70, -3], [5, 2**70]) == 5 * 2**70 - 3 * 2**70
