"""Pure-Python reference implementation of the hot integer kernels.

Every function here has a compiled twin in ``_speedups.pyx`` with the same
signature and exact semantics; the test suite checks the two against each
other. All arguments are plain Python lists of ints.
"""

from math import gcd

BACKEND = "pure"


def row_combine(r, row, a, b, start):
    """In place: r[i] = a*r[i] - b*row[i] for all i >= start."""
    for i in range(start, len(r)):
        r[i] = a * r[i] - b * row[i]


def vec_content(r):
    """gcd of all entries (non-negative); 0 for the zero vector."""
    g = 0
    for x in r:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


def vec_divexact(r, g):
    """In place: divide every entry by g (entries must be divisible)."""
    for i in range(len(r)):
        r[i] //= g


def dot(u, v):
    s = 0
    for x, y in zip(u, v):
        if x and y:
            s += x * y
    return s


def mat_mul(A, B):
    """Integer matrix product: A is m x k, B is k x n (lists of lists)."""
    if not A:
        return []
    k = len(A[0])
    n = len(B[0]) if B else 0
    out = []
    for arow in A:
        crow = [0] * n
        for t in range(k):
            a = arow[t]
            if a:
                brow = B[t]
                for j in range(n):
                    if brow[j]:
                        crow[j] += a * brow[j]
        out.append(crow)
    return out


def mat_vec(A, v):
    out = []
    for arow in A:
        s = 0
        for x, y in zip(arow, v):
            if x and y:
                s += x * y
        out.append(s)
    return out
