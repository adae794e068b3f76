import random
from fractions import Fraction

from llv_lab.linalg import (RowBasis, finvert, nullspace, rank_of,
                            solve_affine, span_intersect)


def rref_kernel(rows, n):
    """Independent oracle: textbook rational RREF kernel."""
    A = [[Fraction(x) for x in row] for row in rows]
    piv_cols = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(A)) if A[i][c]), None)
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        A[r] = [x / A[r][c] for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        piv_cols.append(c)
        r += 1
    kern = []
    for fc in (c for c in range(n) if c not in piv_cols):
        x = [Fraction(0)] * n
        x[fc] = Fraction(1)
        for rr, pc in enumerate(piv_cols):
            x[pc] = -A[rr][fc]
        kern.append(x)
    return kern


def test_insert_and_membership():
    b = RowBasis(3)
    assert b.insert([1, 2, 3]) == 0
    assert b.insert([2, 4, 6]) is None
    assert b.insert([0, 1, 1]) == 1
    assert b.rank == 2
    assert b.contains([1, 3, 4])
    assert not b.contains([0, 0, 1])
    assert b.contains([Fraction(1, 2), 1, Fraction(3, 2)])


def test_solve_combination_exact():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(1, 6)
        b = RowBasis(n)
        rows = []
        for _ in range(rng.randint(1, n)):
            row = [rng.randint(-5, 5) for _ in range(n)]
            if b.insert(row) is not None:
                rows.append(b.rows[-1][:])
        coeffs = [Fraction(rng.randint(-7, 7), rng.randint(1, 4))
                  for _ in rows]
        vec = [sum(c * row[j] for c, row in zip(coeffs, rows))
               for j in range(n)]
        got = b.solve_combination(vec)
        assert got is not None
        recon = [sum(got.get(i, Fraction(0)) * b.rows[i][j]
                     for i in range(len(b.rows))) for j in range(n)]
        assert [Fraction(x) for x in vec] == recon
    assert RowBasis(2).solve_combination([1, 0]) is None


def test_residue_tracked_is_affine():
    rng = random.Random(4)
    for _ in range(200):
        n = rng.randint(1, 7)
        b = RowBasis(n)
        for _ in range(rng.randint(0, n)):
            b.insert([rng.randint(-4, 4) for _ in range(n)])
        vec = [rng.randint(-6, 6) for _ in range(n)]
        rem, alpha = b.residue_tracked(vec)
        # vec - rem/alpha must lie in the span, and rem has no pivot support
        diff = [Fraction(v) - Fraction(r) / alpha for v, r in zip(vec, rem)]
        assert not any(diff) or b.contains(diff)
        for p in b.pivots:
            assert rem[p] == 0


def test_nullspace_against_rref_oracle():
    rng = random.Random(5)
    for _ in range(800):
        m = rng.randint(1, 6)
        n = rng.randint(1, 7)
        rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)]
        got = nullspace(rows, n)
        want = rref_kernel(rows, n)
        assert len(got) == len(want)
        for v in got:
            for row in rows:
                assert sum(a * b for a, b in zip(row, v)) == 0
        # spans agree
        rb = RowBasis(n)
        for v in got:
            rb.insert(v)
        for w in want:
            assert rb.contains(w)


def test_solve_affine():
    sol, nullity = solve_affine([[1, 1], [1, -1]], [2, 0], 2)
    assert sol == [1, 1] and nullity == 0
    sol, nullity = solve_affine([[1, 1, 0]], [3], 3)
    assert nullity == 2 and sol is not None
    assert sol[0] + sol[1] == 3 and sol[2] == 0
    sol, nullity = solve_affine([[1, 0], [1, 0]], [1, 2], 2)
    assert sol is None


def test_span_intersect():
    got = span_intersect([[1, 0, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1]], 3)
    assert got == [[0, 1, 0]]
    assert span_intersect([[1, 0]], [[0, 1]], 2) == []
    # dependent inputs still give the right intersection
    got = span_intersect([[1, 1, 0], [2, 2, 0], [0, 0, 1]],
                         [[1, 1, 1]], 3)
    rb = RowBasis(3)
    for v in got:
        rb.insert(v)
    assert rb.rank == 1 and rb.contains([1, 1, 1])


def test_finvert_and_rank():
    q = [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]
    inv = finvert(q)
    assert inv == [[0, 1], [1, 0]]
    assert rank_of([[1, 2], [2, 4]], 2) == 1
    try:
        finvert([[1, 1], [1, 1]])
        assert False, "singular matrix must raise"
    except ValueError:
        pass
