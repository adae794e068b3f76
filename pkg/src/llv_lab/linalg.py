"""Exact rational linear algebra on top of the integer kernels.

Vectors live in Q^n but are stored as primitive integer lists whenever only
their span matters (span membership, rank, kernels); true rational values
appear only at API boundaries. The workhorse is :class:`RowBasis`, an
incremental fraction-free echelon form: rows are kept primitive with a
positive leading entry, pivots are the leading columns, and reduction of a
candidate against the basis is a sequence of two-term integer row updates
executed by the selected kernel backend.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from . import _kernels as K


def to_int_list(vec) -> list[int]:
    """Integer vector with the same span direction as ``vec`` (denominators
    cleared, content kept)."""
    out = []
    den = 1
    for x in vec:
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
        elif not isinstance(x, int):
            raise TypeError(f"expected int or Fraction, got {type(x).__name__}")
    for x in vec:
        if isinstance(x, Fraction):
            out.append(int(x * den))
        else:
            out.append(x * den)
    return out


def as_int_vec(vec) -> tuple[list[int], int]:
    """(nums, den) with vec == nums/den exactly, den > 0."""
    den = 1
    for x in vec:
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    nums = [int(x * den) if isinstance(x, Fraction) else x * den for x in vec]
    return nums, den


def mat_as_int(mat) -> tuple[list[list[int]], int]:
    """(int matrix, den) with mat == int_matrix/den exactly, den > 0."""
    den = 1
    for row in mat:
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
    out = [[int(x * den) if isinstance(x, Fraction) else x * den for x in row]
           for row in mat]
    return out, den


def primitive(vec: list[int]) -> list[int]:
    """Divide by the content; flip sign so the leading nonzero is positive."""
    g = K.vec_content(vec)
    if g == 0:
        return vec
    if g > 1:
        K.vec_divexact(vec, g)
    for x in vec:
        if x:
            if x < 0:
                for i in range(len(vec)):
                    vec[i] = -vec[i]
            break
    return vec


def is_zero_vec(vec) -> bool:
    return all(x == 0 for x in vec)


class RowBasis:
    """Incremental fraction-free row echelon basis of a subspace of Q^n.

    Rows are primitive integer vectors; each row's leading column is its
    pivot and no two rows share a pivot. Rows are not inter-reduced, so the
    representation depends only on the insertion order, which keeps every
    derived basis deterministic.
    """

    __slots__ = ("ncols", "rows", "pivots", "_by_col")

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []
        self._by_col: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, r: list[int]) -> int:
        """Eliminate pivot columns of r in place; return leading col or -1."""
        i = 0
        n = self.ncols
        by_col = self._by_col
        while i < n:
            if r[i] == 0:
                i += 1
                continue
            rowidx = by_col.get(i)
            if rowidx is None:
                return i
            row = self.rows[rowidx]
            p = row[i]
            c = r[i]
            g = gcd(p, c)
            K.row_combine(r, row, p // g, c // g, i)
            g2 = K.vec_content(r)
            if g2 > 1:
                K.vec_divexact(r, g2)
        return -1

    def insert(self, vec) -> int | None:
        """Add vec to the span. Returns the new row index, or None if vec
        was already in the span."""
        r = to_int_list(vec)
        if len(r) != self.ncols:
            raise ValueError(f"vector has {len(r)} entries, basis has {self.ncols} columns")
        lead = self._reduce(r)
        if lead < 0:
            return None
        primitive(r)
        idx = len(self.rows)
        self.rows.append(r)
        self.pivots.append(lead)
        self._by_col[lead] = idx
        return idx

    def residue(self, vec) -> list[int]:
        """Remainder of vec after elimination; zero iff vec is in the span.
        Only defined up to a positive rational scale."""
        r = to_int_list(vec)
        self._reduce(r)
        return r

    def contains(self, vec) -> bool:
        return is_zero_vec(self.residue(vec))

    def residue_tracked(self, vec) -> tuple[list[int], Fraction]:
        """(r, alpha) with vec congruent to r/alpha modulo the span. Unlike
        :meth:`residue` this pins the affine remainder, not just its line."""
        r, den = as_int_vec(vec)
        if len(r) != self.ncols:
            raise ValueError("length mismatch")
        alpha = Fraction(den)
        i = 0
        n = self.ncols
        while i < n:
            if r[i] == 0:
                i += 1
                continue
            rowidx = self._by_col.get(i)
            if rowidx is None:
                i += 1
                continue
            row = self.rows[rowidx]
            p = row[i]
            c = r[i]
            g = gcd(p, c)
            a = p // g
            # scale the whole vector: entries before i hold remainder parts
            K.row_combine(r, row, a, c // g, 0)
            alpha *= a
            g2 = K.vec_content(r)
            if g2 > 1:
                K.vec_divexact(r, g2)
                alpha /= g2
        return r, alpha

    def solve_combination(self, vec) -> dict[int, Fraction] | None:
        """Coefficients c with vec == sum(c[i] * rows[i]), or None if vec is
        not in the span."""
        r, den = as_int_vec(vec)
        if len(r) != self.ncols:
            raise ValueError("length mismatch")
        alpha = Fraction(den)
        coeffs: dict[int, Fraction] = {}
        i = 0
        n = self.ncols
        while i < n:
            if r[i] == 0:
                i += 1
                continue
            rowidx = self._by_col.get(i)
            if rowidx is None:
                return None
            row = self.rows[rowidx]
            p = row[i]
            c = r[i]
            g = gcd(p, c)
            a = p // g
            b = c // g
            K.row_combine(r, row, a, b, i)
            alpha *= a
            for j in coeffs:
                coeffs[j] *= a
            coeffs[rowidx] = coeffs.get(rowidx, Fraction(0)) + b
            g2 = K.vec_content(r)
            if g2 > 1:
                K.vec_divexact(r, g2)
                alpha /= g2
                for j in coeffs:
                    coeffs[j] /= g2
        # invariant: alpha*vec - sum(coeffs[j]*rows[j]) == 0
        return {j: c / alpha for j, c in coeffs.items() if c}

    def basis_rows(self) -> list[list[int]]:
        return [row[:] for row in self.rows]


def rank_of(rows, ncols: int) -> int:
    basis = RowBasis(ncols)
    for row in rows:
        basis.insert(row)
    return basis.rank


def nullspace(rows, ncols: int) -> list[list[int]]:
    """Primitive integer basis of {x : row . x == 0 for every row}.

    Deterministic: one kernel vector per free column, in ascending column
    order, each normalized with positive entry at its free column.
    """
    basis = RowBasis(ncols)
    for row in rows:
        basis.insert(row)
    return _kernel_from_echelon(basis, ncols)


def _kernel_from_echelon(basis: RowBasis, ncols: int) -> list[list[int]]:
    pivot_set = set(basis.pivots)
    order = sorted(range(len(basis.rows)), key=lambda i: -basis.pivots[i])
    out = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        X = [0] * ncols
        X[f] = 1
        steps = 0
        for i in order:
            p = basis.pivots[i]
            if p > f:
                continue
            row = basis.rows[i]
            s = K.dot(row[p + 1:], X[p + 1:])
            if s == 0:
                continue
            piv = row[p]
            g = gcd(s, piv)
            t = piv // g
            scale = abs(t)
            if scale != 1:
                for c in range(ncols):
                    if X[c]:
                        X[c] *= scale
                s *= scale
            X[p] = -s // piv
            steps += 1
            if steps % 8 == 0:
                # rescalings compound multiplicatively; keep entries small
                g2 = K.vec_content(X)
                if g2 > 1:
                    K.vec_divexact(X, g2)
        primitive(X)
        out.append(X)
    return out


def solve_affine(rows, rhs, ncols: int) -> tuple[list[Fraction] | None, int]:
    """Solve the linear system given by equation rows and right-hand sides.

    Returns (particular solution or None if inconsistent, solution space
    dimension). The particular solution sets all free variables to zero.
    """
    basis = RowBasis(ncols + 1)
    for row, b in zip(rows, rhs):
        basis.insert(list(row) + [b])
    if ncols in basis.pivots:
        nullity = ncols - (basis.rank - 1)
        return None, nullity
    nullity = ncols - basis.rank
    # kernel vector with last coordinate 1 encodes A x + b = 0
    X = [0] * (ncols + 1)
    X[ncols] = 1
    order = sorted(range(len(basis.rows)), key=lambda i: -basis.pivots[i])
    steps = 0
    for i in order:
        p = basis.pivots[i]
        row = basis.rows[i]
        s = K.dot(row[p + 1:], X[p + 1:])
        if s == 0:
            X[p] = 0
            continue
        piv = row[p]
        g = gcd(s, piv)
        t = piv // g
        scale = abs(t)
        if scale != 1:
            for c in range(ncols + 1):
                if X[c]:
                    X[c] *= scale
            s *= scale
        X[p] = -s // piv
        steps += 1
        if steps % 8 == 0:
            g2 = K.vec_content(X)
            if g2 > 1:
                K.vec_divexact(X, g2)
    den = X[ncols]
    sol = [Fraction(-X[c], den) for c in range(ncols)]
    return sol, nullity


def span_intersect(u_rows, v_rows, ncols: int) -> list[list[int]]:
    """Basis of span(u_rows) intersected with span(v_rows)."""
    u_rows = list(u_rows)
    v_rows = list(v_rows)
    ku, kv = len(u_rows), len(v_rows)
    if ku == 0 or kv == 0:
        return []
    eqs = []
    for c in range(ncols):
        eqs.append([u_rows[i][c] for i in range(ku)] +
                   [-v_rows[j][c] for j in range(kv)])
    sols = nullspace(eqs, ku + kv)
    out = RowBasis(ncols)
    for sol in sols:
        vec = [0] * ncols
        for i in range(ku):
            if sol[i]:
                a = sol[i]
                urow = u_rows[i]
                for c in range(ncols):
                    if urow[c]:
                        vec[c] += a * urow[c]
        out.insert(vec)
    return out.basis_rows()


# Small dense rational helpers (sizes here are at most a few hundred).

def fmat_mul(A, B):
    n = len(B[0]) if B else 0
    out = []
    for arow in A:
        crow = [Fraction(0)] * n
        for t, a in enumerate(arow):
            if a:
                brow = B[t]
                for j in range(n):
                    if brow[j]:
                        crow[j] += a * brow[j]
        out.append(crow)
    return out


def fmat_vec(A, v):
    out = []
    for arow in A:
        s = Fraction(0)
        for a, x in zip(arow, v):
            if a and x:
                s += a * x
        out.append(s)
    return out


def fidentity(n):
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
            for i in range(n)]


def finvert(mat):
    """Inverse of a square rational matrix by Gauss-Jordan elimination."""
    n = len(mat)
    A = [[Fraction(x) for x in row] for row in mat]
    I = fidentity(n)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if A[r][col]:
                piv = r
                break
        if piv is None:
            raise ValueError("matrix is singular")
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            I[col], I[piv] = I[piv], I[col]
        p = A[col][col]
        if p != 1:
            A[col] = [x / p for x in A[col]]
            I[col] = [x / p for x in I[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
                I[r] = [x - f * y for x, y in zip(I[r], I[col])]
    return I
