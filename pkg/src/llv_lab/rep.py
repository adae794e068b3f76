"""Representation analysis of so(H)-stable subspaces: commutants, the
Casimir operator, isotypic splitting and the constituent check backing the
finiteness certificate.

Everything is done with rational (non-split) methods: trivial parts are
joint kernels, the splitting uses Casimir eigenspaces over Q, and
multiplicities are read off commutant dimensions. The Casimir operator is
built from the closed-form dual pairs of the wedge basis: with respect to
the trace form of the standard (degree-2) restriction, the dual of
e_i ^ e_j is -(1/2) f_i ^ f_j where f_k are the q-dual basis vectors, so no
large Gram matrix ever gets inverted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from . import _kernels as K
from .errors import MalformedAlgebraError, StabilityError
from .linalg import RowBasis, nullspace, span_intersect
from .llv import IntBlocks, LieSubalgebra, op_to_int_blocks
from .ring import GradedAlgebra, GradedEndomorphism
from .decomposition import GradedSubspace


def _as_int_ops(operators):
    out = []
    for op in operators:
        if isinstance(op, GradedEndomorphism):
            out.append((op.shift, op_to_int_blocks(op)))
        else:
            out.append(op)
    return out


class SubspaceCoords:
    """Coordinate chart on a graded subspace: concatenates the per-degree
    echelon bases and expresses images of operators in those coordinates."""

    def __init__(self, S: GradedSubspace):
        self.S = S
        self.degrees = S.degrees()
        self.offsets = {}
        off = 0
        for d in self.degrees:
            self.offsets[d] = off
            off += S.dim_at(d)
        self.total = off

    def restrict_int_op(self, shift: int, blocks: IntBlocks, opname="operator"):
        """Matrix of the operator on the subspace, exact rational entries.
        Raises StabilityError when an image leaves the subspace."""
        mat = [[Fraction(0)] * self.total for _ in range(self.total)]
        for d in self.degrees:
            blk = blocks.get(d)
            if blk is None:
                continue
            tgt = d + shift
            rows_src = self.S.vectors(d)
            for col, svec in enumerate(rows_src):
                img = K.mat_vec(blk, svec)
                if not any(img):
                    continue
                if tgt not in self.offsets:
                    raise StabilityError(
                        f"{opname} maps degree {d} outside the subspace")
                coords = self.S._bases[tgt].solve_combination(img)
                if coords is None:
                    raise StabilityError(
                        f"{opname} image of a degree-{d} vector leaves the subspace")
                for ridx, c in coords.items():
                    mat[self.offsets[tgt] + ridx][self.offsets[d] + col] = c
        return mat

    def restrict_frac_op(self, op: GradedEndomorphism):
        """Exact rational restriction of a GradedEndomorphism to the chart."""
        mat = [[Fraction(0)] * self.total for _ in range(self.total)]
        for d in self.degrees:
            blk = op.blocks.get(d)
            if blk is None:
                continue
            tgt = d + op.shift
            for col, svec in enumerate(self.S.vectors(d)):
                img = [sum(row[k] * svec[k] for k in range(len(svec)) if svec[k])
                       for row in blk]
                if not any(img):
                    continue
                if tgt not in self.offsets:
                    raise StabilityError(
                        f"operator maps degree {d} outside the subspace")
                coords = self.S._bases[tgt].solve_combination(img)
                if coords is None:
                    raise StabilityError("operator image leaves the subspace")
                for ridx, c in coords.items():
                    mat[self.offsets[tgt] + ridx][self.offsets[d] + col] = c
        return mat

    def to_algebra_vectors(self, vec) -> list[tuple[int, list[Fraction]]]:
        """Total-coordinate vector back to per-degree algebra coordinates."""
        out = []
        for d in self.degrees:
            rows = self.S.vectors(d)
            off = self.offsets[d]
            coords = [Fraction(0)] * len(rows[0]) if rows else []
            used = False
            for k, row in enumerate(rows):
                c = vec[off + k]
                if c:
                    used = True
                    for j, x in enumerate(row):
                        if x:
                            coords[j] += c * x
            if used:
                out.append((d, coords))
        return out


def _scaled_int(mat):
    from math import gcd, lcm
    den = 1
    for row in mat:
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
    out = [[int(x * den) for x in row] for row in mat]
    g = 0
    for row in out:
        g = gcd(g, K.vec_content(row))
        if g == 1:
            break
    if g > 1:
        for row in out:
            K.vec_divexact(row, g)
    return out


def commutant(operators, S: GradedSubspace) -> list[list[list[int]]]:
    """Basis of the endomorphism algebra of S commuting with every operator
    restriction (full End(S), degrees may mix). Exact null-space computation,
    deterministic output order.

    Every constraint operator is shift-homogeneous, so a commuting T splits
    into shift-homogeneous components that commute separately; the problem
    decomposes into one small system per shift of End(S) instead of one
    system of size dim(S)^2.
    """
    chart = SubspaceCoords(S)
    m = chart.total
    if m == 0:
        return []
    rmats = []
    for idx, (shift, blocks) in enumerate(_as_int_ops(operators)):
        rmats.append((shift, _scaled_int(
            chart.restrict_int_op(shift, blocks, f"operator {idx}"))))
    deg_of = []
    for d in chart.degrees:
        deg_of.extend([d] * S.dim_at(d))
    shifts = sorted({deg_of[i] - deg_of[j] for i in range(m) for j in range(m)})

    out = []
    for k in shifts:
        unknowns = [(i, j) for i in range(m) for j in range(m)
                    if deg_of[i] - deg_of[j] == k]
        if not unknowns:
            continue
        index = {pos: t for t, pos in enumerate(unknowns)}
        width = len(unknowns)

        def rows_for(R, sR, weight, acc):
            # [R, T] entries live at positions (i, j) with
            # deg_of[i] - deg_of[j] = k + sR
            for i in range(m):
                Ri = R[i]
                for j in range(m):
                    if deg_of[i] - deg_of[j] != k + sR:
                        continue
                    row = acc.setdefault((i, j), [0] * width)
                    for t in range(m):
                        if Ri[t]:
                            pos = index.get((t, j))
                            if pos is not None:
                                row[pos] += weight * Ri[t]
                        if R[t][j]:
                            pos = index.get((i, t))
                            if pos is not None:
                                row[pos] -= weight * R[t][j]

        # phase 1: the combined constraint (implied by the individual ones)
        # collapses the space with a single width-sized system
        acc: dict = {}
        for w, (sR, R) in enumerate(rmats, start=1):
            rows_for(R, sR, w, acc)
        combo_rows = [acc[key] for key in sorted(acc) if any(acc[key])]
        base = nullspace(combo_rows, width)

        # phase 2: impose every operator on the small solution space
        if base and len(rmats) > 1:
            mats = []
            for sol in base:
                T = [[0] * m for _ in range(m)]
                for t, c in enumerate(sol):
                    if c:
                        i, j = unknowns[t]
                        T[i][j] = c
                mats.append(T)
            rows2 = []
            for sR, R in rmats:
                brackets = [None] * len(mats)
                for bidx, T in enumerate(mats):
                    C = K.mat_mul(R, T)
                    D = K.mat_mul(T, R)
                    brackets[bidx] = [C[i][j] - D[i][j]
                                      for i in range(m) for j in range(m)]
                for e in range(m * m):
                    row = [brackets[bidx][e] for bidx in range(len(mats))]
                    if any(row):
                        rows2.append(row)
            coeffs = nullspace(rows2, len(mats))
            base = []
            for cvec in coeffs:
                combined = [0] * width
                for bidx, c in enumerate(cvec):
                    if c:
                        Tb = mats[bidx]
                        for t, (i, j) in enumerate(unknowns):
                            if Tb[i][j]:
                                combined[t] += c * Tb[i][j]
                base.append(combined)
        for sol in base:
            T = [[0] * m for _ in range(m)]
            for t, c in enumerate(sol):
                if c:
                    i, j = unknowns[t]
                    T[i][j] = c
            out.append(T)
    return out


# ---------------------------------------------------------------------------
# so(H) action with lifts


class SoHAction:
    """The so(H) copy inside g_0 as concrete operators, with the inverse of
    its degree-2 restriction (the lift skew(q) -> operators) and the
    wedge-pair Casimir data."""

    def __init__(self, alg: GradedAlgebra, soh: LieSubalgebra):
        self.alg = alg
        self.soh = soh
        self.b2 = alg.b2
        self._ops = soh._basis_int
        pref = self.b2 * self.b2
        self._pref = pref
        rb = RowBasis(pref + len(self._ops))
        for k, (shift, blocks) in enumerate(self._ops):
            if shift != 0:
                raise MalformedAlgebraError("so(H) operators must preserve degree")
            blk = blocks.get(2)
            row = ([blk[i][j] for i in range(self.b2) for j in range(self.b2)]
                   if blk else [0] * pref)
            tag = [0] * len(self._ops)
            tag[k] = 1
            rb.insert(row + tag)
        if any(p >= pref for p in rb.pivots) or rb.rank != len(self._ops):
            raise MalformedAlgebraError(
                "degree-2 restriction of so(H) is not injective; cannot lift")
        self._lift_rb = rb
        self.q = [[Fraction(x) for x in row] for row in alg.bb_form]
        from .linalg import finvert
        self.qinv = finvert(self.q)
        self._pairs = None

    def operators(self):
        return list(self._ops)

    def lift_coeffs(self, skew_mat) -> list[Fraction]:
        """Coefficients over the so(H) basis of the unique operator whose
        degree-2 block is the given q-skew matrix."""
        b2 = self.b2
        flat = [skew_mat[i][j] for i in range(b2) for j in range(b2)]
        rem, alpha = self._lift_rb.residue_tracked(
            flat + [0] * len(self._ops))
        if any(rem[:self._pref]):
            raise MalformedAlgebraError(
                "matrix is not in the degree-2 image of so(H)")
        return [Fraction(-rem[self._pref + k]) / alpha
                for k in range(len(self._ops))]

    def lift_endo(self, skew_mat) -> GradedEndomorphism:
        from math import lcm
        coeffs = self.lift_coeffs(skew_mat)
        den = 1
        for c in coeffs:
            den = lcm(den, c.denominator)
        nums = [int(c * den) for c in coeffs]
        acc: dict[int, list[list[int]]] = {}
        for num, (shift, blocks) in zip(nums, self._ops):
            if not num:
                continue
            for d, mat in blocks.items():
                tgt = acc.get(d)
                if tgt is None:
                    tgt = acc[d] = [[0] * len(mat[0]) for _ in mat]
                for i, row in enumerate(mat):
                    ti = tgt[i]
                    for j, x in enumerate(row):
                        if x:
                            ti[j] += num * x
        return GradedEndomorphism.from_blocks(
            0, {d: [[Fraction(x, den) for x in row] for row in mat]
                for d, mat in acc.items()})

    def wedge_matrix(self, i: int, j: int):
        """e_i ^ e_j as a q-skew matrix: z -> q(e_i, z) e_j - q(e_j, z) e_i."""
        b2 = self.b2
        mat = [[Fraction(0)] * b2 for _ in range(b2)]
        for c in range(b2):
            mat[j][c] += self.q[i][c]
            mat[i][c] -= self.q[j][c]
        return mat

    def dual_wedge_matrix(self, i: int, j: int):
        """f_i ^ f_j for the q-dual basis: z -> z_i f_j - z_j f_i."""
        b2 = self.b2
        mat = [[Fraction(0)] * b2 for _ in range(b2)]
        for r in range(b2):
            mat[r][i] += self.qinv[r][j]
            mat[r][j] -= self.qinv[r][i]
        return mat

    def casimir_pairs(self):
        """Lifted operator pairs (rho(e_i^e_j), rho(f_i^f_j)), cached."""
        if self._pairs is None:
            pairs = []
            for i in range(self.b2):
                for j in range(i + 1, self.b2):
                    a = self.lift_endo(self.wedge_matrix(i, j))
                    b = self.lift_endo(self.dual_wedge_matrix(i, j))
                    pairs.append((a, b))
            self._pairs = pairs
        return self._pairs

    def casimir_on_standard(self):
        """Casimir matrix on the degree-2 part itself (no lift needed)."""
        b2 = self.b2
        acc = [[Fraction(0)] * b2 for _ in range(b2)]
        for i in range(b2):
            for j in range(i + 1, b2):
                A = self.wedge_matrix(i, j)
                B = self.dual_wedge_matrix(i, j)
                for r in range(b2):
                    Ar = A[r]
                    for t in range(b2):
                        a = Ar[t]
                        if a:
                            Bt = B[t]
                            for c in range(b2):
                                if Bt[c]:
                                    acc[r][c] += a * Bt[c]
        return [[-x / 2 for x in row] for row in acc]


def casimir(alg: GradedAlgebra, soh_action: SoHAction, S: GradedSubspace):
    """Casimir operator restricted to a stable subspace, as an exact
    rational matrix in the subspace coordinates."""
    chart = SubspaceCoords(S)
    m = chart.total
    if chart.degrees == [2]:
        # inside the standard degree the Casimir is known without lifting
        cas = soh_action.casimir_on_standard()
        op = GradedEndomorphism.from_blocks(0, {2: cas})
        return chart.restrict_frac_op(op)
    acc = [[Fraction(0)] * m for _ in range(m)]
    for a, b in soh_action.casimir_pairs():
        ra = chart.restrict_frac_op(a)
        rb = chart.restrict_frac_op(b)
        for r in range(m):
            for t in range(m):
                x = ra[r][t]
                if x:
                    brow = rb[t]
                    for c in range(m):
                        if brow[c]:
                            acc[r][c] += x * brow[c]
    return [[-x / 2 for x in row] for row in acc]


# ---------------------------------------------------------------------------
# Isotypic decomposition


@dataclass(frozen=True)
class Constituent:
    kind: str  # "trivial" | "standard" | "other"
    casimir_eigenvalue: Fraction
    dim: int
    multiplicity: int | None
    irreducible_dim: int | None
    commutant_dim: int
    vectors: tuple  # tuples (degree, coords) in algebra coordinates

    def to_json_dict(self):
        return {"kind": self.kind,
                "casimir_eigenvalue": str(self.casimir_eigenvalue),
                "dim": self.dim, "multiplicity": self.multiplicity,
                "irreducible_dim": self.irreducible_dim,
                "commutant_dim": self.commutant_dim}


@dataclass(frozen=True)
class IsotypicReport:
    total_dim: int
    trivial_dim: int
    complement_dim: int
    constituents: tuple[Constituent, ...]
    casimir_std_eigenvalue: Fraction
    semisimple_ok: bool
    resolved: bool
    unresolved_dim: int
    commutant_dim_total: int
    schur_ok: bool
    markman_c: bool

    def to_json_dict(self):
        return {"total_dim": self.total_dim, "trivial_dim": self.trivial_dim,
                "complement_dim": self.complement_dim,
                "constituents": [c.to_json_dict() for c in self.constituents],
                "casimir_std_eigenvalue": str(self.casimir_std_eigenvalue),
                "semisimple_ok": self.semisimple_ok,
                "resolved": self.resolved,
                "unresolved_dim": self.unresolved_dim,
                "commutant_dim_total": self.commutant_dim_total,
                "schur_ok": self.schur_ok,
                "markman_c": self.markman_c}


def min_poly(mat):
    """Minimal polynomial of a rational matrix, as a primitive integer
    coefficient list, lowest degree first."""
    from math import lcm

    from .linalg import solve_affine

    m = len(mat)
    rb = RowBasis(m * m)
    flats = []
    P = [[Fraction(1) if i == j else Fraction(0) for j in range(m)] for i in range(m)]
    while True:
        flat = [P[i][j] for i in range(m) for j in range(m)]
        if flats and rb.contains(flat):
            # first dependence: solve for coefficients over the power basis
            k = len(flats)
            eqs = [[flats[idx][e] for idx in range(k)] for e in range(m * m)]
            sol, nullity = solve_affine(eqs, flat, k)
            assert sol is not None and nullity == 0
            poly = [-c for c in sol] + [Fraction(1)]
            den = 1
            for c in poly:
                den = lcm(den, c.denominator)
            ints = [int(c * den) for c in poly]
            g = K.vec_content(ints)
            if g > 1:
                K.vec_divexact(ints, g)
            if ints[-1] < 0:
                ints = [-x for x in ints]
            return ints
        rb.insert(flat)
        flats.append(flat)
        nxt = [[Fraction(0)] * m for _ in range(m)]
        for i in range(m):
            for k in range(m):
                x = P[i][k]
                if x:
                    row = mat[k]
                    for j in range(m):
                        if row[j]:
                            nxt[i][j] += x * row[j]
        P = nxt


def _divisors(n: int):
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def rational_roots(poly: list[int]) -> list[Fraction]:
    """Rational roots of an integer polynomial (lowest degree first)."""
    coeffs = list(poly)
    shift = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        shift += 1
    roots = set()
    if shift:
        roots.add(Fraction(0))
    if not coeffs or len(coeffs) == 1:
        return sorted(roots)
    a0, lead = coeffs[0], coeffs[-1]
    for p in _divisors(a0):
        for q in _divisors(lead):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand in roots:
                    continue
                acc = Fraction(0)
                for c in reversed(coeffs):
                    acc = acc * cand + c
                if acc == 0:
                    roots.add(cand)
    return sorted(roots)


def isotypic_decompose(alg: GradedAlgebra, soh_action: SoHAction,
                       S: GradedSubspace) -> IsotypicReport:
    """Trivial part = joint kernel; complement split by rational Casimir
    eigenvalues; multiplicities from commutant dimensions per eigenspace.
    Eigenspaces whose commutant dimension is not a perfect square, or
    complement not exhausted by rational eigenvalues, are reported as
    unresolved rather than guessed."""
    chart = SubspaceCoords(S)
    m = chart.total
    b2 = alg.b2
    ops = soh_action.operators()
    rmats = [_scaled_int(chart.restrict_int_op(0, blocks, f"so(H) op {k}"))
             for k, (shift, blocks) in enumerate(ops)]

    cas_std = soh_action.casimir_on_standard()
    lam_std = cas_std[0][0] if b2 else Fraction(0)
    scalar = all(cas_std[i][j] == (lam_std if i == j else 0)
                 for i in range(b2) for j in range(b2))
    if not scalar:
        raise MalformedAlgebraError(
            "Casimir is not scalar on the degree-2 part; so(H) data corrupt")

    if m == 0:
        return IsotypicReport(0, 0, 0, (), lam_std, True, True, 0, 0, True, True)

    # trivial part: joint kernel of all restrictions
    stacked = [row for R in rmats for row in R]
    trivial_vecs = nullspace(stacked, m) if stacked else []
    trivial_dim = len(trivial_vecs)

    # complement: span of all operator images
    rest = RowBasis(m)
    for R in rmats:
        cols = [[R[i][j] for i in range(m)] for j in range(m)]
        for col in cols:
            if any(col):
                rest.insert(col)
    rest_vecs = rest.basis_rows()
    semisimple_ok = (trivial_dim + len(rest_vecs) == m and
                     not span_intersect(trivial_vecs, rest_vecs, m))

    constituents = []
    if trivial_dim:
        vecs = tuple(tuple(chart.to_algebra_vectors(v)) for v in trivial_vecs)
        constituents.append(Constituent(
            "trivial", Fraction(0), trivial_dim, trivial_dim, 1,
            trivial_dim * trivial_dim, vecs))

    unresolved = 0
    if rest_vecs:
        cas = casimir(alg, soh_action, S)
        # restrict Casimir to the complement (it is invariant there)
        rest_rb = RowBasis(m)
        for v in rest_vecs:
            rest_rb.insert(v)
        k = len(rest_vecs)
        cas_rest = [[Fraction(0)] * k for _ in range(k)]
        for col, v in enumerate(rest_vecs):
            img = [sum(cas[i][j] * v[j] for j in range(m) if v[j]) for i in range(m)]
            coords = rest_rb.solve_combination(img)
            if coords is None:
                raise MalformedAlgebraError("Casimir does not preserve g.S")
            for ridx, c in coords.items():
                cas_rest[ridx][col] = c
        poly = min_poly(cas_rest)
        roots = rational_roots(poly)
        accounted = 0
        for lam in roots:
            shifted = [[cas_rest[i][j] - (lam if i == j else 0)
                        for j in range(k)] for i in range(k)]
            eig = nullspace(shifted, k)
            if not eig:
                continue
            accounted += len(eig)
            # back to S coordinates
            s_vecs = []
            for ev in eig:
                vec = [Fraction(0)] * m
                for t, c in enumerate(ev):
                    if c:
                        for i in range(m):
                            if rest_vecs[t][i]:
                                vec[i] += c * rest_vecs[t][i]
                s_vecs.append(vec)
            sub = GradedSubspace(alg.degree_dims)
            for vec in s_vecs:
                for d, coords in chart.to_algebra_vectors(vec):
                    sub.add(d, coords)
            cdim = len(commutant(ops, sub))
            mult = isqrt(cdim)
            if mult * mult != cdim:
                mult = None
            irr = len(eig) // mult if mult else None
            kind = "other"
            if mult == 1 and irr == b2 and lam == lam_std:
                kind = "standard"
            vecs = tuple(tuple(chart.to_algebra_vectors(v)) for v in s_vecs)
            constituents.append(Constituent(kind, lam, len(eig), mult, irr,
                                            cdim, vecs))
        unresolved = len(rest_vecs) - accounted

    commutant_total = len(commutant(ops, S))
    mult_sq = sum((c.multiplicity or 0) ** 2 for c in constituents)
    schur_ok = (unresolved == 0 and all(c.multiplicity is not None
                                        for c in constituents)
                and commutant_total == mult_sq)

    trivial_mult = sum(c.multiplicity or 0 for c in constituents
                       if c.kind == "trivial")
    std_mult = sum(c.multiplicity or 0 for c in constituents
                   if c.kind == "standard")
    has_other = any(c.kind == "other" for c in constituents)
    markman_c = (unresolved == 0 and semisimple_ok and not has_other
                 and trivial_mult <= 1 and std_mult <= 1
                 and all(c.multiplicity is not None for c in constituents))

    return IsotypicReport(m, trivial_dim, m - trivial_dim, tuple(constituents),
                          lam_std, semisimple_ok, unresolved == 0, unresolved,
                          commutant_total, schur_ok, markman_c)


def check_markman_c(report: IsotypicReport) -> bool:
    """True iff the subspace embeds in standard + trivial: at most one
    standard constituent, at most one trivial line, nothing else."""
    return report.markman_c
