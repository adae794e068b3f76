"""LLV Lie algebra: bracket closure, ad(theta) grading, and verification of
the structure theorem against the model so(H ⊥ U).

The closure worklist brackets every discovered element against the fixed
generator family only. Since left-normed bracket words span the Lie algebra
generated by any set, a subspace containing the generators and stable under
bracketing with them is exactly that Lie algebra, so this produces the same
span as saturating over all pairs at a fraction of the bracket count. Full
pairwise closedness is still checkable through
:meth:`LieSubalgebra.is_bracket_closed`.

Internally operators are carried as primitive integer block matrices (the
basis only matters up to scale), so all heavy products and row reductions
run through the integer kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from . import _kernels as K
from .errors import ClosureDivergenceError, MalformedAlgebraError
from .linalg import RowBasis, finvert, primitive
from .ring import GradedAlgebra, GradedEndomorphism, endo_layout
from .sl2 import candidate_degree2_classes, has_lefschetz_property, solve_lambda
from .ring import bb_pairing, lefschetz_operator, theta


# ---------------------------------------------------------------------------
# Integer block operators

IntBlocks = dict[int, list[list[int]]]


def op_to_int_blocks(op: GradedEndomorphism) -> IntBlocks:
    """Primitive integer blocks spanning the same line as op."""
    den = 1
    for mat in op.blocks.values():
        for row in mat:
            for x in row:
                den = lcm(den, x.denominator)
    blocks = {d: [[int(x * den) for x in row] for row in mat]
              for d, mat in op.blocks.items()}
    g = 0
    for mat in blocks.values():
        for row in mat:
            g = gcd(g, K.vec_content(row))
            if g == 1:
                break
    if g > 1:
        for mat in blocks.values():
            for row in mat:
                K.vec_divexact(row, g)
    return blocks


def op_to_int_blocks_exact(op: GradedEndomorphism) -> tuple[IntBlocks, int]:
    """(blocks, den) with op == blocks/den exactly (no primitive rescale)."""
    den = 1
    for mat in op.blocks.values():
        for row in mat:
            for x in row:
                den = lcm(den, x.denominator)
    blocks = {d: [[int(x * den) for x in row] for row in mat]
              for d, mat in op.blocks.items()}
    return blocks, den


def int_blocks_to_endo(shift: int, blocks: IntBlocks) -> GradedEndomorphism:
    return GradedEndomorphism.from_blocks(shift, blocks)


def bracket_int(sa: int, A: IntBlocks, sb: int, B: IntBlocks) -> IntBlocks:
    """[A, B] for integer block operators of shifts sa and sb."""
    out: IntBlocks = {}
    for d in sorted(set(A) | set(B)):
        t1 = None
        if d in B and (d + sb) in A:
            t1 = K.mat_mul(A[d + sb], B[d])
        t2 = None
        if d in A and (d + sa) in B:
            t2 = K.mat_mul(B[d + sa], A[d])
        if t1 is None and t2 is None:
            continue
        if t1 is None:
            mat = [[-x for x in row] for row in t2]
        elif t2 is None:
            mat = t1
        else:
            mat = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(t1, t2)]
        if any(any(row) for row in mat):
            out[d] = mat
    return out


def flat_from_int_blocks(shift: int, blocks: IntBlocks, dims) -> list[int]:
    entries, total = endo_layout(dims, shift)
    flat = [0] * total
    for d, nrows, ncols, offset in entries:
        mat = blocks.get(d)
        if mat is None:
            continue
        k = offset
        for row in mat:
            for x in row:
                flat[k] = x
                k += 1
    return flat


def int_blocks_from_flat(shift: int, flat, dims) -> IntBlocks:
    entries, total = endo_layout(dims, shift)
    blocks: IntBlocks = {}
    for d, nrows, ncols, offset in entries:
        mat = [list(flat[offset + r * ncols: offset + (r + 1) * ncols])
               for r in range(nrows)]
        if any(any(row) for row in mat):
            blocks[d] = mat
    return blocks


def theta_from_dims(dims) -> GradedEndomorphism:
    two_n = len(dims) - 1
    blocks = {}
    for k, m in enumerate(dims):
        c = 2 * k - two_n
        if m and c:
            blocks[2 * k] = [[c if i == j else 0 for j in range(m)] for i in range(m)]
    return GradedEndomorphism.from_blocks(0, blocks)


# ---------------------------------------------------------------------------
# Lie subalgebras


class LieSubalgebra:
    """Echelonized span of shift-homogeneous endomorphisms with pivot-based
    membership tests. Construction through lie_closure guarantees bracket
    closedness; from_operators only spans."""

    def __init__(self, dims, basis_int, span, shift_index):
        self.dims = tuple(dims)
        self._basis_int: list[tuple[int, IntBlocks]] = basis_int
        self._span: dict[int, RowBasis] = span
        self._shift_index: dict[int, list[int]] = shift_index
        self.basis = tuple(int_blocks_to_endo(s, b) for s, b in basis_int)

    @property
    def dim(self) -> int:
        return len(self._basis_int)

    def shifts(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self._basis_int)

    def graded_parts(self) -> dict[int, tuple[int, ...]]:
        return {s: tuple(idx) for s, idx in sorted(self._shift_index.items())}

    def part_ops(self, shift: int) -> list[tuple[int, IntBlocks]]:
        return [self._basis_int[i] for i in self._shift_index.get(shift, ())]

    def contains_int(self, shift: int, blocks: IntBlocks) -> bool:
        if not blocks:
            return True
        rb = self._span.get(shift)
        if rb is None:
            return False
        return rb.contains(flat_from_int_blocks(shift, blocks, self.dims))

    def contains_endo(self, op: GradedEndomorphism) -> bool:
        return self.contains_int(op.shift, op_to_int_blocks(op))

    def coords_of_endo(self, op: GradedEndomorphism) -> dict[int, Fraction] | None:
        """Coordinates over the global basis, or None if not a member.
        Exact: uses the rational flattening, not the primitive one."""
        rb = self._span.get(op.shift)
        if rb is None:
            return None if op.blocks else {}
        flat = op.flatten(self.dims)
        local = rb.solve_combination(flat)
        if local is None:
            return None
        globals_ = self._shift_index[op.shift]
        return {globals_[i]: c for i, c in local.items()}

    def is_bracket_closed(self, pairs=None):
        """(closed, witness). pairs defaults to every unordered basis pair."""
        if pairs is None:
            pairs = [(i, j) for i in range(self.dim) for j in range(i, self.dim)]
        for i, j in pairs:
            si, bi = self._basis_int[i]
            sj, bj = self._basis_int[j]
            c = bracket_int(si, bi, sj, bj)
            if not self.contains_int(si + sj, c):
                return False, (i, j)
        return True, None

    @staticmethod
    def from_int_ops(dims, ops) -> "LieSubalgebra":
        span: dict[int, RowBasis] = {}
        basis_int: list[tuple[int, IntBlocks]] = []
        shift_index: dict[int, list[int]] = {}
        for shift, blocks in ops:
            if not blocks:
                continue
            flat = flat_from_int_blocks(shift, blocks, dims)
            rb = span.get(shift)
            if rb is None:
                rb = span[shift] = RowBasis(len(flat))
            idx = rb.insert(flat)
            if idx is None:
                continue
            nb = int_blocks_from_flat(shift, rb.rows[idx], dims)
            shift_index.setdefault(shift, []).append(len(basis_int))
            basis_int.append((shift, nb))
        return LieSubalgebra(dims, basis_int, span, shift_index)

    @staticmethod
    def from_operators(ops, dims) -> "LieSubalgebra":
        return LieSubalgebra.from_int_ops(
            dims, [(op.shift, op_to_int_blocks(op)) for op in ops])


def lie_closure(generators, dims, iteration_cap: int | None = None) -> LieSubalgebra:
    """Smallest Lie algebra of endomorphisms containing the generators.

    Deterministic: the basis is echelonized in generator order, then in
    discovery order. The cap (default 10 x dim gl) surfaces pathological
    inputs instead of spinning.
    """
    dims = tuple(dims)
    total = sum(dims)
    cap = iteration_cap if iteration_cap is not None else 10 * total * total
    gens_int = []
    for op in generators:
        blocks = op_to_int_blocks(op) if isinstance(op, GradedEndomorphism) else op[1]
        shift = op.shift if isinstance(op, GradedEndomorphism) else op[0]
        if blocks:
            gens_int.append((shift, blocks))

    span: dict[int, RowBasis] = {}
    basis_int: list[tuple[int, IntBlocks]] = []
    shift_index: dict[int, list[int]] = {}

    def try_insert(shift, blocks) -> bool:
        flat = flat_from_int_blocks(shift, blocks, dims)
        rb = span.get(shift)
        if rb is None:
            if not flat:
                return False
            rb = span[shift] = RowBasis(len(flat))
        idx = rb.insert(flat)
        if idx is None:
            return False
        nb = int_blocks_from_flat(shift, rb.rows[idx], dims)
        shift_index.setdefault(shift, []).append(len(basis_int))
        basis_int.append((shift, nb))
        return True

    for shift, blocks in gens_int:
        try_insert(shift, blocks)

    qi = 0
    processed = 0
    while qi < len(basis_int):
        processed += 1
        if processed > cap:
            raise ClosureDivergenceError(
                f"lie_closure exceeded its iteration cap ({cap})")
        su, bu = basis_int[qi]
        qi += 1
        for sg, bg in gens_int:
            c = bracket_int(sg, bg, su, bu)
            if c:
                try_insert(sg + su, c)
    return LieSubalgebra(dims, basis_int, span, shift_index)


# ---------------------------------------------------------------------------
# Grading


@dataclass(frozen=True)
class GradeParts:
    part_indices: dict[int, tuple[int, ...]]
    theta_in_g: bool
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def dims_triple(self) -> tuple[int, int, int]:
        return (len(self.part_indices.get(-2, ())),
                len(self.part_indices.get(0, ())),
                len(self.part_indices.get(2, ())))

    def to_json_dict(self):
        return {"parts": {str(s): len(ix) for s, ix in sorted(self.part_indices.items())},
                "theta_in_g": self.theta_in_g,
                "violations": list(self.violations)}


def grade_decompose(g: LieSubalgebra, theta_op: GradedEndomorphism) -> GradeParts:
    """Split by ad(theta) eigenvalue. Every basis element is homogeneous of
    its shift, and ad(theta) acts on a shift-s operator by s, so the
    eigenvalues are exactly the shifts present; anything outside
    {-2, 0, 2} is reported as a structure violation."""
    violations = []
    for shift, idxs in sorted(g.graded_parts().items()):
        if shift not in (-2, 0, 2):
            violations.append(
                f"unexpected ad(theta) eigenvalue {shift} with multiplicity {len(idxs)}")
    theta_in = g.contains_endo(theta_op)
    if not theta_in:
        violations.append("theta is not contained in the subalgebra")
    return GradeParts(g.graded_parts(), theta_in, tuple(violations))


# ---------------------------------------------------------------------------
# g_0 structure


@dataclass(frozen=True)
class SoHExtraction:
    subalgebra: LieSubalgebra
    degree2_injective: bool
    image_is_skew: bool
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self):
        return {"dim": self.subalgebra.dim,
                "degree2_injective": self.degree2_injective,
                "image_is_skew": self.image_is_skew,
                "violations": list(self.violations)}


def extract_so_h(g0: LieSubalgebra, bb_form) -> SoHExtraction:
    """Derived subalgebra [g0, g0], verified to restrict injectively onto the
    q-skew operators of the degree-2 part.

    The identification [g0, g0] = so(q) presumes so(q) is semisimple, so
    b2 >= 3; for b2 <= 2 the derived subalgebra is smaller and the report
    flags it."""
    dims = g0.dims
    ops = g0._basis_int
    derived_rows = []
    for i in range(len(ops)):
        si, bi = ops[i]
        for j in range(i + 1, len(ops)):
            sj, bj = ops[j]
            c = bracket_int(si, bi, sj, bj)
            if c:
                derived_rows.append((si + sj, c))
    sub = LieSubalgebra.from_int_ops(dims, derived_rows)

    violations = []
    b2 = dims[1]
    q = [[Fraction(x) for x in row] for row in bb_form]
    deg2 = RowBasis(b2 * b2)
    skew_ok = True
    for shift, blocks in sub._basis_int:
        mat = blocks.get(2, [[0] * b2 for _ in range(b2)])
        deg2.insert([mat[i][j] for i in range(b2) for j in range(b2)])
        for i in range(b2):
            for j in range(b2):
                # (M^T q + q M)[i][j] = sum_k M[k][i] q[k][j] + q[i][k] M[k][j]
                s = Fraction(0)
                for k in range(b2):
                    if mat[k][i]:
                        s += mat[k][i] * q[k][j]
                    if mat[k][j]:
                        s += q[i][k] * mat[k][j]
                if s:
                    skew_ok = False
    injective = deg2.rank == sub.dim
    if not injective:
        violations.append(
            f"degree-2 restriction has rank {deg2.rank} < dim {sub.dim}")
    if not skew_ok:
        violations.append("degree-2 image contains a non-q-skew operator")
    expected = b2 * (b2 - 1) // 2
    image_is_skew = skew_ok and injective and sub.dim == expected
    if skew_ok and injective and sub.dim != expected:
        violations.append(
            f"degree-2 image has dimension {sub.dim}, skew(q) has {expected}")
    return SoHExtraction(sub, injective, image_is_skew, tuple(violations))


def derivation_defect(alg: GradedAlgebra, op: GradedEndomorphism,
                      pairs) -> bool:
    """True when D(a.b) = D(a).b + a.D(b) holds on all given basis pairs."""
    from .ring import cup
    dims = alg.degree_dims
    for (da, ia, db, ib) in pairs:
        a = alg.basis_element(da, ia)
        b = alg.basis_element(db, ib)
        lhs = op.apply(alg, cup(alg, a, b))
        rhs = cup(alg, op.apply(alg, a), b).plus(cup(alg, a, op.apply(alg, b)))
        if lhs.coords != rhs.coords:
            return False
    return True


# ---------------------------------------------------------------------------
# Structure theorem verification


@dataclass(frozen=True)
class SoTildeReport:
    dim_found: int
    dim_expected: int
    grading_dims: tuple[int, int, int]
    theta_in_g: bool
    theta_central: bool
    soh_dim: int
    soh_expected: int
    degree2_injective: bool
    image_is_skew: bool
    generation_ok: bool
    psi_theta_ok: bool
    psi_bijective: bool
    bracket_checks: int
    iso_verified: bool
    first_failure: str | None
    convention: str

    def to_json_dict(self):
        return {
            "dim_found": self.dim_found,
            "dim_expected": self.dim_expected,
            "grading_dims": list(self.grading_dims),
            "theta_in_g": self.theta_in_g,
            "theta_central": self.theta_central,
            "soh_dim": self.soh_dim,
            "soh_expected": self.soh_expected,
            "degree2_injective": self.degree2_injective,
            "image_is_skew": self.image_is_skew,
            "generation_ok": self.generation_ok,
            "psi_theta_ok": self.psi_theta_ok,
            "psi_bijective": self.psi_bijective,
            "bracket_checks": self.bracket_checks,
            "iso_verified": self.iso_verified,
            "first_failure": self.first_failure,
            "convention": self.convention,
        }


_CONVENTION = ("theta maps to diag(0_H, -2 on v, +2 on w); a shift +2 element "
               "with unit image x maps to x wedge w; a shift -2 element with "
               "degree-2-to-degree-0 row mu maps to -(1/n) q^(-1) mu wedge v")


def _scaled_int_mat(mat) -> tuple[list[list[int]], int]:
    """Primitive (int matrix, positive denominator) pair for a rational matrix."""
    den = 1
    for row in mat:
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
    out = [[int(x * den) for x in row] for row in mat]
    g = den
    for row in out:
        g = gcd(g, K.vec_content(row))
        if g == 1:
            break
    if g > 1:
        for row in out:
            K.vec_divexact(row, g)
        den //= g
    return out, den


class _ModelMap:
    """Blockwise candidate isomorphism into so(H ⊥ U).

    The map is defined on every shift-homogeneous operator, not only on
    members of g, which lets bracket preservation be checked without any
    coordinate solves.
    """

    def __init__(self, dims, bb_form):
        self.dims = tuple(dims)
        self.n = (len(dims) - 1) // 2
        self.b2 = dims[1]
        self.m = self.b2 + 2  # H, then v, then w
        self.q = [[Fraction(x) for x in row] for row in bb_form]
        self.qinv = finvert(self.q)
        self.q_int, self.q_den = _scaled_int_mat(self.q)
        self.qinv_int, self.qinv_den = _scaled_int_mat(self.qinv)
        self.v_idx = self.b2
        self.w_idx = self.b2 + 1

    def gram(self):
        m = self.m
        G = [[Fraction(0)] * m for _ in range(m)]
        for i in range(self.b2):
            for j in range(self.b2):
                G[i][j] = self.q[i][j]
        G[self.v_idx][self.w_idx] = Fraction(1)
        G[self.w_idx][self.v_idx] = Fraction(1)
        return G

    def theta_image(self):
        mat = [[Fraction(0)] * self.m for _ in range(self.m)]
        mat[self.v_idx][self.v_idx] = Fraction(-2)
        mat[self.w_idx][self.w_idx] = Fraction(2)
        return mat

    def psi_frac(self, shift: int, blocks) -> list[list[Fraction]] | None:
        """Rational model matrix, or None when the g0 part is not q-skew."""
        b2, m, n = self.b2, self.m, self.n
        out = [[Fraction(0)] * m for _ in range(m)]
        if not blocks:
            return out
        if shift == 2:
            col = blocks.get(0)
            x = [Fraction(col[i][0]) for i in range(b2)] if col else [Fraction(0)] * b2
            qx = [sum(self.q[h][k] * x[k] for k in range(b2)) for h in range(b2)]
            for h in range(b2):
                out[self.w_idx][h] = qx[h]
                out[h][self.v_idx] = -x[h]
            return out
        if shift == -2:
            rowmat = blocks.get(2)
            mu = [Fraction(rowmat[0][j]) for j in range(b2)] if rowmat else [Fraction(0)] * b2
            y = [-Fraction(1, n) * sum(self.qinv[h][k] * mu[k] for k in range(b2))
                 for h in range(b2)]
            qy = [-mu[h] / n for h in range(b2)]  # q y = -(1/n) mu
            for h in range(b2):
                out[self.v_idx][h] = qy[h]
                out[h][self.w_idx] = -y[h]
            return out
        if shift == 0:
            two_n = 2 * n
            b0 = blocks.get(0)
            lam = Fraction(b0[0][0], -two_n) if b0 else Fraction(0)
            b2mat = blocks.get(2)
            s = [[Fraction(b2mat[i][j]) if b2mat else Fraction(0)
                  for j in range(b2)] for i in range(b2)]
            diag = lam * (2 - two_n)
            if diag:
                for i in range(b2):
                    s[i][i] -= diag
            # q-skew check: s^T q + q s = 0
            for i in range(b2):
                for j in range(b2):
                    acc = Fraction(0)
                    for k in range(b2):
                        if s[k][i]:
                            acc += s[k][i] * self.q[k][j]
                        if s[k][j]:
                            acc += self.q[i][k] * s[k][j]
                    if acc:
                        return None
            for i in range(b2):
                for j in range(b2):
                    out[i][j] = s[i][j]
            out[self.v_idx][self.v_idx] = -2 * lam
            out[self.w_idx][self.w_idx] = 2 * lam
            return out
        raise ValueError(f"model map undefined for shift {shift}")

    def psi_int(self, shift: int, blocks: IntBlocks):
        """Integer-arithmetic twin of psi_frac for integer block operators:
        returns (matrix, den) or None when the g0 part is not q-skew."""
        b2, m, n = self.b2, self.m, self.n
        out = [[0] * m for _ in range(m)]
        if shift == 2:
            col = blocks.get(0)
            if col is None:
                return out, 1
            x = [col[i][0] for i in range(b2)]
            qx = K.mat_vec(self.q_int, x)
            for h in range(b2):
                out[self.w_idx][h] = qx[h]
                out[h][self.v_idx] = -x[h] * self.q_den
            return out, self.q_den
        if shift == -2:
            rowmat = blocks.get(2)
            if rowmat is None:
                return out, 1
            mu = list(rowmat[0])
            t = K.mat_vec(self.qinv_int, mu)
            for h in range(b2):
                out[self.v_idx][h] = -mu[h] * self.qinv_den
                out[h][self.w_idx] = t[h]
            return out, n * self.qinv_den
        if shift == 0:
            two_n = 2 * n
            b0 = blocks.get(0)
            c0 = b0[0][0] if b0 else 0
            bmat = blocks.get(2)
            s = [[two_n * bmat[i][j] if bmat else 0 for j in range(b2)]
                 for i in range(b2)]
            diag = c0 * (2 - two_n)
            if diag:
                for i in range(b2):
                    s[i][i] += diag
            # q-skew test: s^T q + q s = 0 (scales cancel)
            st = [list(r) for r in zip(*s)]
            t1 = K.mat_mul(st, self.q_int)
            t2 = K.mat_mul(self.q_int, s)
            for r1, r2 in zip(t1, t2):
                for a, b in zip(r1, r2):
                    if a + b:
                        return None
            for i in range(b2):
                for j in range(b2):
                    out[i][j] = s[i][j]
            out[self.v_idx][self.v_idx] = 2 * c0
            out[self.w_idx][self.w_idx] = -2 * c0
            return out, two_n
        raise ValueError(f"model map undefined for shift {shift}")

    def rank2_factors(self, shift: int, blocks):
        """(u1, c1, u2, c2, den) ints with psi = (u1 c1^T + u2 c2^T)/den."""
        b2, m = self.b2, self.m
        if shift == 2:
            col = blocks.get(0)
            x = [Fraction(col[i][0]) for i in range(b2)] if col else [Fraction(0)] * b2
            qx = [sum(self.q[h][k] * x[k] for k in range(b2)) for h in range(b2)]
            u1 = [0] * m
            u1[self.w_idx] = 1
            c1 = qx + [Fraction(0), Fraction(0)]
            u2 = [-xi for xi in x] + [Fraction(0), Fraction(0)]
            c2 = [0] * m
            c2[self.v_idx] = 1
        elif shift == -2:
            rowmat = blocks.get(2)
            mu = [Fraction(rowmat[0][j]) for j in range(b2)] if rowmat else [Fraction(0)] * b2
            y = [-Fraction(1, self.n) * sum(self.qinv[h][k] * mu[k] for k in range(b2))
                 for h in range(b2)]
            u1 = [0] * m
            u1[self.v_idx] = 1
            c1 = [-mh / self.n for mh in mu] + [Fraction(0), Fraction(0)]
            u2 = [-yh for yh in y] + [Fraction(0), Fraction(0)]
            c2 = [0] * m
            c2[self.w_idx] = 1
        else:
            raise ValueError("rank-2 factors exist only for shifts +-2")
        den = 1
        for vec in (u1, c1, u2, c2):
            for xx in vec:
                if isinstance(xx, Fraction):
                    den = lcm(den, xx.denominator)
        scale = lambda vec: [int(xx * den) for xx in vec]
        return scale(u1), scale(c1), scale(u2), scale(c2), den * den

    @staticmethod
    def rank2_bracket(factors, M, denM):
        """[psi_a, B] where psi_a = (u1 c1^T + u2 c2^T)/den_a and B = M/denM.

        The fudge: factors carries den_a^2 with u, c each scaled by den_a, so
        the returned den is den_a^2 * denM with integer matrix entries.
        """
        u1, c1, u2, c2, den2 = factors
        m = len(M)
        c1M = K.mat_vec([list(r) for r in zip(*M)], c1)  # c1^T M as column list
        c2M = K.mat_vec([list(r) for r in zip(*M)], c2)
        Mu1 = K.mat_vec(M, u1)
        Mu2 = K.mat_vec(M, u2)
        out = [[0] * m for _ in range(m)]
        for i in range(m):
            row = out[i]
            a1, a2 = u1[i], u2[i]
            b1, b2_ = Mu1[i], Mu2[i]
            for j in range(m):
                row[j] = a1 * c1M[j] + a2 * c2M[j] - b1 * c1[j] - b2_ * c2[j]
        return out, den2 * denM


def _normalize_scaled(mat, den):
    g = abs(den)
    for row in mat:
        g = gcd(g, K.vec_content(row))
        if g == 1:
            break
    if g > 1:
        for row in mat:
            K.vec_divexact(row, g)
        den //= g
    if den < 0:
        den = -den
        for row in mat:
            for j in range(len(row)):
                row[j] = -row[j]
    return mat, den


def verify_so_tilde(g: LieSubalgebra, bb_form) -> SoTildeReport:
    """Build the model so(H ⊥ U), pin the candidate isomorphism on theta and
    the shift +-2 parts, and verify bracket preservation and bijectivity by
    exact integer arithmetic."""
    dims = g.dims
    n = (len(dims) - 1) // 2
    b2 = dims[1]
    expected = (b2 + 2) * (b2 + 1) // 2
    parts = g.graded_parts()
    grading_dims = (len(parts.get(-2, ())), len(parts.get(0, ())), len(parts.get(2, ())))
    failure = None

    bad_shift = [s for s in parts if s not in (-2, 0, 2)]
    theta_op = theta_from_dims(dims)
    theta_in = g.contains_endo(theta_op)

    g0 = LieSubalgebra.from_int_ops(dims, g.part_ops(0))
    soh = extract_so_h(g0, bb_form)
    soh_expected = b2 * (b2 - 1) // 2

    # theta is central in g0: ad(theta) scales a shift-0 operator by 0
    theta_blocks = op_to_int_blocks(theta_op)
    theta_central = all(
        not bracket_int(0, theta_blocks, 0, blocks)
        for _, blocks in g.part_ops(0))

    # the shift +-2 parts must generate: their mutual brackets span g0
    gen_span = RowBasis(len(flat_from_int_blocks(0, theta_blocks, dims)))
    plus = g.part_ops(2)
    minus = g.part_ops(-2)
    for sa, ba in plus:
        for sb, bb in minus:
            c = bracket_int(sa, ba, sb, bb)
            if c:
                gen_span.insert(flat_from_int_blocks(0, c, dims))
    generation_ok = gen_span.rank == len(parts.get(0, ()))

    model = _ModelMap(dims, bb_form)
    psi_imgs: list[tuple[list[list[int]], int] | None] = []
    psi_ok = True
    for shift, blocks in g._basis_int:
        if shift in (-2, 0, 2):
            img = model.psi_int(shift, blocks)
        else:
            img = None
        if img is None:
            psi_ok = False
            psi_imgs.append(None)
        else:
            psi_imgs.append(img)
    if not psi_ok and failure is None:
        failure = "model map undefined on some basis element (bad shift or non-skew g0 part)"

    # psi(theta) must be the pinned image; use the exact (unscaled) theta
    theta_exact, theta_den = op_to_int_blocks_exact(theta_op)
    t_frac = model.psi_frac(0, theta_exact)
    psi_theta_ok = False
    if t_frac is not None:
        t_expect = model.theta_image()
        psi_theta_ok = all(
            t_frac[i][j] == theta_den * t_expect[i][j]
            for i in range(model.m) for j in range(model.m))

    psi_bijective = False
    if psi_ok:
        m = model.m
        rb = RowBasis(m * m)
        for mat, _ in psi_imgs:
            rb.insert([mat[i][j] for i in range(m) for j in range(m)])
        psi_bijective = rb.rank == g.dim == expected

    bracket_checks = 0
    brackets_ok = True
    if psi_ok:
        gen_indices = list(parts.get(2, ())) + list(parts.get(-2, ()))
        for a_idx in gen_indices:
            sa, ba = g._basis_int[a_idx]
            factors = model.rank2_factors(sa, ba)
            for b_idx in range(g.dim):
                sb, bb = g._basis_int[b_idx]
                c = bracket_int(sa, ba, sb, bb)
                sc = sa + sb
                bracket_checks += 1
                if sc in (-2, 0, 2):
                    lhs = model.psi_int(sc, c)
                    if lhs is None:
                        brackets_ok = False
                elif c:
                    brackets_ok = False
                    lhs = None
                else:
                    lhs = ([[0] * model.m for _ in range(model.m)], 1)
                if not brackets_ok:
                    if failure is None:
                        failure = f"bracket of basis elements {a_idx}, {b_idx} leaves the grading"
                    break
                mat_b, den_b = psi_imgs[b_idx]
                rhs = _ModelMap.rank2_bracket(factors, mat_b, den_b)
                if _normalize_scaled(*lhs) != _normalize_scaled(*rhs):
                    brackets_ok = False
                    if failure is None:
                        failure = (f"bracket mismatch at basis pair ({a_idx}, {b_idx})")
                    break
            if not brackets_ok:
                break

    iso = (not bad_shift and theta_in and theta_central and soh.ok
           and generation_ok and psi_ok and psi_theta_ok and psi_bijective
           and brackets_ok and g.dim == expected)
    if not iso and failure is None:
        if bad_shift:
            failure = f"unexpected grading shifts {sorted(bad_shift)}"
        elif not theta_in:
            failure = "theta not contained in the closure"
        elif g.dim != expected:
            failure = f"dimension {g.dim} differs from dim so(H~) = {expected}"
        elif not soh.ok:
            failure = "; ".join(soh.violations)
        elif not generation_ok:
            failure = "shift +-2 parts do not generate the 0-part"
        elif not psi_bijective:
            failure = "candidate map is not bijective"
        elif not psi_theta_ok:
            failure = "candidate map sends theta to the wrong model element"
    return SoTildeReport(
        dim_found=g.dim, dim_expected=expected, grading_dims=grading_dims,
        theta_in_g=theta_in, theta_central=theta_central,
        soh_dim=soh.subalgebra.dim, soh_expected=soh_expected,
        degree2_injective=soh.degree2_injective, image_is_skew=soh.image_is_skew,
        generation_ok=generation_ok, psi_theta_ok=psi_theta_ok,
        psi_bijective=psi_bijective, bracket_checks=bracket_checks,
        iso_verified=iso, first_failure=failure, convention=_CONVENTION)


# ---------------------------------------------------------------------------
# Orchestration


@dataclass(frozen=True)
class LlvAnalysis:
    algebra: GradedAlgebra
    g: LieSubalgebra
    theta: GradedEndomorphism
    grading: GradeParts
    g0: LieSubalgebra
    soh: SoHExtraction
    report: SoTildeReport
    lefschetz_classes: tuple
    lambdas: tuple
    lambda_span_dim: int
    lambda_span_equals_gminus2: bool


def build_generators(alg: GradedAlgebra, seed: int = 0):
    """All L_x over the degree-2 basis, plus solved sl2-partners for a family
    of Lefschetz classes whose lambdas span a b2-dimensional space (the
    deterministic candidate order: basis vectors, pair sums, seeded combos)."""
    dims = alg.degree_dims
    b2 = alg.b2
    ls = [lefschetz_operator(alg, alg.basis_element(2, i)) for i in range(b2)]
    lambdas = []
    xs = []
    entries, total = endo_layout(dims, -2)
    span = RowBasis(total)
    tries = 0
    for x in candidate_degree2_classes(alg, seed):
        if span.rank == b2:
            break
        tries += 1
        if tries > b2 * b2 + 500:
            break
        if bb_pairing(alg, x.coords, x.coords) == 0:
            continue
        if not has_lefschetz_property(alg, x):
            continue
        triple = solve_lambda(alg, x)
        if span.insert(triple.f.flatten(dims)) is not None:
            lambdas.append(triple.f)
            xs.append(x)
    return ls, lambdas, xs, span.rank


def analyze_llv(alg: GradedAlgebra, seed: int = 0) -> LlvAnalysis:
    """Closure, grading, g0 extraction and the structure-theorem report."""
    dims = alg.degree_dims
    ls, lambdas, xs, lspan = build_generators(alg, seed)
    g = lie_closure(ls + lambdas, dims)
    th = theta(alg)
    grading = grade_decompose(g, th)
    g0 = LieSubalgebra.from_int_ops(dims, g.part_ops(0))
    soh = extract_so_h(g0, alg.bb_form)
    report = verify_so_tilde(g, alg.bb_form)
    lam_eq = lspan == len(g.graded_parts().get(-2, ()))
    return LlvAnalysis(alg, g, th, grading, g0, soh, report,
                       tuple(xs), tuple(lambdas), lspan, lam_eq)
