"""Primitive subspaces, degree-filtered subalgebras, module closures under
the LLV algebra, phi-orthogonal complements and the Markman decomposition
H^{2i} = (A_{2i-2} cap H^{2i}) + C^{2i}.

Orthogonality is computed against the unsigned top pairing degree by
degree; the signed pairing differs from it by a nonzero per-degree scalar,
so the complements agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _kernels as K
from .linalg import RowBasis, nullspace, span_intersect
from .llv import IntBlocks, LieSubalgebra
from .ring import AlgebraElement, GradedAlgebra, cup, pairing_matrix


class GradedSubspace:
    """Per-degree echelonized subspaces of the graded pieces of an algebra."""

    def __init__(self, dims):
        self.dims = tuple(dims)
        self._bases: dict[int, RowBasis] = {}

    def _basis(self, degree: int) -> RowBasis:
        rb = self._bases.get(degree)
        if rb is None:
            width = self.dims[degree // 2] if 0 <= degree // 2 < len(self.dims) else 0
            rb = self._bases[degree] = RowBasis(width)
        return rb

    def add(self, degree: int, vec) -> bool:
        """Insert a vector; True when it enlarged the subspace."""
        if degree < 0 or degree % 2 or degree // 2 >= len(self.dims):
            return False
        if self.dims[degree // 2] == 0:
            return False
        return self._basis(degree).insert(vec) is not None

    def dim_at(self, degree: int) -> int:
        rb = self._bases.get(degree)
        return rb.rank if rb else 0

    @property
    def total_dim(self) -> int:
        return sum(rb.rank for rb in self._bases.values())

    def degrees(self):
        return sorted(d for d, rb in self._bases.items() if rb.rank)

    def vectors(self, degree: int) -> list[list[int]]:
        rb = self._bases.get(degree)
        return [row[:] for row in rb.rows] if rb else []

    def contains(self, degree: int, vec) -> bool:
        if all(x == 0 for x in vec):
            return True
        rb = self._bases.get(degree)
        return bool(rb) and rb.contains(vec)

    def contains_subspace(self, other: "GradedSubspace") -> bool:
        for d in other.degrees():
            for row in other.vectors(d):
                if not self.contains(d, row):
                    return False
        return True

    def equals(self, other: "GradedSubspace") -> bool:
        dims_self = {d: self.dim_at(d) for d in self.degrees()}
        dims_other = {d: other.dim_at(d) for d in other.degrees()}
        return dims_self == dims_other and self.contains_subspace(other)

    def dims_map(self) -> dict[int, int]:
        return {d: self.dim_at(d) for d in self.degrees()}


def full_subspace(alg: GradedAlgebra) -> GradedSubspace:
    out = GradedSubspace(alg.degree_dims)
    for d in alg.degrees():
        for i in range(alg.dim(d)):
            vec = [0] * alg.dim(d)
            vec[i] = 1
            out.add(d, vec)
    return out


def apply_int_op(blocks: IntBlocks, degree: int, vec):
    blk = blocks.get(degree)
    if blk is None:
        return None
    return K.mat_vec(blk, list(vec))


def compute_prim(alg: GradedAlgebra, g: LieSubalgebra) -> GradedSubspace:
    """Joint kernel of the -2-graded part, degree by degree."""
    minus = g.part_ops(-2)
    out = GradedSubspace(alg.degree_dims)
    for d in alg.degrees():
        m = alg.dim(d)
        if m == 0:
            continue
        rows = []
        for _, blocks in minus:
            blk = blocks.get(d)
            if blk is not None:
                rows.extend(blk)
        if rows:
            for vec in nullspace(rows, m):
                out.add(d, vec)
        else:
            for i in range(m):
                vec = [0] * m
                vec[i] = 1
                out.add(d, vec)
    return out


def _multiplicative_closure(alg: GradedAlgebra, generators) -> GradedSubspace:
    """Span of all products of the given homogeneous generators (with the
    unit adjoined): saturate by repeated right multiplication."""
    out = GradedSubspace(alg.degree_dims)
    queue: list[tuple[int, tuple]] = []

    def push(degree, coords):
        ivec = [Fraction(x) for x in coords]
        if any(ivec) and out.add(degree, ivec):
            queue.append((degree, tuple(ivec)))

    unit = [Fraction(1)]
    push(0, unit)
    gens = [(d, tuple(Fraction(x) for x in coords)) for d, coords in generators
            if d > 0 and any(coords)]
    for d, coords in gens:
        push(d, coords)
    qi = 0
    while qi < len(queue):
        d, coords = queue[qi]
        qi += 1
        a = AlgebraElement.make(d, coords)
        for dg, gcoords in gens:
            if d + dg > alg.top_degree:
                continue
            prod = cup(alg, a, AlgebraElement.make(dg, gcoords))
            if not prod.is_zero():
                push(prod.degree, prod.coords)
    return out


def subalgebra_A(alg: GradedAlgebra, l: int) -> GradedSubspace:
    """Subalgebra generated by all parts of degree <= 2l (the unit always
    included)."""
    gens = []
    for d in alg.degrees():
        if 0 < d <= 2 * l:
            for i in range(alg.dim(d)):
                vec = [0] * alg.dim(d)
                vec[i] = 1
                gens.append((d, vec))
    return _multiplicative_closure(alg, gens)


def module_closure(seeds: GradedSubspace, ops, dims) -> GradedSubspace:
    """Smallest subspace containing the seeds and stable under the integer
    block operators."""
    out = GradedSubspace(dims)
    queue: list[tuple[int, list[int]]] = []
    for d in seeds.degrees():
        for row in seeds.vectors(d):
            if out.add(d, row):
                queue.append((d, row))
    qi = 0
    while qi < len(queue):
        d, vec = queue[qi]
        qi += 1
        for shift, blocks in ops:
            w = apply_int_op(blocks, d, vec)
            if w is not None and any(w) and out.add(d + shift, w):
                queue.append((d + shift, w))
    return out


def module_B(alg: GradedAlgebra, g: LieSubalgebra, l: int) -> GradedSubspace:
    """g-module generated by the primitive parts that lie in A_{2l}."""
    prim = compute_prim(alg, g)
    a_sub = subalgebra_A(alg, l)
    return module_B_from(alg, g, prim, a_sub)


def module_B_from(alg: GradedAlgebra, g: LieSubalgebra, prim: GradedSubspace,
                  a_sub: GradedSubspace) -> GradedSubspace:
    seeds = GradedSubspace(alg.degree_dims)
    for d in alg.degrees():
        pv = prim.vectors(d)
        av = a_sub.vectors(d)
        if not pv or not av:
            continue
        for vec in span_intersect(pv, av, alg.dim(d)):
            seeds.add(d, vec)
    return module_closure(seeds, g._basis_int, alg.degree_dims)


@dataclass(frozen=True)
class OrthComplementResult:
    subspace: GradedSubspace
    complement_ok: bool
    degenerate_degrees: tuple[int, ...]


def orth_complement(alg: GradedAlgebra, S: GradedSubspace) -> OrthComplementResult:
    """{y : phi(s, y) = 0 for all s in S} with a per-degree check that
    S + S_perp fills the space (guaranteed when S is a g-submodule, where
    phi restricts non-degenerately; reported otherwise)."""
    out = GradedSubspace(alg.degree_dims)
    top = alg.top_degree
    degenerate = []
    for d in alg.degrees():
        m = alg.dim(d)
        if m == 0:
            continue
        dual = top - d
        svecs = S.vectors(dual)
        if not svecs:
            for i in range(m):
                vec = [0] * m
                vec[i] = 1
                out.add(d, vec)
            continue
        pm = pairing_matrix(alg, dual)  # [j][i]: e_{dual,j} . e_{d,i}
        rows = []
        for s in svecs:
            row = [Fraction(0)] * m
            for j, sj in enumerate(s):
                if sj:
                    prow = pm[j]
                    for i in range(m):
                        if prow[i]:
                            row[i] += sj * prow[i]
            rows.append(row)
        for vec in nullspace(rows, m):
            out.add(d, vec)
        here = S.dim_at(d) + out.dim_at(d)
        inter = span_intersect(S.vectors(d), out.vectors(d), m) if S.dim_at(d) else []
        if here != m or inter:
            degenerate.append(d)
    return OrthComplementResult(out, not degenerate, tuple(degenerate))


@dataclass(frozen=True)
class MarkmanDegreeEntry:
    i: int
    degree: int
    full_dim: int
    a_dim: int
    c_dim: int
    direct_sum_ok: bool
    step_v_ok: bool
    g0_stable: bool

    def to_json_dict(self):
        return {"i": self.i, "degree": self.degree, "dim": self.full_dim,
                "a_dim": self.a_dim, "c_dim": self.c_dim,
                "direct_sum_ok": self.direct_sum_ok,
                "step_v_ok": self.step_v_ok, "g0_stable": self.g0_stable}


@dataclass(frozen=True)
class MarkmanDecomposition:
    entries: tuple[MarkmanDegreeEntry, ...]
    generation_ok: bool
    complements_ok: bool
    c_parts: dict[int, GradedSubspace]
    a_parts: dict[int, list[list[int]]]

    @property
    def ok(self) -> bool:
        return (self.generation_ok and self.complements_ok
                and all(e.direct_sum_ok and e.step_v_ok and e.g0_stable
                        for e in self.entries))

    def c_dims(self) -> dict[int, int]:
        return {e.degree: e.c_dim for e in self.entries}

    def to_json_dict(self):
        return {"entries": [e.to_json_dict() for e in self.entries],
                "generation_ok": self.generation_ok,
                "complements_ok": self.complements_ok,
                "ok": self.ok}


def markman_decompose(alg: GradedAlgebra, g: LieSubalgebra) -> MarkmanDecomposition:
    """C^2 = H^2 and C^{2i} = B_{2i-2}-perp cap H^{2i} for i >= 2, with the
    direct-sum, step-(v) equality, g0-stability and generation checks."""
    n2 = 2 * alg.half_dim
    prim = compute_prim(alg, g)
    g0_ops = g.part_ops(0)
    a_cache = {l: subalgebra_A(alg, l) for l in range(0, n2 + 1)}

    entries = []
    c_parts: dict[int, GradedSubspace] = {}
    a_parts: dict[int, list[list[int]]] = {}
    complements_ok = True
    for i in range(1, n2 + 1):
        deg = 2 * i
        m = alg.dim(deg)
        a_vecs = a_cache[i - 1].vectors(deg)
        a_dim = len(a_vecs)
        a_parts[i] = a_vecs
        c_space = GradedSubspace(alg.degree_dims)
        if i == 1:
            for k in range(m):
                vec = [0] * m
                vec[k] = 1
                c_space.add(deg, vec)
            step_v_ok = True
        else:
            b_mod = module_B_from(alg, g, prim, a_cache[i - 1])
            orth = orth_complement(alg, b_mod)
            if not orth.complement_ok:
                complements_ok = False
            for vec in orth.subspace.vectors(deg):
                c_space.add(deg, vec)
            # step (v): B_{2i-2} cap H^{2i} equals A_{2i-2} cap H^{2i}
            b_at = b_mod.vectors(deg)
            step_v_ok = (len(b_at) == a_dim
                         and all(b_mod.contains(deg, v) for v in a_vecs)
                         and all(_in_span(a_vecs, v, m) for v in b_at))
        c_dim = c_space.dim_at(deg)
        inter = span_intersect(a_vecs, c_space.vectors(deg), m) if a_vecs and c_dim else []
        direct_sum_ok = (a_dim + c_dim == m) and not inter
        g0_stable = True
        for _, blocks in g0_ops:
            for vec in c_space.vectors(deg):
                w = apply_int_op(blocks, deg, vec)
                if w is not None and not c_space.contains(deg, w):
                    g0_stable = False
                    break
            if not g0_stable:
                break
        entries.append(MarkmanDegreeEntry(i, deg, m, a_dim, c_dim,
                                          direct_sum_ok, step_v_ok, g0_stable))
        c_parts[i] = c_space

    gens = []
    for i, cs in c_parts.items():
        for vec in cs.vectors(2 * i):
            gens.append((2 * i, vec))
    generated = _multiplicative_closure(alg, gens)
    generation_ok = all(generated.dim_at(d) == alg.dim(d) for d in alg.degrees())

    return MarkmanDecomposition(tuple(entries), generation_ok, complements_ok,
                                c_parts, a_parts)


def _in_span(rows, vec, ncols) -> bool:
    rb = RowBasis(ncols)
    for r in rows:
        rb.insert(r)
    return rb.contains(vec)


@dataclass(frozen=True)
class LlSpanningEntry:
    i: int
    module_equals_a2_prim: bool
    prim_dim: int

    def to_json_dict(self):
        return {"i": self.i, "module_equals_a2_prim": self.module_equals_a2_prim,
                "prim_dim": self.prim_dim}


@dataclass(frozen=True)
class LlSpanningReport:
    entries: tuple[LlSpanningEntry, ...]
    sum_spans_everything: bool
    prim_g0_stable: bool
    prim_vanishes_above_middle: bool

    @property
    def ok(self) -> bool:
        return (self.sum_spans_everything and self.prim_g0_stable
                and self.prim_vanishes_above_middle
                and all(e.module_equals_a2_prim for e in self.entries))

    def to_json_dict(self):
        return {"entries": [e.to_json_dict() for e in self.entries],
                "sum_spans_everything": self.sum_spans_everything,
                "prim_g0_stable": self.prim_g0_stable,
                "prim_vanishes_above_middle": self.prim_vanishes_above_middle,
                "ok": self.ok}


def verify_ll_spanning(alg: GradedAlgebra, g: LieSubalgebra) -> LlSpanningReport:
    """Per degree 2i: the g-module generated by Prim^{2i} equals
    A_2 . Prim^{2i}; the sum over i spans the algebra; Prim is g0-stable and
    vanishes above the middle degree."""
    prim = compute_prim(alg, g)
    a2 = subalgebra_A(alg, 1)
    total = GradedSubspace(alg.degree_dims)
    entries = []
    for d in alg.degrees():
        pv = prim.vectors(d)
        if not pv:
            continue
        seeds = GradedSubspace(alg.degree_dims)
        for vec in pv:
            seeds.add(d, vec)
        mod = module_closure(seeds, g._basis_int, alg.degree_dims)
        a2prim = GradedSubspace(alg.degree_dims)
        for da in a2.degrees():
            for avec in a2.vectors(da):
                a = AlgebraElement.make(da, [Fraction(x) for x in avec])
                for pvec in pv:
                    p = AlgebraElement.make(d, [Fraction(x) for x in pvec])
                    prod = cup(alg, a, p)
                    if not prod.is_zero():
                        a2prim.add(prod.degree, prod.coords)
        entries.append(LlSpanningEntry(d // 2, mod.equals(a2prim), len(pv)))
        for dd in a2prim.degrees():
            for vec in a2prim.vectors(dd):
                total.add(dd, vec)
    spans = all(total.dim_at(d) == alg.dim(d) for d in alg.degrees())
    stable = True
    for _, blocks in g.part_ops(0):
        for d in prim.degrees():
            for vec in prim.vectors(d):
                w = apply_int_op(blocks, d, vec)
                if w is not None and not prim.contains(d, w):
                    stable = False
    vanish = all(prim.dim_at(d) == 0 for d in prim.degrees()
                 if d > alg.half_dim * 2)
    return LlSpanningReport(tuple(entries), spans, stable, vanish)
