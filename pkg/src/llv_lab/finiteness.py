"""Finiteness certificates.

The constrained automorphism group is modeled by its computable constraints:
grading-preserving algebra automorphisms of the even part that are trivial
on the degree-2 part and commute with the whole LLV algebra. Any such map
preserves each irreducible so(H)-constituent V of each complement C^{2i}
(i >= 2), acts on it by a scalar when V has multiplicity one, and preserves
the twisted pairing phi_omega(a, b) = phi(L_omega^e a, b) with the
degree-correct exponent e = 2 (half_dim - i). When phi_omega is
non-degenerate on V the scalar squares to 1, so the group embeds in
(Z/2)^N with one factor per listed constituent. The certificate records
every verified ingredient of that chain; any failed ingredient flips the
status to failed with the offending component as witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .decomposition import MarkmanDecomposition, markman_decompose
from .errors import NoSl2Error
from .linalg import nullspace, rank_of
from .llv import LieSubalgebra, extract_so_h
from .rep import SoHAction, isotypic_decompose
from .ring import (AlgebraElement, GradedAlgebra, GradedEndomorphism, cup,
                   endo_layout, lefschetz_operator, poincare_phi)
from .sl2 import has_lefschetz_property

CONSTRAINT_MODEL = (
    "grading-preserving algebra automorphism of the even part, trivial on "
    "the degree-2 part, commuting with the full LLV algebra")


@dataclass(frozen=True)
class PhiOmegaForm:
    degree: int
    exponent: int
    matrix: tuple
    rank: int
    dim: int
    symmetric: bool

    @property
    def non_degenerate(self) -> bool:
        return self.rank == self.dim

    @property
    def identically_zero(self) -> bool:
        return all(all(x == 0 for x in row) for row in self.matrix)


def phi_omega(alg: GradedAlgebra, omega: AlgebraElement, degree: int,
              vectors) -> PhiOmegaForm:
    """The form phi(L_omega^e a, b) on a subspace of the given degree, with
    the degree-correct exponent e = 2(half_dim - i) pairing into the top
    degree. Requires omega to have the Lefschetz property."""
    if not has_lefschetz_property(alg, omega):
        raise NoSl2Error("omega does not have the Lefschetz property")
    i = degree // 2
    e = 2 * (alg.half_dim - i)
    if e < 0:
        raise ValueError(f"degree {degree} lies above the middle; "
                         "phi_omega is undefined there")
    vecs = [list(v) for v in vectors]
    k = len(vecs)
    L = lefschetz_operator(alg, omega)
    images = []
    for v in vecs:
        elem = alg.element(degree, [Fraction(x) for x in v])
        for _ in range(e):
            elem = L.apply(alg, elem)
        images.append(elem)
    mat = []
    for a_img in images:
        row = []
        for v in vecs:
            b = alg.element(degree, [Fraction(x) for x in v])
            row.append(poincare_phi(alg, a_img, b))
        mat.append(row)
    rank = rank_of(mat, k) if k else 0
    symmetric = all(mat[i0][j0] == mat[j0][i0] for i0 in range(k)
                    for j0 in range(k))
    return PhiOmegaForm(degree, e, tuple(tuple(r) for r in mat), rank, k,
                        symmetric)


@dataclass(frozen=True)
class ConstraintSpace:
    affine_dim: int
    basis: tuple[GradedEndomorphism, ...]

    def to_json_dict(self):
        return {"affine_dim": self.affine_dim,
                "note": "particular solution is the identity; basis spans the "
                        "homogeneous directions (vanishing on degree 2, "
                        "commuting with the LLV algebra)"}


def commutant_constraint_space(alg: GradedAlgebra, g: LieSubalgebra) -> ConstraintSpace:
    """Affine space of grading-preserving endomorphisms T with T = identity
    on the degree-2 part and [T, g] = 0: the identity plus the homogeneous
    solution space computed here."""
    dims = alg.degree_dims
    free_degrees = [d for d in alg.degrees() if d != 2 and alg.dim(d)]
    offsets = {}
    off = 0
    for d in free_degrees:
        offsets[d] = off
        off += alg.dim(d) * alg.dim(d)
    total = off

    rows = []
    for shift, blocks in g._basis_int:
        for d in alg.degrees():
            m_src = alg.dim(d)
            m_tgt = alg.dim(d + shift)
            if m_src == 0 or m_tgt == 0:
                continue
            u = blocks.get(d)
            if u is None:
                u = [[0] * m_src for _ in range(m_tgt)]
            # (T_{d+s} u - u T_d)[r][c] = 0
            for r in range(m_tgt):
                for c in range(m_src):
                    row = [0] * total
                    nonzero = False
                    if d + shift in offsets:
                        base = offsets[d + shift]
                        for k in range(m_tgt):
                            coef = u[k][c]
                            if coef:
                                row[base + r * m_tgt + k] += coef
                                nonzero = True
                    if d in offsets:
                        base = offsets[d]
                        for k in range(m_src):
                            coef = u[r][k]
                            if coef:
                                row[base + k * m_src + c] -= coef
                                nonzero = True
                    if nonzero:
                        rows.append(row)
    sols = nullspace(rows, total) if total else []
    ops = []
    for sol in sols:
        blocks = {}
        for d in free_degrees:
            m = alg.dim(d)
            base = offsets[d]
            mat = [[sol[base + i * m + j] for j in range(m)] for i in range(m)]
            if any(any(r) for r in mat):
                blocks[d] = mat
        ops.append(GradedEndomorphism.from_blocks(0, blocks))
    return ConstraintSpace(len(sols), tuple(ops))


@dataclass(frozen=True)
class CertComponent:
    degree: int
    constituent: str
    dim: int
    multiplicity: int | None
    phi_omega_nondegenerate: bool
    phi_omega_rank: int
    phi_omega_exponent: int
    phi_omega_symmetric: bool

    def to_json_dict(self):
        return {"degree": self.degree, "constituent": self.constituent,
                "dim": self.dim, "multiplicity": self.multiplicity,
                "phi_omega_nondegenerate": self.phi_omega_nondegenerate,
                "phi_omega_rank": self.phi_omega_rank,
                "phi_omega_exponent": self.phi_omega_exponent,
                "phi_omega_symmetric": self.phi_omega_symmetric}


@dataclass(frozen=True)
class FinitenessCertificate:
    constraints_used: str
    components: tuple[CertComponent, ...]
    n_factors: int
    bound: str
    status: str  # "certified" | "failed"
    reason: str | None
    constraint_space_dim: int
    omega: tuple

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    def to_json_dict(self):
        return {"constraints_used": self.constraints_used,
                "components": [c.to_json_dict() for c in self.components],
                "n_factors": self.n_factors,
                "bound": self.bound,
                "status": self.status,
                "reason": self.reason,
                "constraint_space_dim": self.constraint_space_dim,
                "omega": [str(x) for x in self.omega]}


def certify(alg: GradedAlgebra, g: LieSubalgebra, omega: AlgebraElement,
            markman: MarkmanDecomposition | None = None) -> FinitenessCertificate:
    """Bound the constrained automorphism group inside (Z/2)^N.

    For every irreducible constituent of every complement C^{2i}, i >= 2:
    verify multiplicity one and non-degeneracy of phi_omega on it. All pass:
    certified with one Z/2 factor per constituent. Any failure: status
    failed with the offending component.
    """
    if not has_lefschetz_property(alg, omega):
        raise NoSl2Error("omega does not have the Lefschetz property")
    if markman is None:
        markman = markman_decompose(alg, g)
    cspace = commutant_constraint_space(alg, g)

    def finish(status, reason, components, n):
        bound = f"(Z/2)^{n}" if status == "certified" else "none"
        return FinitenessCertificate(CONSTRAINT_MODEL, tuple(components), n,
                                     bound, status, reason, cspace.affine_dim,
                                     tuple(omega.coords))

    if not markman.ok:
        return finish("failed", "markman decomposition checks failed", (), 0)

    g0 = LieSubalgebra.from_int_ops(alg.degree_dims, g.part_ops(0))
    soh = extract_so_h(g0, alg.bb_form)
    if not soh.ok:
        return finish("failed", "; ".join(soh.violations), (), 0)
    act = SoHAction(alg, soh.subalgebra)

    components = []
    for i in sorted(markman.c_parts):
        if i < 2:
            continue
        c_space = markman.c_parts[i]
        deg = 2 * i
        if c_space.dim_at(deg) == 0:
            continue
        report = isotypic_decompose(alg, act, c_space)
        if not report.resolved or not report.semisimple_ok:
            return finish("failed",
                          f"isotypic decomposition of C^{deg} unresolved",
                          components, len(components))
        for con in report.constituents:
            label = f"{con.kind}(casimir={con.casimir_eigenvalue})"
            vecs = [coords for (d, coords) in
                    [pair for group in con.vectors for pair in group]
                    if d == deg]
            form = phi_omega(alg, omega, deg, vecs)
            comp = CertComponent(deg, label, con.dim, con.multiplicity,
                                 form.non_degenerate, form.rank, form.exponent,
                                 form.symmetric)
            components.append(comp)
            if con.kind == "other":
                return finish("failed",
                              f"C^{deg} carries a constituent beyond standard "
                              f"+ trivial: {label}", components, len(components))
            if con.multiplicity != 1:
                return finish("failed",
                              f"constituent {label} of C^{deg} has multiplicity "
                              f"{con.multiplicity}, not 1",
                              components, len(components))
            if form.identically_zero or not form.non_degenerate:
                kindmsg = ("identically zero" if form.identically_zero
                           else f"rank {form.rank} of {form.dim}")
                return finish("failed",
                              f"phi_omega on {label} of C^{deg} is {kindmsg}",
                              components, len(components))
    return finish("certified", None, components, len(components))
