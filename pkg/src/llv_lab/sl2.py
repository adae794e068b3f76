"""Lefschetz property and sl2-triples.

For a degree-2 class x with the Lefschetz property (all power maps between
dual degrees bijective), the operator lambda_x completing (L_x, theta) to an
sl2-triple exists and is unique. The solver recovers it as the unique
solution of the linear system [L_x, lambda] = theta over the blocks of a
shift -2 operator; the companion condition [theta, lambda] = -2 lambda holds
identically for any shift -2 operator (the grading commutator of a shift s
operator is s times itself), so it contributes no equations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import MalformedAlgebraError, NoSl2Error
from .linalg import rank_of, solve_affine
from .ring import (AlgebraElement, GradedAlgebra, GradedEndomorphism, bb_pairing,
                   cup, endo_layout, lefschetz_operator, theta)


@dataclass(frozen=True)
class Sl2Triple:
    e: GradedEndomorphism  # L_x, shift +2
    h: GradedEndomorphism  # theta, shift 0
    f: GradedEndomorphism  # lambda_x, shift -2

    def bracket_identities_hold(self, dims) -> bool:
        """[h,e] = 2e, [h,f] = -2f, [e,f] = h, all exact."""
        he = self.h.bracket(self.e, dims)
        if he.minus(self.e.scaled(2)).blocks:
            return False
        hf = self.h.bracket(self.f, dims)
        if hf.minus(self.f.scaled(-2)).blocks:
            return False
        ef = self.e.bracket(self.f, dims)
        return not ef.minus(self.h).blocks


def lefschetz_powers(alg: GradedAlgebra, x: AlgebraElement):
    """Yield (j, source degree 2n-2j, block of L_x^(2j) from that degree).

    Only even degrees exist here, so the dual-degree power maps are
    L^(2j): H^(2n-2j) -> H^(2n+2j) for j = 1..n.
    """
    L = lefschetz_operator(alg, x)
    L2 = L.compose(L, alg.degree_dims)
    power = L2
    n = alg.half_dim
    for j in range(1, n + 1):
        if j > 1:
            power = L2.compose(power, alg.degree_dims)
        src = 2 * n - 2 * j
        yield j, src, power.block(src, alg.degree_dims)


def has_lefschetz_property(alg: GradedAlgebra, x: AlgebraElement) -> bool:
    """True iff L_x^j: H^(2n-2j) -> H^(2n+2j) is bijective for every j >= 1."""
    n = alg.half_dim
    for j, src, mat in lefschetz_powers(alg, x):
        dsrc, dtgt = alg.dim(src), alg.dim(2 * n + 2 * j)
        if dsrc != dtgt:
            return False
        if dsrc == 0:
            continue
        if rank_of(mat, dsrc) != dsrc:
            return False
    return True


def solve_lambda(alg: GradedAlgebra, x: AlgebraElement) -> Sl2Triple:
    """The unique shift -2 operator completing (L_x, theta) to an sl2-triple.

    Raises NoSl2Error without the Lefschetz property, and
    MalformedAlgebraError if the affine solve is inconsistent or has a
    positive-dimensional solution space (either signals corrupt structure
    constants).
    """
    if not has_lefschetz_property(alg, x):
        raise NoSl2Error("class does not have the Lefschetz property")
    dims = alg.degree_dims
    two_n = 2 * alg.half_dim
    L = lefschetz_operator(alg, x)
    entries, total = endo_layout(dims, -2)
    offsets = {d: (off, nr, nc) for d, nr, nc, off in entries}

    rows: list[list[int]] = []
    rhs: list = []
    for d in alg.degrees():
        m = alg.dim(d)
        if m == 0:
            continue
        lf_below = L.block(d - 2, dims) if alg.dim(d - 2) else None
        lf_here = L.block(d, dims) if alg.dim(d + 2) else None
        for r in range(m):
            for c in range(m):
                row = [0] * total
                # (L_{d-2} . lambda_d)[r][c]
                if d in offsets and lf_below is not None:
                    off, nr, nc = offsets[d]
                    for k in range(alg.dim(d - 2)):
                        coef = lf_below[r][k]
                        if coef:
                            row[off + k * nc + c] = coef
                # -(lambda_{d+2} . L_d)[r][c]
                if d + 2 in offsets and lf_here is not None:
                    off2, nr2, nc2 = offsets[d + 2]
                    for k in range(alg.dim(d + 2)):
                        coef = lf_here[k][c]
                        if coef:
                            row[off2 + r * nc2 + k] = row[off2 + r * nc2 + k] - coef
                if any(row):
                    rows.append(row)
                    rhs.append((d - two_n) if r == c else 0)
                elif (d - two_n if r == c else 0) != 0:
                    raise MalformedAlgebraError(
                        "sl2 system has an unsatisfiable zero row; the algebra "
                        "is not a Lefschetz module")
    sol, nullity = solve_affine(rows, rhs, total)
    if sol is None:
        raise MalformedAlgebraError(
            "no sl2 partner exists despite the Lefschetz property; "
            "structure constants are inconsistent")
    if nullity != 0:
        raise MalformedAlgebraError(
            f"sl2 partner is not unique (solution space has dimension "
            f"{nullity}); the algebra is malformed")
    lam = GradedEndomorphism.from_flat(-2, dims, sol)
    return Sl2Triple(e=L, h=theta(alg), f=lam)


def candidate_degree2_classes(alg: GradedAlgebra, seed: int = 0):
    """Deterministic stream of degree-2 classes: basis vectors, then pairwise
    sums, then seeded random small-integer combinations."""
    b2 = alg.b2
    for i in range(b2):
        yield alg.basis_element(2, i)
    for i in range(b2):
        for j in range(i + 1, b2):
            coords = [0] * b2
            coords[i] = 1
            coords[j] = 1
            yield alg.element(2, coords)
    rng = random.Random(seed)
    for _ in range(400):
        coords = [rng.randint(-3, 3) for _ in range(b2)]
        if any(coords):
            yield alg.element(2, coords)


def sample_lefschetz_classes(alg: GradedAlgebra, count: int,
                             seed: int = 0) -> list[AlgebraElement]:
    """First ``count`` classes with the Lefschetz property from the
    deterministic candidate stream. q(x, x) != 0 is used as a cheap
    prefilter before the exact rank checks."""
    found = []
    for x in candidate_degree2_classes(alg, seed):
        if bb_pairing(alg, x.coords, x.coords) == 0:
            continue
        if has_lefschetz_property(alg, x):
            found.append(x)
            if len(found) == count:
                return found
    raise MalformedAlgebraError(
        f"found only {len(found)} Lefschetz classes of {count} requested")


def find_omega_auto(alg: GradedAlgebra) -> AlgebraElement:
    """First basis-combination class with q(x, x) > 0 and the Lefschetz
    property, in the deterministic candidate order."""
    for x in candidate_degree2_classes(alg, seed=0):
        if bb_pairing(alg, x.coords, x.coords) > 0 and has_lefschetz_property(alg, x):
            return x
    raise MalformedAlgebraError("no positive Lefschetz class found")
