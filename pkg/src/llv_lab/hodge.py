"""Rational period points, Weil operators and the membership theorem.

A period point is a pair of orthogonal degree-2 classes of equal positive
q-value, encoding a holomorphic 2-form sigma = e1 + i e2 (so q(sigma,
sigma) = 0, q(sigma, conj sigma) > 0). The associated Weil operator acts on
H^2 as twice the rotation in the (e1, e2)-plane and vanishes on its
q-orthogonal complement; the membership theorem realizes it as the
degree-2 block of a unique element of the so(H) copy inside g_0, whose
action on every degree then determines the full Hodge numbers.

Restricting to rational periods keeps every check exact; transcendental
periods are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import MalformedAlgebraError
from .linalg import RowBasis, fmat_mul, rank_of
from .rep import SoHAction
from .ring import AlgebraElement, GradedAlgebra, GradedEndomorphism, bb_pairing, cup
from .sl2 import candidate_degree2_classes


@dataclass(frozen=True)
class PeriodPoint:
    e1: tuple[Fraction, ...]
    e2: tuple[Fraction, ...]

    @staticmethod
    def make(e1, e2) -> "PeriodPoint":
        return PeriodPoint(tuple(Fraction(x) for x in e1),
                           tuple(Fraction(x) for x in e2))

    def to_json_dict(self):
        return {"e1": [str(x) for x in self.e1], "e2": [str(x) for x in self.e2]}


def validate_period(alg: GradedAlgebra, p: PeriodPoint) -> None:
    if len(p.e1) != alg.b2 or len(p.e2) != alg.b2:
        raise MalformedAlgebraError("period coordinates do not match b2")
    q11 = bb_pairing(alg, p.e1, p.e1)
    q22 = bb_pairing(alg, p.e2, p.e2)
    q12 = bb_pairing(alg, p.e1, p.e2)
    if q11 != q22 or q11 <= 0 or q12 != 0:
        raise MalformedAlgebraError(
            f"period must satisfy q(e1,e1) = q(e2,e2) > 0 and q(e1,e2) = 0; "
            f"got {q11}, {q22}, {q12}")


def weil_on_h2(alg: GradedAlgebra, p: PeriodPoint):
    """W on the degree-2 part: e1 -> -2 e2, e2 -> 2 e1, zero on the
    orthogonal complement of the period plane. Exact and q-skew."""
    validate_period(alg, p)
    b2 = alg.b2
    norm = bb_pairing(alg, p.e1, p.e1)
    cols = []
    for i in range(b2):
        basis = [Fraction(0)] * b2
        basis[i] = Fraction(1)
        a = bb_pairing(alg, p.e1, basis) / norm
        b = bb_pairing(alg, p.e2, basis) / norm
        col = [a * (-2 * p.e2[r]) + b * (2 * p.e1[r]) for r in range(b2)]
        cols.append(col)
    return [[cols[j][i] for j in range(b2)] for i in range(b2)]


@dataclass(frozen=True)
class WeilData:
    period: PeriodPoint
    xi: tuple  # degree-2 matrix of the Weil operator
    extended: GradedEndomorphism
    eigen_table: dict[int, tuple[tuple[int, int], ...]]
    membership_ok: bool
    degree2_exact: bool
    derivation_ok: bool
    spectra_ok: bool

    @property
    def ok(self) -> bool:
        return (self.membership_ok and self.degree2_exact
                and self.derivation_ok and self.spectra_ok)

    def to_json_dict(self):
        return {"period": self.period.to_json_dict(),
                "eigen_table": {str(d): [[e, m] for e, m in tab]
                                for d, tab in sorted(self.eigen_table.items())},
                "membership_ok": self.membership_ok,
                "degree2_exact": self.degree2_exact,
                "derivation_ok": self.derivation_ok,
                "spectra_ok": self.spectra_ok,
                "ok": self.ok}


def _nullity(mat, m) -> int:
    return m - rank_of(mat, m)


def verify_weil_membership(alg: GradedAlgebra, soh_action: SoHAction,
                           p: PeriodPoint) -> WeilData:
    """Solve for the so(H) element whose degree-2 action is the Weil
    operator, extend to all degrees, and verify the derivation property and
    the even integer spectrum i(p - q) degree by degree."""
    W = weil_on_h2(alg, p)
    dims = alg.degree_dims
    two_n = 2 * alg.half_dim
    try:
        extended = soh_action.lift_endo(W)
        membership_ok = True
    except MalformedAlgebraError:
        return WeilData(p, tuple(map(tuple, W)), GradedEndomorphism(0, {}),
                        {}, False, False, False, False)

    blk2 = extended.block(2, dims)
    degree2_exact = [list(r) for r in blk2] == W

    pairs = []
    for da in alg.degrees():
        for db in alg.degrees():
            if db < da or da + db > alg.top_degree:
                continue
            for ia in range(alg.dim(da)):
                for ib in range(alg.dim(db)):
                    pairs.append((da, ia, db, ib))
    derivation_ok = _is_derivation(alg, extended, pairs)

    eigen_table: dict[int, tuple[tuple[int, int], ...]] = {}
    spectra_ok = True
    for d in alg.degrees():
        m = alg.dim(d)
        if m == 0:
            continue
        M = [list(r) for r in extended.block(d, dims)]
        emax = min(d, 2 * two_n - d)
        # annihilation: M Prod_e (M^2 + e^2) = 0 over even e, so the complex
        # spectrum lies in i * {-emax..emax even}
        M2 = fmat_mul(M, M)
        P = [[Fraction(1) if i == j else Fraction(0) for j in range(m)]
             for i in range(m)]
        P = fmat_mul(P, M)
        for e in range(2, emax + 1, 2):
            shifted = [[M2[i][j] + (e * e if i == j else 0) for j in range(m)]
                       for i in range(m)]
            P = fmat_mul(P, shifted)
        if any(any(row) for row in P):
            spectra_ok = False
            continue
        mult0 = _nullity(M, m)
        table = []
        accounted = mult0
        for e in range(2, emax + 1, 2):
            shifted = [[M2[i][j] + (e * e if i == j else 0) for j in range(m)]
                       for i in range(m)]
            k = _nullity(shifted, m)
            if k % 2:
                spectra_ok = False
                break
            if k:
                table.append((e, k // 2))
                accounted += k
        if accounted != m:
            spectra_ok = False
        full = tuple(sorted([(-e, mu) for e, mu in table] +
                            ([(0, mult0)] if mult0 else []) +
                            [(e, mu) for e, mu in table]))
        eigen_table[d] = full
    return WeilData(p, tuple(map(tuple, W)), extended, eigen_table,
                    membership_ok, degree2_exact, derivation_ok, spectra_ok)


def _is_derivation(alg, op, pairs) -> bool:
    for (da, ia, db, ib) in pairs:
        a = alg.basis_element(da, ia)
        b = alg.basis_element(db, ib)
        lhs = op.apply(alg, cup(alg, a, b))
        rhs = cup(alg, op.apply(alg, a), b).plus(cup(alg, a, op.apply(alg, b)))
        if lhs.coords != rhs.coords:
            return False
    return True


def hodge_numbers(data: WeilData, degree: int) -> list[tuple[int, int, int]]:
    """Read (p, q) off the eigenvalue table: e = p - q, p + q = degree."""
    table = data.eigen_table.get(degree, ())
    out = []
    for e, mult in table:
        if (degree + e) % 2:
            raise MalformedAlgebraError(
                f"eigenvalue {e} has wrong parity for degree {degree}")
        out.append(((degree + e) // 2, (degree - e) // 2, mult))
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class Pi2Report:
    soh_dim: int
    degree2_rank: int
    degree2_standard_ok: bool
    weil_span_dim: int
    weil_span_degree2_rank: int

    @property
    def ok(self) -> bool:
        return (self.degree2_rank == self.soh_dim
                and self.degree2_standard_ok
                and self.weil_span_degree2_rank == self.weil_span_dim)

    def to_json_dict(self):
        return {"soh_dim": self.soh_dim, "degree2_rank": self.degree2_rank,
                "degree2_standard_ok": self.degree2_standard_ok,
                "weil_span_dim": self.weil_span_dim,
                "weil_span_degree2_rank": self.weil_span_degree2_rank,
                "ok": self.ok}


def check_pi2_faithful(alg: GradedAlgebra, soh_action: SoHAction,
                       weil_datas) -> Pi2Report:
    """The even-degree representation of so(H) has zero kernel, its degree-2
    block is the standard action, and restriction-to-degree-2 stays injective
    on the span of the sampled Weil operators."""
    b2 = alg.b2
    dims = alg.degree_dims
    ops = soh_action.operators()
    deg2 = RowBasis(b2 * b2)
    for _, blocks in ops:
        blk = blocks.get(2)
        row = ([blk[i][j] for i in range(b2) for j in range(b2)]
               if blk else [0] * (b2 * b2))
        deg2.insert(row)
    degree2_rank = deg2.rank

    standard_ok = True
    for i in range(b2):
        for j in range(i + 1, b2):
            wm = soh_action.wedge_matrix(i, j)
            lifted = soh_action.lift_endo(wm)
            blk = lifted.block(2, dims)
            if [list(r) for r in blk] != wm:
                standard_ok = False

    full_span = RowBasis(sum(alg.dim(d) * alg.dim(d) for d in alg.degrees()))
    w2_span = RowBasis(b2 * b2)
    wspan = 0
    w2rank = 0
    for wd in weil_datas:
        flat = []
        for d in alg.degrees():
            blk = wd.extended.block(d, dims)
            flat.extend(x for row in blk for x in row)
        if full_span.insert(flat) is not None:
            wspan += 1
        w2_span.insert([x for row in wd.xi for x in row])
    w2rank = w2_span.rank
    return Pi2Report(soh_action.soh.dim, degree2_rank, standard_ok,
                     full_span.rank, w2rank)


def _is_rational_square(x: Fraction) -> Fraction | None:
    if x <= 0:
        return None
    a, b = x.numerator, x.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def find_periods(alg: GradedAlgebra, count: int, seed: int = 0) -> list[PeriodPoint]:
    """Deterministic search for rational period points: orthogonalize pairs
    from the candidate class stream and rescale when the q-value ratio is a
    rational square."""
    found: list[PeriodPoint] = []
    seen = set()
    cands = []
    for x in candidate_degree2_classes(alg, seed):
        cands.append([Fraction(c) for c in x.coords])
        if len(cands) >= alg.b2 * alg.b2 + 400:
            break
    # round-robin over the first class to diversify the period planes
    for limit_per_x in (1, count):
        for i, x in enumerate(cands):
            qxx = bb_pairing(alg, x, x)
            if qxx <= 0:
                continue
            from_x = 0
            for y in cands[i + 1:]:
                qxy = bb_pairing(alg, x, y)
                yp = [yc - (qxy / qxx) * xc for yc, xc in zip(y, x)]
                qyy = bb_pairing(alg, yp, yp)
                if qyy <= 0:
                    continue
                s = _is_rational_square(qxx / qyy)
                if s is None:
                    continue
                e2 = tuple(s * c for c in yp)
                key = (tuple(x), e2)
                if key in seen:
                    continue
                seen.add(key)
                found.append(PeriodPoint.make(x, e2))
                if len(found) == count:
                    return found
                from_x += 1
                if from_x >= limit_per_x:
                    break
    raise MalformedAlgebraError(
        f"found only {len(found)} rational periods of {count} requested; "
        "supply --period explicitly")
