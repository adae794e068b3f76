"""Graded Frobenius algebra core: cup product, integration, the signed
Poincare pairing, the grading operator and Lefschetz operators.

Conventions. An algebra models the even cohomology of a compact complex
manifold of complex dimension 2n (``half_dim`` is n): degrees run over
0, 2, ..., 4n, the degree-0 and top parts are one-dimensional, and the
grading operator acts on degree j as j - 2n. Products with the degree-0
part are implicit (the unit is a strict identity), so structure constants
are stored only for keys (da, ia, db, ib) with 2 <= da <= db, normalized by
commutativity, and only when the product vector is nonzero.

All scalars are exact rationals; no check in this module carries a
tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import MalformedAlgebraError
from .linalg import fmat_mul, rank_of

ProductKey = tuple[int, int, int, int]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def normalize_product_key(da: int, ia: int, db: int, ib: int) -> tuple[ProductKey, bool]:
    """Canonical key order; second component tells whether factors swapped."""
    if (da, ia) <= (db, ib):
        return (da, ia, db, ib), False
    return (db, ib, da, ia), True


@dataclass(frozen=True)
class AlgebraElement:
    degree: int
    coords: tuple[Fraction, ...]

    @staticmethod
    def make(degree: int, coords) -> "AlgebraElement":
        return AlgebraElement(degree, tuple(_frac(x) for x in coords))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def scaled(self, c) -> "AlgebraElement":
        c = _frac(c)
        return AlgebraElement(self.degree, tuple(c * x for x in self.coords))

    def plus(self, other: "AlgebraElement") -> "AlgebraElement":
        if other.degree != self.degree:
            raise ValueError("cannot add elements of different degrees")
        return AlgebraElement(self.degree,
                              tuple(x + y for x, y in zip(self.coords, other.coords)))


@dataclass(frozen=True)
class GradedAlgebra:
    """Structure constants of a graded commutative Frobenius algebra."""

    half_dim: int
    degree_dims: tuple[int, ...]
    labels: tuple[tuple[str, ...], ...]
    products: Mapping[ProductKey, tuple[Fraction, ...]]
    bb_form: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def create(half_dim, degree_dims, labels, products, bb_form) -> "GradedAlgebra":
        dims = tuple(int(d) for d in degree_dims)
        if len(dims) != 2 * half_dim + 1:
            raise MalformedAlgebraError(
                f"expected {2 * half_dim + 1} degree dims for half_dim {half_dim}, "
                f"got {len(dims)}")
        labs = tuple(tuple(str(s) for s in degree) for degree in labels)
        prods = {}
        for key in sorted(products):
            vec = tuple(_frac(x) for x in products[key])
            if any(vec):
                prods[tuple(int(k) for k in key)] = vec
        form = tuple(tuple(_frac(x) for x in row) for row in bb_form)
        return GradedAlgebra(half_dim, dims, labs, prods, form)

    @property
    def top_degree(self) -> int:
        return 4 * self.half_dim

    def degrees(self):
        return range(0, self.top_degree + 1, 2)

    def dim(self, degree: int) -> int:
        if degree < 0 or degree % 2 or degree > self.top_degree:
            return 0
        return self.degree_dims[degree // 2]

    @property
    def total_dim(self) -> int:
        return sum(self.degree_dims)

    @property
    def b2(self) -> int:
        return self.dim(2)

    def zero_element(self, degree: int) -> AlgebraElement:
        return AlgebraElement(degree, (Fraction(0),) * self.dim(degree))

    def basis_element(self, degree: int, index: int) -> AlgebraElement:
        coords = [Fraction(0)] * self.dim(degree)
        coords[index] = Fraction(1)
        return AlgebraElement(degree, tuple(coords))

    def unit_element(self) -> AlgebraElement:
        return self.basis_element(0, 0)

    def top_element(self) -> AlgebraElement:
        return self.basis_element(self.top_degree, 0)

    def element(self, degree: int, coords) -> AlgebraElement:
        e = AlgebraElement.make(degree, coords)
        if len(e.coords) != self.dim(degree):
            raise MalformedAlgebraError(
                f"degree {degree} needs {self.dim(degree)} coordinates, "
                f"got {len(e.coords)}")
        return e

    def structure_vector(self, da, ia, db, ib):
        key, _ = normalize_product_key(da, ia, db, ib)
        return self.products.get(key)


def bb_pairing(alg: GradedAlgebra, x, y) -> Fraction:
    """Beauville-Bogomolov pairing of two degree-2 coordinate vectors."""
    s = Fraction(0)
    for i, xi in enumerate(x):
        if xi:
            row = alg.bb_form[i]
            for j, yj in enumerate(y):
                if yj:
                    s += xi * row[j] * yj
    return s


def cup(alg: GradedAlgebra, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Cup product. Degree overflow gives the zero element of the (empty)
    target degree."""
    if len(a.coords) != alg.dim(a.degree) or len(b.coords) != alg.dim(b.degree):
        raise MalformedAlgebraError("element coordinates do not match algebra dims")
    dout = a.degree + b.degree
    if alg.dim(dout) == 0:
        return alg.zero_element(dout)
    if a.degree == 0:
        return b.scaled(a.coords[0])
    if b.degree == 0:
        return a.scaled(b.coords[0])
    acc = [Fraction(0)] * alg.dim(dout)
    for ia, ca in enumerate(a.coords):
        if not ca:
            continue
        for ib, cb in enumerate(b.coords):
            if not cb:
                continue
            vec = alg.structure_vector(a.degree, ia, b.degree, ib)
            if vec is None:
                continue
            c = ca * cb
            for k, v in enumerate(vec):
                if v:
                    acc[k] += c * v
    return AlgebraElement(dout, tuple(acc))


def integrate(alg: GradedAlgebra, a: AlgebraElement) -> Fraction:
    """Coefficient of the top class if a has top degree, else 0."""
    if a.degree != alg.top_degree:
        return Fraction(0)
    return a.coords[0]


def poincare_phi(alg: GradedAlgebra, a: AlgebraElement, b: AlgebraElement) -> Fraction:
    """Signed Poincare pairing (-1)^((deg a - 2n)/2) * integral of a.b.

    Zero on degree-mismatched pairs, so phi extends bilinearly to the whole
    space.
    """
    if a.degree + b.degree != alg.top_degree:
        return Fraction(0)
    sign = -1 if ((a.degree - 2 * alg.half_dim) // 2) % 2 else 1
    return sign * integrate(alg, cup(alg, a, b))


def phi_sign(alg: GradedAlgebra, degree: int) -> int:
    return -1 if ((degree - 2 * alg.half_dim) // 2) % 2 else 1


# ---------------------------------------------------------------------------
# Graded endomorphisms


def endo_layout(dims: tuple[int, ...], shift: int, first_degree: int | None = None):
    """Flattening layout of the shift-homogeneous endomorphism space.

    Returns (entries, total) where entries is a list of
    (source_degree, nrows, ncols, offset). Blocks appear in ascending source
    degree, except that ``first_degree`` (when given) is listed first; the
    lift solvers rely on that reordering.
    """
    top = 2 * (len(dims) - 1)
    order = []
    for d in range(0, top + 1, 2):
        if dims[d // 2] and 0 <= d + shift <= top and dims[(d + shift) // 2]:
            order.append(d)
    if first_degree is not None and first_degree in order:
        order.remove(first_degree)
        order.insert(0, first_degree)
    entries = []
    offset = 0
    for d in order:
        nrows = dims[(d + shift) // 2]
        ncols = dims[d // 2]
        entries.append((d, nrows, ncols, offset))
        offset += nrows * ncols
    return entries, offset


@dataclass(frozen=True)
class GradedEndomorphism:
    """Degree-homogeneous linear operator: blocks map degree d to d + shift."""

    shift: int
    blocks: Mapping[int, tuple[tuple[Fraction, ...], ...]] = field(default_factory=dict)

    @staticmethod
    def from_blocks(shift: int, blocks) -> "GradedEndomorphism":
        clean = {}
        for d in sorted(blocks):
            mat = tuple(tuple(_frac(x) for x in row) for row in blocks[d])
            if any(any(row) for row in mat):
                clean[d] = mat
        return GradedEndomorphism(shift, clean)

    def block(self, degree: int, dims: tuple[int, ...]):
        """Block at a source degree, materializing zeros when absent."""
        mat = self.blocks.get(degree)
        if mat is not None:
            return mat
        top = 2 * (len(dims) - 1)
        tgt = degree + self.shift
        nrows = dims[tgt // 2] if 0 <= tgt <= top and tgt % 2 == 0 else 0
        ncols = dims[degree // 2] if 0 <= degree <= top and degree % 2 == 0 else 0
        return tuple((Fraction(0),) * ncols for _ in range(nrows))

    def is_zero(self) -> bool:
        return not self.blocks

    def apply(self, alg: GradedAlgebra, a: AlgebraElement) -> AlgebraElement:
        dout = a.degree + self.shift
        mat = self.blocks.get(a.degree)
        if mat is None or alg.dim(dout) == 0:
            return alg.zero_element(dout)
        out = [Fraction(0)] * alg.dim(dout)
        for i, row in enumerate(mat):
            s = Fraction(0)
            for c, x in zip(row, a.coords):
                if c and x:
                    s += c * x
            out[i] = s
        return AlgebraElement(dout, tuple(out))

    def compose(self, other: "GradedEndomorphism", dims: tuple[int, ...]) -> "GradedEndomorphism":
        """self after other."""
        blocks = {}
        for d, bmat in other.blocks.items():
            amat = self.blocks.get(d + other.shift)
            if amat is None:
                continue
            blocks[d] = fmat_mul(amat, bmat)
        return GradedEndomorphism.from_blocks(self.shift + other.shift, blocks)

    def bracket(self, other: "GradedEndomorphism", dims: tuple[int, ...]) -> "GradedEndomorphism":
        ab = self.compose(other, dims)
        ba = other.compose(self, dims)
        return ab.minus(ba)

    def plus(self, other: "GradedEndomorphism") -> "GradedEndomorphism":
        if other.shift != self.shift:
            raise ValueError("cannot add endomorphisms of different shifts")
        blocks = {}
        for d in set(self.blocks) | set(other.blocks):
            a, b = self.blocks.get(d), other.blocks.get(d)
            if a is None:
                blocks[d] = b
            elif b is None:
                blocks[d] = a
            else:
                blocks[d] = tuple(tuple(x + y for x, y in zip(ra, rb))
                                  for ra, rb in zip(a, b))
        return GradedEndomorphism.from_blocks(self.shift, blocks)

    def minus(self, other: "GradedEndomorphism") -> "GradedEndomorphism":
        return self.plus(other.scaled(-1))

    def scaled(self, c) -> "GradedEndomorphism":
        c = _frac(c)
        if c == 0:
            return GradedEndomorphism(self.shift, {})
        return GradedEndomorphism.from_blocks(
            self.shift, {d: tuple(tuple(c * x for x in row) for row in mat)
                         for d, mat in self.blocks.items()})

    def flatten(self, dims: tuple[int, ...], first_degree: int | None = None) -> list[Fraction]:
        entries, total = endo_layout(dims, self.shift, first_degree)
        out = [Fraction(0)] * total
        for d, nrows, ncols, offset in entries:
            mat = self.blocks.get(d)
            if mat is None:
                continue
            k = offset
            for row in mat:
                for x in row:
                    out[k] = x
                    k += 1
        return out

    @staticmethod
    def from_flat(shift: int, dims: tuple[int, ...], flat,
                  first_degree: int | None = None) -> "GradedEndomorphism":
        entries, total = endo_layout(dims, shift, first_degree)
        blocks = {}
        for d, nrows, ncols, offset in entries:
            mat = [flat[offset + r * ncols: offset + (r + 1) * ncols]
                   for r in range(nrows)]
            blocks[d] = mat
        return GradedEndomorphism.from_blocks(shift, blocks)


def identity_endo(alg: GradedAlgebra) -> GradedEndomorphism:
    blocks = {}
    for d in alg.degrees():
        m = alg.dim(d)
        if m:
            blocks[d] = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    return GradedEndomorphism.from_blocks(0, blocks)


def theta(alg: GradedAlgebra) -> GradedEndomorphism:
    """Grading operator: scalar j - 2n on degree j."""
    two_n = 2 * alg.half_dim
    blocks = {}
    for d in alg.degrees():
        m = alg.dim(d)
        c = d - two_n
        if m and c:
            blocks[d] = [[c if i == j else 0 for j in range(m)] for i in range(m)]
    return GradedEndomorphism.from_blocks(0, blocks)


def lefschetz_operator(alg: GradedAlgebra, x: AlgebraElement) -> GradedEndomorphism:
    """L_x: cup multiplication by a degree-2 class, as a shift +2 operator."""
    if x.degree != 2:
        raise MalformedAlgebraError(f"Lefschetz class must have degree 2, got {x.degree}")
    if len(x.coords) != alg.b2:
        raise MalformedAlgebraError("degree-2 coordinates do not match b2")
    blocks = {}
    for d in alg.degrees():
        if alg.dim(d) == 0 or alg.dim(d + 2) == 0:
            continue
        cols = []
        for i in range(alg.dim(d)):
            cols.append(cup(alg, x, alg.basis_element(d, i)).coords)
        mat = [[cols[j][i] for j in range(alg.dim(d))] for i in range(alg.dim(d + 2))]
        blocks[d] = mat
    return GradedEndomorphism.from_blocks(2, blocks)


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class ValidationFailure:
    kind: str
    message: str
    witness: dict

    def to_json_dict(self):
        return {"kind": self.kind, "message": self.message, "witness": self.witness}


@dataclass(frozen=True)
class ValidationReport:
    failures: tuple[ValidationFailure, ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json_dict(self):
        return {"ok": self.ok, "failures": [f.to_json_dict() for f in self.failures]}


def pairing_matrix(alg: GradedAlgebra, degree: int):
    """Matrix of (a, b) -> integral of a.b between degree and 4n - degree."""
    dd, dc = alg.dim(degree), alg.dim(alg.top_degree - degree)
    rows = []
    for i in range(dd):
        a = alg.basis_element(degree, i)
        row = []
        for j in range(dc):
            b = alg.basis_element(alg.top_degree - degree, j)
            row.append(integrate(alg, cup(alg, a, b)))
        rows.append(row)
    return rows


def validate(alg: GradedAlgebra) -> ValidationReport:
    """Check every GradedAlgebra invariant, reporting all violations with
    witnessing indices. Commutativity and the unit law are enforced by the
    normalized storage, so they cannot fail here."""
    failures: list[ValidationFailure] = []
    top = alg.top_degree

    if alg.dim(0) != 1:
        failures.append(ValidationFailure(
            "end-dims", f"degree 0 must be 1-dimensional, found {alg.dim(0)}",
            {"degree": 0, "dim": alg.dim(0)}))
    if alg.dim(top) != 1:
        failures.append(ValidationFailure(
            "end-dims", f"degree {top} must be 1-dimensional, found {alg.dim(top)}",
            {"degree": top, "dim": alg.dim(top)}))
    for d in alg.degrees():
        if len(alg.labels[d // 2]) != alg.dim(d):
            failures.append(ValidationFailure(
                "labels", f"degree {d} has {len(alg.labels[d // 2])} labels for "
                f"{alg.dim(d)} basis elements", {"degree": d}))

    for key, vec in alg.products.items():
        da, ia, db, ib = key
        norm, _ = normalize_product_key(da, ia, db, ib)
        bad = (norm != key or da < 2 or db < 2 or da + db > top
               or ia >= alg.dim(da) or ib >= alg.dim(db)
               or len(vec) != alg.dim(da + db))
        if bad:
            failures.append(ValidationFailure(
                "product-shape", f"structure constant {key} is malformed",
                {"key": list(key)}))

    b2 = alg.b2
    form_ok = len(alg.bb_form) == b2 and all(len(row) == b2 for row in alg.bb_form)
    if not form_ok:
        failures.append(ValidationFailure(
            "bb-form", "bb_form is not a square degree-2 matrix", {}))
    else:
        for i in range(b2):
            for j in range(i + 1, b2):
                if alg.bb_form[i][j] != alg.bb_form[j][i]:
                    failures.append(ValidationFailure(
                        "bb-form", f"bb_form asymmetric at ({i}, {j})",
                        {"i": i, "j": j}))
        if rank_of(alg.bb_form, b2) != b2:
            failures.append(ValidationFailure(
                "bb-form", "bb_form is degenerate", {"rank": rank_of(alg.bb_form, b2)}))

    # associativity on basis triples; degrees sorted, total degree in range
    for da in alg.degrees():
        if da < 2 or alg.dim(da) == 0:
            continue
        for db in alg.degrees():
            if db < da or alg.dim(db) == 0:
                continue
            for dc in alg.degrees():
                if dc < db or da + db + dc > top or alg.dim(dc) == 0:
                    continue
                for ia in range(alg.dim(da)):
                    ea = alg.basis_element(da, ia)
                    for ib in range(alg.dim(db)):
                        if db == da and ib < ia:
                            continue
                        eb = alg.basis_element(db, ib)
                        ab = cup(alg, ea, eb)
                        for ic in range(alg.dim(dc)):
                            if dc == db and ic < ib:
                                continue
                            ec = alg.basis_element(dc, ic)
                            lhs = cup(alg, ab, ec)
                            rhs = cup(alg, ea, cup(alg, eb, ec))
                            if lhs.coords != rhs.coords:
                                failures.append(ValidationFailure(
                                    "associativity",
                                    f"(e{ia}.e{ib}).e{ic} != e{ia}.(e{ib}.e{ic}) "
                                    f"in degrees ({da}, {db}, {dc})",
                                    {"da": da, "ia": ia, "db": db, "ib": ib,
                                     "dc": dc, "ic": ic}))

    # Frobenius: full-rank top pairing degree by degree
    for d in alg.degrees():
        if d > top // 2:
            break
        dd, dc = alg.dim(d), alg.dim(top - d)
        if dd != dc:
            failures.append(ValidationFailure(
                "frobenius", f"dims {dd} and {dc} in dual degrees {d}, {top - d}",
                {"degree": d, "dim": dd, "dual_dim": dc}))
            continue
        if dd == 0:
            continue
        mat = pairing_matrix(alg, d)
        r = rank_of(mat, dc)
        if r != dd:
            failures.append(ValidationFailure(
                "frobenius", f"top pairing between degrees {d} and {top - d} "
                f"has rank {r} < {dd}", {"degree": d, "rank": r, "dim": dd}))

    return ValidationReport(tuple(failures))
