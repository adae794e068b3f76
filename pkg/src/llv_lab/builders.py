"""Validated fixture algebras.

Three families:

* ``build_k3``: the rank-(1, b2, 1) surface ring with x.y = q(x, y) top.
* ``build_verbitsky_component``: the subalgebra a degree-2 part generates,
  modeled as Sym(H^2) modulo the ideal generated by (n+1)-st powers of
  q-isotropic vectors. The ideal is produced by rank saturation over sampled
  rational points of the quadric and checked against the closed-form
  dimension profile dim Sym^min(k, 2n-k).
* ``build_augmented_model``: the Verbitsky component plus t extra middle
  classes pairing only with themselves, the smallest fixture with a
  non-trivial complement in degrees 2i for i >= 2.

Every builder validates its output and refuses to return a broken algebra.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import BuilderError
from .linalg import RowBasis, primitive, to_int_list
from .ring import GradedAlgebra, validate

# ---------------------------------------------------------------------------
# Quadratic forms


def hyperbolic_plane():
    return ((0, 1), (1, 0))


_E8_EDGES = ((1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4))


def e8_form(sign: int = 1):
    """Gram matrix of the E8 root lattice (Cartan matrix, determinant 1)."""
    mat = [[0] * 8 for _ in range(8)]
    for i in range(8):
        mat[i][i] = 2 * sign
    for a, b in _E8_EDGES:
        mat[a - 1][b - 1] = -sign
        mat[b - 1][a - 1] = -sign
    return tuple(tuple(row) for row in mat)


def diag_form(entries):
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(n))
                 for i in range(n))


def direct_sum(*blocks):
    n = sum(len(b) for b in blocks)
    mat = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                mat[off + i][off + j] = Fraction(x)
        off += len(b)
    return tuple(tuple(row) for row in mat)


def k3_lattice_form():
    """U^3 + E8(-1)^2, the degree-2 form of a K3 surface (b2 = 22)."""
    u = hyperbolic_plane()
    e = e8_form(-1)
    return direct_sum(u, u, u, e, e)


@dataclass(frozen=True)
class QuadraticFormSpec:
    """A symmetric non-degenerate rational form on the degree-2 part."""

    matrix: tuple[tuple[Fraction, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @staticmethod
    def coerce(q) -> "QuadraticFormSpec":
        if isinstance(q, QuadraticFormSpec):
            return q
        mat = tuple(tuple(Fraction(x) for x in row) for row in q)
        spec = QuadraticFormSpec(mat)
        spec.check()
        return spec

    def check(self) -> None:
        n = self.rank
        if any(len(row) != n for row in self.matrix):
            raise BuilderError("quadratic form matrix is not square")
        for i in range(n):
            for j in range(i + 1, n):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise BuilderError(f"quadratic form asymmetric at ({i}, {j})")
        basis = RowBasis(n)
        for row in self.matrix:
            basis.insert(row)
        if basis.rank != n:
            raise BuilderError("quadratic form is degenerate")

    def value(self, x, y) -> Fraction:
        s = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                row = self.matrix[i]
                for j, yj in enumerate(y):
                    if yj:
                        s += Fraction(xi) * row[j] * yj
        return s


def _split_terms(text: str) -> list[str]:
    terms, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0:
            terms.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    terms.append("".join(cur))
    return [t.strip() for t in terms if t.strip()]


def parse_form_name(name: str) -> QuadraticFormSpec:
    """Parse a named orthogonal sum such as ``U^3+E8(-1)^2+diag(1,1,1)``."""
    blocks = []
    for term in _split_terms(name):
        power = 1
        if "^" in term:
            term, _, pow_s = term.rpartition("^")
            term = term.strip()
            power = int(pow_s)
        if power < 1:
            raise BuilderError(f"block power must be positive in {name!r}")
        if term == "U":
            block = hyperbolic_plane()
        elif term == "E8":
            block = e8_form(1)
        elif term == "E8(-1)":
            block = e8_form(-1)
        elif term.startswith("diag(") and term.endswith(")"):
            entries = [Fraction(s.strip()) for s in term[5:-1].split(",")]
            block = diag_form(entries)
        else:
            raise BuilderError(f"unknown quadratic form block {term!r}")
        blocks.extend([block] * power)
    if not blocks:
        raise BuilderError(f"empty quadratic form spec {name!r}")
    return QuadraticFormSpec.coerce(direct_sum(*blocks))


def default_form(b2: int) -> QuadraticFormSpec:
    if b2 == 22:
        return QuadraticFormSpec.coerce(k3_lattice_form())
    if b2 == 23:
        return QuadraticFormSpec.coerce(direct_sum(k3_lattice_form(), diag_form([-2])))
    if b2 >= 3:
        return QuadraticFormSpec.coerce(direct_sum(hyperbolic_plane(),
                                                   diag_form([1] * (b2 - 2))))
    if b2 >= 1:
        return QuadraticFormSpec.coerce(diag_form([1] * b2))
    raise BuilderError("b2 must be positive")


# ---------------------------------------------------------------------------
# K3


def build_k3(q) -> GradedAlgebra:
    """Degree profile (1, b2, 1) with x.y = q(x, y) top on degree 2."""
    spec = QuadraticFormSpec.coerce(q)
    b2 = spec.rank
    products = {}
    for i in range(b2):
        for j in range(i, b2):
            v = spec.matrix[i][j]
            if v:
                products[(2, i, 2, j)] = (v,)
    labels = (("1",), tuple(f"e{i + 1}" for i in range(b2)), ("pt",))
    alg = GradedAlgebra.create(1, (1, b2, 1), labels, products, spec.matrix)
    report = validate(alg)
    if not report.ok:
        raise BuilderError(f"K3 builder produced an invalid algebra: "
                           f"{report.failures[0].message}")
    return alg


# ---------------------------------------------------------------------------
# Verbitsky component


def monomials(b2: int, k: int) -> list[tuple[int, ...]]:
    """Degree-k monomials in b2 variables as sorted index tuples, lex order."""
    return list(itertools.combinations_with_replacement(range(b2), k))


def monomial_label(mono: tuple[int, ...]) -> str:
    if not mono:
        return "1"
    parts = []
    for var in sorted(set(mono)):
        e = mono.count(var)
        parts.append(f"x{var + 1}" if e == 1 else f"x{var + 1}^{e}")
    return "*".join(parts)


def _power_vector(x, power: int, index: dict) -> list:
    """Coordinates of (sum x_i e_i)^power in the monomial basis."""
    b2 = len(x)
    out = [0] * len(index)
    fact = factorial(power)
    for mono in itertools.combinations_with_replacement(range(b2), power):
        coeff = fact
        val = 1
        for var in set(mono):
            e = mono.count(var)
            coeff //= factorial(e)
            val *= x[var] ** e
        if val:
            out[index[mono]] = coeff * val
    return out


def find_isotropic_seed(q: QuadraticFormSpec) -> list[int] | None:
    """Small integer isotropic vector, or None. Searches basis vectors and
    two-variable combinations with coefficients up to 3."""
    b2 = q.rank
    for i in range(b2):
        if q.matrix[i][i] == 0:
            vec = [0] * b2
            vec[i] = 1
            return vec
    for i in range(b2):
        for j in range(i + 1, b2):
            for a in range(1, 4):
                for b in range(-3, 4):
                    if b == 0:
                        continue
                    val = (a * a * q.matrix[i][i] + 2 * a * b * q.matrix[i][j]
                           + b * b * q.matrix[j][j])
                    if val == 0:
                        vec = [0] * b2
                        vec[i], vec[j] = a, b
                        return vec
    return None


def sample_isotropic(q: QuadraticFormSpec, seed_vec, rng: random.Random) -> list[int]:
    """Rational point of the quadric via the line-through-seed parametrization:
    x = q(u,u) v0 - 2 q(v0,u) u is isotropic for every u."""
    b2 = q.rank
    while True:
        u = [rng.randint(-4, 4) for _ in range(b2)]
        quu = q.value(u, u)
        qvu = q.value(seed_vec, u)
        x = [quu * v - 2 * qvu * w for v, w in zip(seed_vec, u)]
        if any(x):
            return primitive(to_int_list([Fraction(c) for c in x]))


NO_ISOTROPIC_MSG = ("could not find enough rational isotropic vectors to "
                    "saturate the power ideal; supply a form with rational "
                    "isotropic vectors, e.g. one containing a U block")


def build_verbitsky_component(q, n: int, seed: int = 0) -> GradedAlgebra:
    """Sym(H^2) modulo (n+1)-st powers of isotropic vectors, with the
    degree profile dim Sym^min(k, 2n-k)."""
    spec = QuadraticFormSpec.coerce(q)
    b2 = spec.rank
    if b2 < 3:
        raise BuilderError("the Verbitsky component needs b2 >= 3")
    if n < 1:
        raise BuilderError("n must be a positive integer")

    seed_vec = find_isotropic_seed(spec)
    if seed_vec is None:
        raise BuilderError(NO_ISOTROPIC_MSG)
    rng = random.Random(seed)

    monos = {k: monomials(b2, k) for k in range(0, 2 * n + 1)}
    index = {k: {m: i for i, m in enumerate(ms)} for k, ms in monos.items()}
    sym_dim = {k: len(ms) for k, ms in monos.items()}
    target = {k: comb(b2 - 1 + min(k, 2 * n - k), min(k, 2 * n - k))
              for k in range(0, 2 * n + 1)}

    # saturate the degree-k ideal pieces, k = n+1 .. 2n
    ideal: dict[int, RowBasis] = {}
    power_index = index[n + 1]
    for k in range(n + 1, 2 * n + 1):
        basis = RowBasis(sym_dim[k])
        want = sym_dim[k] - target[k]
        stable = 0
        batches = 0
        while stable < 2 and batches < 60:
            before = basis.rank
            for _ in range(8):
                x = sample_isotropic(spec, seed_vec, rng)
                pvec = _power_vector(x, n + 1, power_index)
                for m in monos[k - n - 1]:
                    row = [0] * sym_dim[k]
                    for mono_p, c in zip(monos[n + 1], pvec):
                        if c:
                            row[index[k][tuple(sorted(mono_p + m))]] += c
                    basis.insert(row)
            stable = stable + 1 if basis.rank == before else 0
            batches += 1
        if basis.rank > want:
            raise BuilderError(
                f"power ideal in degree {2 * k} has rank {basis.rank}, above the "
                f"dimension target {want}; the form does not satisfy the "
                f"Verbitsky profile")
        if basis.rank < want:
            raise BuilderError(NO_ISOTROPIC_MSG +
                               f" (degree {2 * k}: rank {basis.rank} of {want})")
        ideal[k] = basis

    reps = {}
    for k in range(0, 2 * n + 1):
        if k <= n:
            reps[k] = list(range(sym_dim[k]))
        else:
            pivots = set(ideal[k].pivots)
            reps[k] = [c for c in range(sym_dim[k]) if c not in pivots]

    def quotient_coords(k: int, sym_vec):
        if k <= n:
            return [Fraction(x) for x in sym_vec]
        rem, alpha = ideal[k].residue_tracked(sym_vec)
        return [Fraction(rem[c]) / alpha for c in reps[k]]

    products = {}
    for ka in range(1, 2 * n):
        for kb in range(ka, 2 * n + 1 - ka):
            kc = ka + kb
            for ia, ma in enumerate(reps[ka]):
                mono_a = monos[ka][ma]
                start = ia if ka == kb else 0
                for ib in range(start, len(reps[kb])):
                    mono_b = monos[kb][reps[kb][ib]]
                    prod = tuple(sorted(mono_a + mono_b))
                    vec = [0] * sym_dim[kc]
                    vec[index[kc][prod]] = 1
                    coords = quotient_coords(kc, vec)
                    if any(coords):
                        products[(2 * ka, ia, 2 * kb, ib)] = tuple(coords)

    dims = tuple(len(reps[k]) for k in range(0, 2 * n + 1))
    labels = tuple(tuple(monomial_label(monos[k][m]) for m in reps[k])
                   for k in range(0, 2 * n + 1))
    alg = GradedAlgebra.create(n, dims, labels, products, spec.matrix)
    report = validate(alg)
    if not report.ok:
        raise BuilderError("Verbitsky component failed validation: "
                           f"{report.failures[0].message}")
    return alg


# ---------------------------------------------------------------------------
# Augmented model


def build_augmented_model(q, n: int, t: int, seed: int = 0) -> GradedAlgebra:
    """Verbitsky component plus t middle classes c_j with c_j.c_k = delta top
    and c_j.(positive-degree part) = 0 otherwise."""
    if t < 0:
        raise BuilderError("t must be non-negative")
    if n < 2:
        raise BuilderError("the augmented model needs n >= 2")
    sh = build_verbitsky_component(q, n, seed=seed)
    if t == 0:
        return sh

    mid = 2 * n
    mid_dim = sh.dim(mid)
    dims = list(sh.degree_dims)
    dims[n] = mid_dim + t

    products = {}
    for key, vec in sh.products.items():
        da, ia, db, ib = key
        if da + db == mid:
            products[key] = tuple(vec) + (Fraction(0),) * t
        else:
            products[key] = vec
    for j in range(t):
        products[(mid, mid_dim + j, mid, mid_dim + j)] = (Fraction(1),)

    labels = list(sh.labels)
    labels[n] = tuple(labels[n]) + tuple(f"c{j + 1}" for j in range(t))
    alg = GradedAlgebra.create(n, dims, labels, products, sh.bb_form)
    report = validate(alg)
    if not report.ok:
        raise BuilderError("augmented model failed validation: "
                           f"{report.failures[0].message}")
    return alg
