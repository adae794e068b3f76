from fractions import Fraction

import pytest

from llv_lab.decomposition import (GradedSubspace, full_subspace,
                                   markman_decompose)
from llv_lab.errors import StabilityError
from llv_lab.llv import int_blocks_to_endo
from llv_lab.rep import (SoHAction, casimir, check_markman_c, commutant,
                         isotypic_decompose, min_poly, rational_roots)
from llv_lab.ring import GradedEndomorphism


def degree_subspace(alg, degree):
    s = GradedSubspace(alg.degree_dims)
    for i in range(alg.dim(degree)):
        vec = [0] * alg.dim(degree)
        vec[i] = 1
        s.add(degree, vec)
    return s


@pytest.fixture(scope="module")
def act_sh(sh52, llv_sh52):
    return SoHAction(sh52, llv_sh52.soh.subalgebra)


def test_casimir_standard_eigenvalue(act_sh, sh52):
    # oracle: trace form duality gives Cas|std = (b2 - 1)/2 identity
    cas = act_sh.casimir_on_standard()
    b2 = sh52.b2
    want = Fraction(b2 - 1, 2)
    assert all(cas[i][j] == (want if i == j else 0)
               for i in range(b2) for j in range(b2))


def test_casimir_centrality_and_lift(act_sh, sh52):
    # Casimir on H^2 commutes with every so(H) degree-2 block
    cas = act_sh.casimir_on_standard()
    for _, blocks in act_sh.operators():
        blk = blocks.get(2)
        if blk is None:
            continue
        left = [[sum(cas[i][k] * blk[k][j] for k in range(5)) for j in range(5)]
                for i in range(5)]
        right = [[sum(blk[i][k] * cas[k][j] for k in range(5)) for j in range(5)]
                 for i in range(5)]
        assert left == right
    # lift returns operators whose degree-2 block is the requested matrix
    wm = act_sh.wedge_matrix(0, 1)
    lifted = act_sh.lift_endo(wm)
    assert [list(r) for r in lifted.block(2, sh52.degree_dims)] == wm


def test_commutant_standard_is_scalars(act_sh, sh52):
    com = commutant(act_sh.operators(), degree_subspace(sh52, 2))
    assert len(com) == 1


def test_commutant_stability_error(act_sh, sh52, llv_sh52):
    # a shift +2 operator does not preserve a middle-degree-only subspace
    plus = llv_sh52.g.part_ops(2)[0]
    with pytest.raises(StabilityError):
        commutant([plus], degree_subspace(sh52, 4))


def test_isotypic_h2(act_sh, sh52):
    rep = isotypic_decompose(sh52, act_sh, degree_subspace(sh52, 2))
    assert rep.trivial_dim == 0 and rep.complement_dim == 5
    assert len(rep.constituents) == 1
    con = rep.constituents[0]
    assert con.kind == "standard" and con.multiplicity == 1
    assert rep.markman_c and check_markman_c(rep)
    assert rep.schur_ok and rep.commutant_dim_total == 1


def test_isotypic_sym2_negative_control(act_sh, sh52):
    rep = isotypic_decompose(sh52, act_sh, degree_subspace(sh52, 4))
    kinds = sorted((c.kind, c.dim) for c in rep.constituents)
    assert kinds == [("other", 14), ("trivial", 1)]
    assert not rep.markman_c and not check_markman_c(rep)
    # Schur: 1^2 + 1^2 with the trivial line and the 14-dim constituent
    assert rep.commutant_dim_total == 2 and rep.schur_ok
    # the trivial line is the q-line: killed by every operator
    con = next(c for c in rep.constituents if c.kind == "trivial")
    assert con.casimir_eigenvalue == 0


def test_casimir_vanishes_on_trivial(aug521, llv_aug521):
    act = SoHAction(aug521, llv_aug521.soh.subalgebra)
    mk = markman_decompose(aug521, llv_aug521.g)
    c4 = mk.c_parts[2]
    cas = casimir(aug521, act, c4)
    assert cas == [[0]]


def test_isotypic_augmented_c4(aug521, llv_aug521):
    act = SoHAction(aug521, llv_aug521.soh.subalgebra)
    mk = markman_decompose(aug521, llv_aug521.g)
    rep = isotypic_decompose(aug521, act, mk.c_parts[2])
    assert rep.trivial_dim == 1 and rep.complement_dim == 0
    assert rep.markman_c


def test_isotypic_t2_multiplicity(aug522, llv_aug522):
    act = SoHAction(aug522, llv_aug522.soh.subalgebra)
    mk = markman_decompose(aug522, llv_aug522.g)
    rep = isotypic_decompose(aug522, act, mk.c_parts[2])
    con = rep.constituents[0]
    assert con.kind == "trivial" and con.multiplicity == 2
    assert not rep.markman_c
    # commutant on the two trivial lines is gl(2)
    assert rep.commutant_dim_total == 4 and rep.schur_ok


def test_min_poly_and_roots():
    mat = [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(3)]]
    poly = min_poly(mat)  # (x-2)(x-3) = 6 - 5x + x^2
    assert poly == [6, -5, 1]
    assert rational_roots(poly) == [2, 3]
    assert rational_roots([0, 1]) == [0]
    assert rational_roots([1, 0, 1]) == []  # x^2 + 1
    assert rational_roots([-1, 0, 4]) == [Fraction(-1, 2), Fraction(1, 2)]


def test_commutant_multi_degree(sh52, llv_sh52):
    # whole-space commutant of the full LLV algebra on SH: irreducible, so 1
    com = commutant(list(llv_sh52.g.basis), full_subspace(sh52))
    assert len(com) == 1


def test_schur_consistency_across_fixtures(act_sh, sh52):
    for degree in (2, 4):
        rep = isotypic_decompose(sh52, act_sh, degree_subspace(sh52, degree))
        assert rep.commutant_dim_total == sum(
            (c.multiplicity or 0) ** 2 for c in rep.constituents)
