from fractions import Fraction

import pytest

from llv_lab.errors import MalformedAlgebraError
from llv_lab.hodge import (PeriodPoint, check_pi2_faithful, find_periods,
                           hodge_numbers, validate_period, verify_weil_membership,
                           weil_on_h2)
from llv_lab.rep import SoHAction
from llv_lab.ring import bb_pairing


def sym2_hodge_oracle(b2):
    """Combinatorial symmetric square of a weight-2 structure (1, b2-2, 1):
    h^{4,0} = 1, h^{3,1} = k, h^{2,2} = Sym^2 of the middle plus the
    sigma.conj(sigma) line = k(k+1)/2 + 1, with k = b2 - 2."""
    k = b2 - 2
    return {(4, 0): 1, (3, 1): k, (2, 2): k * (k + 1) // 2 + 1,
            (1, 3): k, (0, 4): 1}


@pytest.fixture(scope="module")
def act_sh(sh52, llv_sh52):
    return SoHAction(sh52, llv_sh52.soh.subalgebra)


def test_period_validation(k3_d11):
    validate_period(k3_d11, PeriodPoint.make([1, 0], [0, 1]))
    with pytest.raises(MalformedAlgebraError):
        validate_period(k3_d11, PeriodPoint.make([1, 0], [0, 2]))  # unequal q
    with pytest.raises(MalformedAlgebraError):
        validate_period(k3_d11, PeriodPoint.make([1, 0], [1, 1]))  # not orthogonal


def test_weil_rotation_block(k3_d11):
    p = PeriodPoint.make([1, 0], [0, 1])
    W = weil_on_h2(k3_d11, p)
    assert W == [[0, 2], [-2, 0]]
    # sigma = e1 + i e2 is an eigenvector: W sigma = 2 i sigma, i.e.
    # W e1 = -2 e2 and W e2 = 2 e1
    assert [W[i][0] for i in range(2)] == [0, -2]
    assert [W[i][1] for i in range(2)] == [2, 0]


def test_weil_skew_and_complement(sh52):
    p = find_periods(sh52, 1)[0]
    W = weil_on_h2(sh52, p)
    q = sh52.bb_form
    b2 = sh52.b2
    for i in range(b2):
        for j in range(b2):
            lhs = sum(W[k][i] * q[k][j] + q[i][k] * W[k][j] for k in range(b2))
            assert lhs == 0
    # W vanishes on the orthogonal complement of the period plane
    for vec in _period_complement(sh52, p):
        img = [sum(W[i][j] * vec[j] for j in range(b2)) for i in range(b2)]
        assert not any(img)


def _period_complement(alg, p):
    from llv_lab.linalg import nullspace
    rows = [[alg.bb_form[i][j] for j in range(alg.b2)] for i in range(alg.b2)]
    r1 = [sum(Fraction(p.e1[i]) * rows[i][j] for i in range(alg.b2))
          for j in range(alg.b2)]
    r2 = [sum(Fraction(p.e2[i]) * rows[i][j] for i in range(alg.b2))
          for j in range(alg.b2)]
    return nullspace([r1, r2], alg.b2)


def test_membership_and_tables_sh(sh52, act_sh):
    periods = find_periods(sh52, 3)
    for p in periods:
        wd = verify_weil_membership(sh52, act_sh, p)
        assert wd.ok
        assert wd.membership_ok and wd.degree2_exact and wd.derivation_ok
        # H^2 Hodge numbers are (1, b2 - 2, 1)
        assert hodge_numbers(wd, 2) == [(2, 0, 1), (1, 1, 3), (0, 2, 1)]
        # H^4 matches the symmetric-square oracle
        got = {(pp, qq): h for pp, qq, h in hodge_numbers(wd, 4)}
        assert got == sym2_hodge_oracle(5)
        # degree 0 and the top degree carry no rotation
        assert wd.eigen_table[0] == ((0, 1),)
        assert wd.eigen_table[8] == ((0, 1),)
        # symmetry and completeness in every degree
        for d in sh52.degrees():
            tab = dict(wd.eigen_table[d])
            assert sum(tab.values()) == sh52.dim(d)
            assert all(tab.get(-e, 0) == m for e, m in tab.items())


def test_augmented_middle_class_is_1_1(aug521, llv_aug521):
    act = SoHAction(aug521, llv_aug521.soh.subalgebra)
    p = find_periods(aug521, 1)[0]
    wd = verify_weil_membership(aug521, act, p)
    assert wd.ok
    # degree 4 gains one (2,2) class from c
    got = {(pp, qq): h for pp, qq, h in hodge_numbers(wd, 4)}
    want = dict(sym2_hodge_oracle(5))
    want[(2, 2)] += 1
    assert got == want


def test_pi2_faithful(sh52, act_sh):
    periods = find_periods(sh52, 3)
    datas = [verify_weil_membership(sh52, act_sh, p) for p in periods]
    rep = check_pi2_faithful(sh52, act_sh, datas)
    assert rep.ok
    assert rep.degree2_rank == rep.soh_dim == 10
    assert rep.weil_span_dim == rep.weil_span_degree2_rank


def test_find_periods_are_valid(sh52, k3_full):
    for alg in (sh52, k3_full):
        for p in find_periods(alg, 3):
            validate_period(alg, p)
            assert bb_pairing(alg, p.e1, p.e1) > 0
