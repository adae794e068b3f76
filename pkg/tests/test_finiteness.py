from fractions import Fraction

import pytest

from llv_lab.decomposition import markman_decompose
from llv_lab.errors import NoSl2Error
from llv_lab.finiteness import (certify, commutant_constraint_space,
                                phi_omega)
from llv_lab.sl2 import find_omega_auto


def test_phi_omega_on_augmented_c(aug521):
    om = find_omega_auto(aug521)
    cvec = [0] * 16
    cvec[15] = 1
    form = phi_omega(aug521, om, 4, [cvec])
    # middle degree: exponent 0, phi(c, c) = integral of c.c = 1
    assert form.exponent == 0
    assert form.matrix == ((1,),)
    assert form.non_degenerate and form.symmetric


def test_phi_omega_on_k3_h2(k3_d11):
    om = find_omega_auto(k3_d11)
    vecs = [[1, 0], [0, 1]]
    form = phi_omega(k3_d11, om, 2, vecs)
    # exponent 0 and the form is the top pairing = q itself (global sign +1)
    assert form.exponent == 0
    assert [list(r) for r in form.matrix] == [list(r) for r in k3_d11.bb_form]
    assert form.non_degenerate


def test_phi_omega_empty_space_vacuous(sh52):
    om = find_omega_auto(sh52)
    form = phi_omega(sh52, om, 4, [])
    assert form.dim == 0 and form.non_degenerate


def test_phi_omega_needs_lefschetz(k3_d1m1):
    iso = k3_d1m1.element(2, [1, 1])
    with pytest.raises(NoSl2Error):
        phi_omega(k3_d1m1, iso, 2, [[1, 0]])


def test_phi_omega_exponent_above_middle(sh52):
    om = find_omega_auto(sh52)
    x = sh52.basis_element(2, 0)
    form = phi_omega(sh52, om, 2, [x.coords])
    assert form.exponent == 2  # L^2 pairs degree 2 into degree 8


def test_constraint_space_dims(k3_b5, llv_k3_b5, aug521, llv_aug521,
                               aug522, llv_aug522):
    assert commutant_constraint_space(k3_b5, llv_k3_b5.g).affine_dim == 0
    cs = commutant_constraint_space(aug521, llv_aug521.g)
    assert cs.affine_dim == 1
    # the free direction is the scalar on the span of c
    op = cs.basis[0]
    blk = op.blocks.get(4)
    assert blk is not None
    nz = [(i, j) for i in range(16) for j in range(16) if blk[i][j]]
    assert nz == [(15, 15)]
    assert commutant_constraint_space(aug522, llv_aug522.g).affine_dim == 4


def test_constraint_space_elements_commute(aug521, llv_aug521):
    cs = commutant_constraint_space(aug521, llv_aug521.g)
    for op in cs.basis:
        for basis_op in llv_aug521.g.basis:
            assert op.bracket(basis_op, aug521.degree_dims).is_zero()
        assert 2 not in op.blocks  # vanishes on the degree-2 part


def test_certify_fixtures(sh52, llv_sh52, aug521, llv_aug521,
                          aug522, llv_aug522, k3_b5, llv_k3_b5):
    om = find_omega_auto(sh52)
    cert = certify(sh52, llv_sh52.g, om)
    assert cert.certified and cert.n_factors == 0 and cert.bound == "(Z/2)^0"

    om = find_omega_auto(aug521)
    cert = certify(aug521, llv_aug521.g, om)
    assert cert.certified and cert.n_factors == 1 and cert.bound == "(Z/2)^1"
    comp = cert.components[0]
    assert comp.degree == 4 and comp.multiplicity == 1
    assert comp.phi_omega_nondegenerate

    om = find_omega_auto(aug522)
    cert = certify(aug522, llv_aug522.g, om)
    assert not cert.certified and cert.status == "failed"
    assert "multiplicity" in cert.reason and "2" in cert.reason

    om = find_omega_auto(k3_b5)
    cert = certify(k3_b5, llv_k3_b5.g, om)
    assert cert.certified and cert.n_factors == 0


def test_certify_reuses_markman(aug521, llv_aug521):
    om = find_omega_auto(aug521)
    mk = markman_decompose(aug521, llv_aug521.g)
    cert = certify(aug521, llv_aug521.g, om, markman=mk)
    assert cert.certified and cert.n_factors == 1


def test_certificate_json_round_trip(aug521, llv_aug521):
    import json
    om = find_omega_auto(aug521)
    cert = certify(aug521, llv_aug521.g, om)
    blob = json.dumps(cert.to_json_dict(), sort_keys=True)
    back = json.loads(blob)
    assert back["status"] == "certified"
    assert back["bound"] == "(Z/2)^1"
    assert back["constraint_space_dim"] == 1


def test_schur_dichotomy_on_constituents(aug521, llv_aug521):
    # phi_omega on each certified constituent is non-degenerate, never
    # partially degenerate
    om = find_omega_auto(aug521)
    cert = certify(aug521, llv_aug521.g, om)
    for comp in cert.components:
        assert comp.phi_omega_rank in (0, comp.dim)
        assert comp.phi_omega_nondegenerate
