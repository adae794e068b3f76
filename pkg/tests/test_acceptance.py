"""Acceptance criteria, one test per criterion, each printing a pass line.

Every tolerance here is exact: the assertions compare integers, exact
rationals, and booleans produced by exact arithmetic. Run with
``pytest tests/test_acceptance.py -v`` for the per-criterion lines.
"""

import json
import time
from fractions import Fraction

from llv_lab.cli import main as cli_main
from llv_lab.decomposition import full_subspace, markman_decompose, verify_ll_spanning
from llv_lab.builders import build_verbitsky_component, parse_form_name
from llv_lab.finiteness import certify
from llv_lab.hodge import check_pi2_faithful, find_periods, hodge_numbers, verify_weil_membership
from llv_lab.linalg import nullspace
from llv_lab.llv import analyze_llv
from llv_lab.rep import SoHAction, check_markman_c, commutant, isotypic_decompose
from llv_lab.ring import GradedAlgebra, GradedEndomorphism, endo_layout, lefschetz_operator, validate
from llv_lab.serialize import algebra_to_json_dict, canonicalize, dumps_algebra, loads_algebra
from llv_lab.sl2 import find_omega_auto, sample_lefschetz_classes, solve_lambda


def _ok(num, detail):
    print(f"criterion {num}: PASS - {detail}")


def test_criterion_01_llv_structure_k3_full(llv_k3_full):
    analysis, elapsed = llv_k3_full
    rep = analysis.report
    assert analysis.g.dim == 276
    assert rep.grading_dims == (22, 232, 22)
    assert rep.iso_verified, rep.first_failure
    assert rep.soh_dim == 231
    assert elapsed <= 300, f"K3 b2=22 run took {elapsed:.1f}s, budget 300s"
    _ok(1, f"dim 276, grading (22, 232, 22), so(24) verified, "
           f"so(H) dim 231, {elapsed:.1f}s")


def test_criterion_02_llv_structure_small_model():
    t0 = time.monotonic()
    sh = build_verbitsky_component(parse_form_name("U+diag(1,1,1)"), 2)
    res = analyze_llv(sh)
    elapsed = time.monotonic() - t0
    assert sh.degree_dims == (1, 5, 15, 5, 1)
    assert res.g.dim == 21 == (5 + 2) * (5 + 1) // 2
    assert res.report.grading_dims == (5, 11, 5)
    assert res.report.iso_verified
    assert elapsed <= 5, f"SH(5,2) run took {elapsed:.2f}s, budget 5s"
    _ok(2, f"dims (1,5,15,5,1), dim g_tot 21 = dim so(7), "
           f"grading (5,11,5), {elapsed:.2f}s")


def _lambda_centralizer_dim(alg, x):
    """Independent uniqueness oracle: dimension of the shift -2 centralizer
    of L_x, which is the solution space of the sl2 system."""
    dims = alg.degree_dims
    L = lefschetz_operator(alg, x)
    entries, total = endo_layout(dims, -2)
    cols = []
    for c in range(total):
        flat = [Fraction(0)] * total
        flat[c] = Fraction(1)
        Z = GradedEndomorphism.from_flat(-2, dims, flat)
        cols.append(L.bracket(Z, dims).flatten(dims))
    eqs = [[cols[c][e] for c in range(total)] for e in range(len(cols[0]))]
    return len(nullspace(eqs, total))


def test_criterion_03_sl2_suite(k3_full, sh52, aug521):
    checked = 0
    for alg in (k3_full, sh52, aug521):
        xs = sample_lefschetz_classes(alg, 10)
        assert len(xs) == 10
        for x in xs:
            triple = solve_lambda(alg, x)  # raises unless the solve is a point
            assert triple.bracket_identities_hold(alg.degree_dims)
            checked += 1
        # independent oracle for the single-point claim on two classes
        for x in xs[:2]:
            assert _lambda_centralizer_dim(alg, x) == 0
    _ok(3, f"{checked} sl2 solves across 3 fixtures, all bracket identities "
           "exact, solution spaces zero-dimensional")


def test_criterion_04_ll_spanning(llv_k3_full, k3_full, llv_sh52, sh52,
                                  llv_aug521, aug521):
    analysis_k3, _ = llv_k3_full
    for alg, res in ((k3_full, analysis_k3), (sh52, llv_sh52), (aug521, llv_aug521)):
        rep = verify_ll_spanning(alg, res.g)
        assert rep.ok
        assert rep.sum_spans_everything
        for e in rep.entries:
            assert e.module_equals_a2_prim
    _ok(4, "A_2.Prim spans H* and equals the module closure of Prim on "
           "K3(22), SH(5,2) and the augmented model")


def test_criterion_05_markman(llv_aug521, aug521, llv_sh52, sh52):
    mk = markman_decompose(aug521, llv_aug521.g)
    assert mk.ok
    assert mk.c_dims()[2] == 5          # C^2 = H^2
    assert mk.c_dims()[4] == 1          # C^4 is the extra line
    for e in mk.entries:
        assert e.direct_sum_ok and e.step_v_ok and e.g0_stable
    assert mk.generation_ok

    mk_sh = markman_decompose(sh52, llv_sh52.g)
    assert mk_sh.ok
    assert all(mk_sh.c_dims()[2 * i] == 0 for i in range(2, 5))
    _ok(5, "augmented: C^2 dim 5, C^4 dim 1, direct sum, step (v) and "
           "generation verified; SH: C^{2i} = 0 for i >= 2")


def test_criterion_06_representation_checks(llv_k3_full, k3_full,
                                            llv_sh52, sh52,
                                            llv_aug521, aug521,
                                            llv_aug522, aug522):
    analysis_k3, _ = llv_k3_full
    com = commutant(list(analysis_k3.g.basis), full_subspace(k3_full))
    assert len(com) == 1

    schur_count = 0
    cparts_checked = 0
    for alg, res in ((k3_full, analysis_k3), (sh52, llv_sh52),
                     (aug521, llv_aug521), (aug522, llv_aug522)):
        act = SoHAction(alg, res.soh.subalgebra)
        mk = markman_decompose(alg, res.g)
        for i in sorted(mk.c_parts):
            part = mk.c_parts[i]
            if part.dim_at(2 * i) == 0:
                continue
            rep = isotypic_decompose(alg, act, part)
            assert rep.schur_ok
            schur_count += 1
            want = not (alg is aug522 and i == 2)
            assert check_markman_c(rep) is want
            cparts_checked += 1

    # negative control: the middle degree of SH as a fake C part
    act = SoHAction(sh52, llv_sh52.soh.subalgebra)
    from llv_lab.decomposition import GradedSubspace
    h4 = GradedSubspace(sh52.degree_dims)
    for i in range(15):
        v = [0] * 15
        v[i] = 1
        h4.add(4, v)
    rep = isotypic_decompose(sh52, act, h4)
    assert not check_markman_c(rep)
    assert any(c.kind == "other" and c.dim == 14 for c in rep.constituents)
    assert rep.schur_ok
    _ok(6, f"commutant on H*(K3) has dim 1; Schur identity on "
           f"{schur_count} C-parts; markman-c true on {cparts_checked - 1} "
           "fixture C-parts and false on the Sym^2 control")


def test_criterion_07_weil_membership(llv_k3_full, k3_full, llv_sh52, sh52,
                                      llv_aug521, aug521):
    analysis_k3, _ = llv_k3_full
    total = 0
    for alg, res in ((k3_full, analysis_k3), (sh52, llv_sh52),
                     (aug521, llv_aug521)):
        act = SoHAction(alg, res.soh.subalgebra)
        periods = find_periods(alg, 3)
        assert len(periods) >= 3
        for p in periods:
            wd = verify_weil_membership(alg, act, p)
            assert wd.membership_ok and wd.degree2_exact
            assert wd.derivation_ok and wd.spectra_ok
            hn = hodge_numbers(wd, 2)
            assert hn == [(2, 0, 1), (1, 1, alg.b2 - 2), (0, 2, 1)]
            for d in alg.degrees():
                table = dict(wd.eigen_table[d])
                assert all(table.get(-e, 0) == m for e, m in table.items())
                assert sum(table.values()) == alg.dim(d)
            total += 1
    _ok(7, f"{total} rational periods across 3 fixtures: exact membership, "
           "derivation property, H^2 numbers (1, b2-2, 1), h^{p,q} symmetric")


def test_criterion_08_pi2_mechanism(llv_k3_full, k3_full, llv_sh52, sh52,
                                    llv_aug521, aug521, llv_k3_b5, k3_b5):
    for alg, res in ((k3_full, llv_k3_full[0]), (sh52, llv_sh52),
                     (aug521, llv_aug521), (k3_b5, llv_k3_b5)):
        act = SoHAction(alg, res.soh.subalgebra)
        datas = [verify_weil_membership(alg, act, p)
                 for p in find_periods(alg, 3)]
        rep = check_pi2_faithful(alg, act, datas)
        assert rep.degree2_rank == rep.soh_dim   # zero kernel
        assert rep.degree2_standard_ok           # standard degree-2 action
        assert rep.weil_span_degree2_rank == rep.weil_span_dim
    _ok(8, "rho+ kernel zero and standard degree-2 action on 4 fixtures, "
           "Weil spans stay injective under the degree-2 restriction")


def test_criterion_09_finiteness_certificates(llv_aug521, aug521,
                                              llv_sh52, sh52,
                                              llv_aug522, aug522):
    om = find_omega_auto(aug521)
    cert = certify(aug521, llv_aug521.g, om)
    assert cert.certified and cert.bound == "(Z/2)^1"
    assert all(c.phi_omega_nondegenerate for c in cert.components)

    om = find_omega_auto(sh52)
    cert_sh = certify(sh52, llv_sh52.g, om)
    assert cert_sh.certified and cert_sh.n_factors == 0

    om = find_omega_auto(aug522)
    cert2 = certify(aug522, llv_aug522.g, om)
    assert cert2.status == "failed"
    assert "multiplicity" in cert2.reason
    assert any(c.multiplicity == 2 for c in cert2.components)
    _ok(9, "augmented t=1 certified with bound Z/2, SH certified trivially, "
           "t=2 fails with a multiplicity-2 witness, phi_omega exact")


def test_criterion_10_infrastructure(sh52, aug521, tmp_path):
    # byte-stable round trips
    for alg in (sh52, aug521):
        text = dumps_algebra(alg)
        assert canonicalize(text) == text
        assert loads_algebra(text) == alg

    # pipeline determinism through the real CLI
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["pipeline", "--build", "augmented", "--b2", "5", "--n", "2",
            "--t", "1"]
    assert cli_main(args + ["--report", str(a)]) == 0
    assert cli_main(args + ["--report", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()

    # injected faults are caught with located witnesses
    products = dict(sh52.products)
    key = next(k for k in products if k[0] == 2 and k[2] == 2)
    vec = list(products[key])
    vec[0] += 1
    products[key] = tuple(vec)
    bad = GradedAlgebra.create(sh52.half_dim, sh52.degree_dims, sh52.labels,
                               products, sh52.bb_form)
    rep = validate(bad)
    assert not rep.ok
    assert any(f.kind == "associativity" and "ia" in f.witness
               for f in rep.failures)

    obj = algebra_to_json_dict(sh52)
    obj["products"] = [p for p in obj["products"]
                       if not (p["da"] == 4 and p["db"] == 4)]
    try:
        loads_algebra(json.dumps(obj))
        assert False, "truncated products must be rejected"
    except Exception as exc:
        assert "frobenius" in str(exc) or "associativity" in str(exc)
    _ok(10, "round trips byte-stable, pipeline byte-deterministic, "
            "injected faults caught with witnesses")
