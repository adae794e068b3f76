import pytest

from llv_lab.builders import (build_augmented_model, build_k3,
                              build_verbitsky_component, k3_lattice_form,
                              parse_form_name)
from llv_lab.llv import analyze_llv

Q5 = parse_form_name("U+diag(1,1,1)")


@pytest.fixture(scope="session")
def k3_d11():
    return build_k3(parse_form_name("diag(1,1)"))


@pytest.fixture(scope="session")
def k3_d1m1():
    return build_k3(parse_form_name("diag(1,-1)"))


@pytest.fixture(scope="session")
def k3_b5():
    return build_k3(Q5)


@pytest.fixture(scope="session")
def sh52():
    return build_verbitsky_component(Q5, 2)


@pytest.fixture(scope="session")
def aug521():
    return build_augmented_model(Q5, 2, 1)


@pytest.fixture(scope="session")
def aug522():
    return build_augmented_model(Q5, 2, 2)


@pytest.fixture(scope="session")
def k3_full():
    return build_k3(k3_lattice_form())


@pytest.fixture(scope="session")
def llv_sh52(sh52):
    return analyze_llv(sh52)


@pytest.fixture(scope="session")
def llv_aug521(aug521):
    return analyze_llv(aug521)


@pytest.fixture(scope="session")
def llv_aug522(aug522):
    return analyze_llv(aug522)


@pytest.fixture(scope="session")
def llv_k3_b5(k3_b5):
    return analyze_llv(k3_b5)


@pytest.fixture(scope="session")
def llv_k3_full(k3_full):
    """The b2 = 22 closure, shared across the acceptance criteria. The
    elapsed wall time is captured for the runtime budget check."""
    import time
    t0 = time.monotonic()
    analysis = analyze_llv(k3_full)
    elapsed = time.monotonic() - t0
    return analysis, elapsed
