import pytest

from e36 import blowup as b


def test_equation_sets_keep_their_text():
    ts = b.equation_set("transform").texts()
    assert len(ts) == 9 and ts[0] == "W1 W2 = U V z"
    assert len(b.equation_set("transform_c5").texts()) == 6


@pytest.mark.parametrize("name", sorted(b.SUITES))
def test_suite(name):
    assert b.SUITES[name]().passed


def test_fault_injection():
    eqs = b.equation_set("transform") + b.equation_set("transform_c5")
    assert b.verify_on_parametrization(eqs, b.graph_chart()).passed
    for i in (0, 4, 11):
        assert not b.verify_on_parametrization(b.perturbed(eqs, i), b.graph_chart()).passed


def test_minors():
    assert len(b.hypermatrix_minors()) == 12
