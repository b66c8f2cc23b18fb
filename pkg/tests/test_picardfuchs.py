import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from e36 import gkzseries as g
from e36 import picardfuchs as pf
from e36.exactcore.series import Poly
from e36.picardfuchs import ThetaOperator


@pytest.fixture(scope="module")
def omega():
    return g.omega0_series(g.chart_basis("s11"), 8)


@pytest.fixture(scope="module")
def catalog(omega):
    infos = []
    ops = pf.generate_catalog(omega, infos=infos)
    return ops, infos


def test_catalog_reproduced(catalog):
    ops, infos = catalog
    printed = [op for _, op in pf.recorded_catalog()]
    assert ops == printed
    assert [i["z_term_sign"] for i in infos] == [-1] * 6 + [1] * 3
    assert all(i["z_term_sign"] == i["character"] for i in infos)


def test_annihilation(catalog, omega):
    assert pf.verify_annihilation(catalog[0], omega, 4).passed


def test_witness_coefficient(catalog, omega):
    D1 = catalog[0][0]
    img, _ = pf.apply(D1, omega)
    assert img.coefficient((1, 1, 1, 1)) == 0
    flipped = ThetaOperator({k: (-p if any(k) else p) for k, p in D1.terms.items()})
    bad, _ = pf.apply(flipped, omega)
    assert bad.coefficient((1, 1, 1, 1)) == Fraction(1, 4)


def test_theta_degree_is_size_of_positive_part(catalog):
    ops, infos = catalog
    for op, info in zip(ops, infos):
        assert op.theta_degree() == sum(max(x, 0) for x in info["ell"])


def test_operator_json_roundtrip(catalog):
    for op in catalog[0]:
        assert ThetaOperator.from_json(op.to_json()) == op


def test_parse_and_compose():
    a = ThetaOperator.from_string("(t1) + z1 (t2)")
    b = ThetaOperator.from_string("(t1)")
    # theta_1 z1 = z1 (theta_1 + 1)
    assert b * a == ThetaOperator.from_string("(t1)(t1) + z1 (t1+1)(t2)")


theta_ops = st.dictionaries(
    st.tuples(*[st.integers(0, 1)] * 4),
    st.tuples(st.tuples(*[st.integers(0, 2)] * 4), st.integers(-3, 3)), max_size=3,
).map(lambda d: ThetaOperator({z: Poly.monomial(pf.THETAS, t, c) for z, (t, c) in d.items()}))


@given(theta_ops, theta_ops, theta_ops)
def test_operator_algebra_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a


def test_uniqueness(catalog):
    cert = pf.uniqueness_check(catalog[0], 4)
    assert cert.passed and cert.witnesses["solution_dimension"] == 1


def test_discriminant():
    assert pf.discriminant_eval([0, 0, 0, 0]) == 0
    assert pf.discriminant_suite(10, 5).passed
    minors = pf.degenerate_minors()
    assert len(minors) == 10
    rng = random.Random(1)
    a = pf.degenerate_sample(minors[0], rng)
    assert pf.discriminant_eval(pf.chart_point(a)) == 0


def test_generate_rejects_bad_input():
    with pytest.raises(ValueError):
        pf.generate_operator((1,) + (0,) * 8)
