import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from e36 import moduli as m

seeds = st.integers(0, 10 ** 6)


def matrix(seed, generic=True):
    return m.random_matrix(random.Random(seed), bound=9, generic=generic)


@given(seeds)
def test_igusa_and_pluecker(seed):
    Y = m.y_invariants(matrix(seed, generic=False))
    assert Y[5] ** 2 == m.F4(Y)
    assert not any(m.pluecker_relations(Y))


@given(seeds)
def test_x_relation_and_compatibility(seed):
    A = matrix(seed)
    X = m.x_invariants(m.dual_config(A))
    assert m.m33_relation(X) == 0
    if any(m.phi_raw(X)):
        assert m.phi(X) == m.weighted_point(m.y_invariants(A))


@given(seeds, st.fractions(min_value=-5, max_value=5).filter(bool))
def test_weighted_projective_equivalence(seed, t):
    Y = m.y_invariants(matrix(seed))[:6]
    scaled = [t * y for y in Y[:5]] + [t * t * Y[5]]
    assert m.WeightedProjectivePoint(Y) == m.WeightedProjectivePoint(scaled)
    if t != 1 and t != -1 and any(Y[:5]):
        wrong = [t * y for y in Y]
        assert m.WeightedProjectivePoint(Y) != m.WeightedProjectivePoint(wrong) or Y[5] == 0


@given(seeds)
def test_bracket_changes_sign_under_column_swap(seed):
    A = matrix(seed)
    swapped = m.s6_apply(m.PermutationSigma.transposition(1, 2), A)
    assert m.bracket(swapped, 1, 2, 3) == -m.bracket(A, 1, 2, 3)


@given(seeds)
def test_phi_roundtrip(seed):
    X = m.x_invariants(m.dual_config(matrix(seed)))
    Y = m.phi_raw(X)
    if Y[0] != 0 and any(Y):
        assert m.phi_inv(m.phi(X)) == m.ProjectivePoint6(X)


def test_loci_errors():
    with pytest.raises(ValueError):
        m.phi([1] * 6)
    with pytest.raises(ValueError):
        m.phi_inv([0, 1, 2, 3, 4, 5])
    with pytest.raises(ValueError):
        m.WeightedProjectivePoint([0] * 6)


def test_permutation_group():
    s = m.PermutationSigma.transposition(2, 5)
    assert s * s == m.PermutationSigma.identity()
    t = m.PermutationSigma((2, 3, 1, 4, 5, 6))
    assert t * t.inverse() == m.PermutationSigma.identity()


def test_suites_small():
    for name, fn in m.SUITES.items():
        assert fn(20, 7).passed, name


@given(st.fractions(max_denominator=7), st.fractions(max_denominator=7))
def test_lines_are_on_the_quartic(s, t):
    for L in m.load_lines():
        a, b = L.parametrization()
        P = [s * x + t * y for x, y in zip(a, b)]
        assert L.contains(P)
        assert m.F4(P) == 0
