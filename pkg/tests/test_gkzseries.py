import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from e36 import gkzseries as g
from e36.exactcore import lattice
from e36.exactcore.gauge import PHI_A, in_L

nat = st.integers(0, 5)


@pytest.fixture(scope="module")
def rs6():
    return g.residue_series(6)


@given(nat, nat, nat, st.integers(-3, 3))
def test_c5_symmetric_in_first_three(n, m, k, l):
    v = g.coeff_c5(n, m, k, l)
    assert all(g.coeff_c5(*p, l) == v for p in permutations((n, m, k)))


@given(nat, nat, nat, nat)
def test_c4_symmetric_in_first_three(a, b, c, d):
    v = g.coeff_c4(a, b, c, d)
    assert all(g.coeff_c4(*p, d) == v for p in permutations((a, b, c)))


def test_spot_values():
    assert g.coeff_c4(1, 1, 1, 1) == Fraction(1, 8)
    assert g.coeff_c4(1, 1, 0, 1) == Fraction(1, 4)
    assert g.coeff_c4(1, 0, 0, 0) == 0
    assert g.coeff_c5(1, 1, 1, -1) == Fraction(1, 8)
    assert g.coeff_c5(0, 0, 0, 0) == 1
    with pytest.raises(ValueError):
        g.coeff_c4(-1, 0, 0, 0)


@given(nat, nat, nat, nat)
def test_sublattice_exponents_have_degree_beta(a, b, c, d):
    e = g.chart_basis("s11").exponent((a, b, c, d))
    assert in_L(e)
    shifted = [x + o for x, o in zip(e, g.OFFSET)]
    assert tuple(lattice.matvec(PHI_A, shifted)) == g.BETA


def test_residue_series_agrees_with_closed_form(rs6):
    assert g.agreement_check(6, rs6).passed
    assert g.sublattice_check(6, rs6).passed


def test_homogeneity_and_known_boxes(rs6):
    assert g.homogeneity_check(rs6.nine).passed
    for ell in g.ELL_S11:
        assert g.box_recurrence_check(ell, rs6.nine).passed


def test_literal_box_fails_for_odd_character(rs6):
    # the printed operator on the signed variables needs the sign character
    ell = g.ELL_S11[0]
    assert not g.box_recurrence_check(ell, rs6.nine, signs=None).passed
    assert g.box_recurrence_check(g.ELL_S11[3], rs6.nine, signs=None).passed


def test_corrupted_series_is_caught(rs6):
    terms = dict(rs6.nine.terms)
    e = g.chart_basis("s11").exponent((1, 1, 1, 1))
    terms[e] += 1
    bad = type(rs6.nine)(rs6.nine.variables, terms, rs6.nine.truncation, rs6.nine.degree, rs6.nine.offset)
    assert not all(g.box_recurrence_check(ell, bad).passed for ell in g.ELL_S11)


def test_random_lattice_elements_are_in_L():
    els = g.random_lattice_elements(10, random.Random(2))
    assert len(els) == 10 and all(in_L(e) and any(e) for e in els)


def test_budget_guard():
    with pytest.raises(MemoryError):
        g.residue_expansion(8, budget=10)


def test_chart_series_are_renamings():
    assert g.chart_agreement_check(4).passed
