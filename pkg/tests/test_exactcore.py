from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from e36.exactcore import lattice, lp
from e36.exactcore.gauge import L_basis, PHI_A, in_L, pi4, pi4_inv
from e36.exactcore.rational import (HALF, half_int_vector, is_half_integral, q, rational_from_json,
                                    rational_to_json, rising)
from e36.exactcore.series import LaurentSeries, Poly, parse_poly

small = st.integers(-6, 6)
matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))
fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def test_rational_helpers():
    assert q("3/4") == Fraction(3, 4)
    assert rational_from_json(rational_to_json(Fraction(-7, 3))) == Fraction(-7, 3)
    assert is_half_integral(Fraction(5, 2)) and not is_half_integral(Fraction(1, 3))
    assert half_int_vector(["-1/2", 0]) == (-HALF, 0)
    assert rising(HALF, 3) == Fraction(3, 2) * Fraction(5, 2) * Fraction(7, 2)
    with pytest.raises(ValueError):
        half_int_vector([Fraction(1, 3)])


@given(matrices)
def test_smith_form_divisibility(M):
    D, U, V = lattice.smith_normal_form(M)
    assert lattice.matmul(lattice.matmul(U, M), V) == D
    assert abs(lattice.det(U)) == 1 and abs(lattice.det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else b % a == 0


@given(matrices)
def test_hermite_form_unique_for_row_lattice(M):
    H, U = lattice.hermite_normal_form(M)
    assert lattice.matmul(U, M) == H
    # shuffling and combining rows keeps the lattice, hence the form
    M2 = [list(r) for r in reversed(M)]
    if len(M2) > 1:
        M2[0] = [a + 3 * b for a, b in zip(M2[0], M2[1])]
    assert lattice.hermite_normal_form(M2)[0] == H


@given(matrices)
def test_kernel_lattice(M):
    K = lattice.kernel_lattice(M)
    assert len(K) == len(M[0]) - lattice.rank(M)
    for v in K:
        assert all(x == 0 for x in lattice.matvec(M, v))
    if K:
        assert lattice.smith_invariants(K) == [1] * len(K)     # saturated


def test_relation_lattice_and_pi4():
    B = L_basis()
    assert len(B) == 4 and all(in_L(b) for b in B)
    for b in B:
        assert pi4_inv(pi4(b)) == tuple(b)
    assert lattice.rank(PHI_A) == 5


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4),
       st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_lp_feasibility_exact(G, x0):
    b = lattice.matvec(G, x0)
    x = lp.feasible_nonneg(G, b)
    assert x is not None and all(v >= 0 for v in x)
    assert lattice.matvec(G, x) == b


def test_lp_infeasible():
    assert lp.feasible_nonneg([[1, 1]], [-1]) is None
    assert lp.strict_feasible([[1, 0], [-1, 0]]) is None
    x = lp.strict_feasible([[1, 2], [3, -1]])
    assert all(lattice.dot(r, x) > 0 for r in ([1, 2], [3, -1]))


polys = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), fracs, max_size=4).map(
    lambda d: Poly(("x", "y"), d))


@given(polys, polys, polys)
def test_poly_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == Poly(("x", "y"))


@given(polys)
def test_poly_string_roundtrip(p):
    assert parse_poly(p.to_string(), ("x", "y")) == p


@given(polys, fracs, fracs)
def test_poly_evaluation_is_a_homomorphism(p, u, v):
    pt = {"x": u, "y": v}
    assert (p * p + p).evaluate(pt) == p.evaluate(pt) ** 2 + p.evaluate(pt)


def test_laurent_truncation_and_json():
    s = LaurentSeries(("x", "y"), {(0, 0): 1, (1, 0): 2, (3, 3): 5}, 2)
    assert (3, 3) not in s.terms
    t = s * s
    assert t.coefficient((2, 0)) == 4 and t.truncation == 2
    assert LaurentSeries.from_json(s.to_json()) == s


@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), fracs, max_size=5),
       st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), fracs, max_size=5))
def test_laurent_product_matches_truncated_poly_product(d1, d2):
    s1, s2 = LaurentSeries(("x", "y"), d1, 3), LaurentSeries(("x", "y"), d2, 3)
    full = Poly(("x", "y"), s1.terms) * Poly(("x", "y"), s2.terms)
    expect = {e: c for e, c in full.terms.items() if sum(e) <= 3}
    assert (s1 * s2).terms == expect
