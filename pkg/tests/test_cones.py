import random

from hypothesis import given
from hypothesis import strategies as st

from e36 import datasets
from e36.cones import (Cone, audit_subdivision, decompositions_without_extra_rays, dual_cone,
                       is_gorenstein, lattice_isomorphic, triangulate_cone_with_rays)
from e36.exactcore import lattice
from e36.exactcore.gauge import PHI_A

D = datasets.cones()
RHO = [tuple(r) for r in D["rho"]]


def test_duals_of_the_recorded_cones():
    assert set(dual_cone(Cone(D["C_NE_pi4"])).rays) == set(RHO)
    assert set(dual_cone(Cone(D["C0_pi4"])).rays) == {tuple(m) for m in D["mu"]}


def test_double_dual():
    C = Cone(D["C_NE_pi4"])
    assert set(dual_cone(dual_cone(C)).rays) == set(C.rays)


def test_gorenstein():
    assert is_gorenstein(Cone(lattice.transpose(PHI_A))) == (1, 1, 1, 0, 0)
    assert is_gorenstein(dual_cone(Cone(D["C0_pi4"]))) is not None
    assert is_gorenstein(Cone(RHO)) is None


def test_two_decompositions_both_smooth():
    decs = decompositions_without_extra_rays(Cone(RHO))
    assert len(decs) == 2
    assert sorted(len(S.maximal_cones) for S in decs) == [2, 3]
    assert all(S.is_smooth() for S in decs)
    rng = random.Random(3)
    for S in decs:
        assert audit_subdivision(S, 40, rng)["ok"]


def test_square_cone_has_two_subdivisions():
    C = Cone([(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)])
    assert len(triangulate_cone_with_rays(C, C.rays, "all")) == 2
    assert not C.is_smooth()


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_unimodular_images_are_isomorphic(g):
    if abs(lattice.det(g)) != 1:
        return
    C = Cone([(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)])
    image = Cone([tuple(lattice.matvec(g, r)) for r in C.rays])
    w = lattice_isomorphic(C, image)
    assert w is not None and abs(lattice.det(w)) == 1
    assert {tuple(lattice.matvec(w, r)) for r in C.rays} == set(image.rays)


def test_non_isomorphic_cones():
    smooth = Cone([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    fat = Cone([(1, 0, 0), (0, 1, 0), (1, 1, 2)])
    assert lattice_isomorphic(smooth, fat) is None
