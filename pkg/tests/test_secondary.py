from hypothesis import given
from hypothesis import strategies as st

from e36.secondary import PointConfiguration, Triangulation


def square():
    return PointConfiguration([(1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1)])


def test_square():
    pc = square()
    census = pc.enumerate_regular()
    assert len(census.regular) == 2 and not census.nonregular
    assert {pc.gkz_vector(T) for T in census.triangulations} == {(2, 1, 1, 2), (1, 2, 2, 1)}


def test_pentagon_has_five_triangulations():
    pts = [(1, 0, 0), (1, 2, 0), (1, 3, 2), (1, 1, 3), (1, -1, 2)]
    pc = PointConfiguration(pts)
    assert len(pc.enumerate_regular().regular) == 5


def test_triangulation_json_roundtrip():
    T = square().placing_triangulation()
    assert Triangulation.from_json(T.to_json()) == T
    assert PointConfiguration.from_json(square().to_json()).points == square().points


@given(st.sets(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=4, max_size=6))
def test_flip_search_matches_brute_force(pts):
    pc = PointConfiguration([(1,) + p for p in sorted(pts)])
    if pc.rank < 3:
        return
    reg = pc.enumerate_regular()
    brute = set(pc.brute_force_triangulations())
    assert set(reg.regular) <= brute
    assert set(pc.enumerate_all()) <= brute
    for T in reg.triangulations:
        assert pc.is_triangulation(T)
        assert pc.verify_lift(T, reg.regular[T])
        assert sum(pc.gkz_vector(T)) == (pc.rank) * sum(pc.normalized_volume(c) for c in T.cells)
    assert reg.flip_graph_connected() and reg.flip_graph_symmetric()
