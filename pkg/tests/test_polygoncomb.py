import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bendmirror.errors import DiagonalNotInTriangulation, InvalidTriangulation, ValidationError
from bendmirror.polygoncomb import (
    Triangulation,
    brute_force_triangulations,
    catalan,
    caterpillar_triangulation,
    crosses,
    enumerate_triangulations,
    flip,
    flip_graph,
    flip_path_to_diagonal,
    parse_diagonal,
    quadrilateral,
)


@pytest.mark.parametrize("n", range(1, 7))
def test_counts_are_catalan(n):
    assert len(enumerate_triangulations(n)) == catalan(n + 1)


@pytest.mark.parametrize("n", range(1, 5))
def test_enumeration_matches_brute_force(n):
    assert enumerate_triangulations(n) == brute_force_triangulations(n)


@pytest.mark.parametrize("n", range(1, 5))
def test_flip_graph_is_regular_and_connected(n):
    g = flip_graph(n)
    assert nx.is_connected(g)
    assert {d for _, d in g.degree()} == {n}


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.sampled_from(enumerate_triangulations(n)), st.integers(0, n - 1))))
def test_flip_is_an_involution(data):
    t, k = data
    d = t.diagonals[k]
    t2, new = flip(t, d)
    assert new not in t and new in t2
    assert crosses(d, new)
    back, old = flip(t2, new)
    assert back == t and old == d


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.sampled_from(enumerate_triangulations(n)), st.integers(0, n - 1))))
def test_quadrilateral_contains_both_diagonals(data):
    t, k = data
    d = t.diagonals[k]
    a, b, c, e = quadrilateral(t, d)
    assert a < b < c < e
    assert set(d) in ({a, c}, {b, e})


def test_caterpillar_and_parsing():
    t = caterpillar_triangulation(3)
    assert t.key() == "1-3,1-4,1-5"
    assert Triangulation.parse(3, "1-5, 1-3,1-4") == t
    assert parse_diagonal("4-2") == (2, 4)


def test_invalid_inputs():
    with pytest.raises(InvalidTriangulation):
        Triangulation(2, ((1, 3), (2, 4)))
    with pytest.raises(ValidationError):
        parse_diagonal("13")
    with pytest.raises(DiagonalNotInTriangulation):
        flip(caterpillar_triangulation(2), (2, 4))


def test_flip_path_reaches_target():
    t = caterpillar_triangulation(4)
    path = flip_path_to_diagonal(t, (3, 6))
    for removed, added in path:
        t, new = flip(t, removed)
        assert new == added
    assert (3, 6) in t
