from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bendmirror import polytopes as P
from bendmirror.errors import InvalidLengthTuple
from bendmirror.polygoncomb import caterpillar_triangulation, enumerate_triangulations


def test_length_tuple_parsing():
    r = P.LengthTuple.parse("1,1/2,3,3,3")
    assert r.n == 2 and r[2] == Fraction(1, 2) and r.total == Fraction(21, 2)
    with pytest.raises(InvalidLengthTuple):
        P.LengthTuple.parse("1,-1,1,1,1")
    with pytest.raises(InvalidLengthTuple):
        P.LengthTuple.parse("1,1,1")


def test_genericity():
    assert P.is_generic(P.LengthTuple.equilateral(2))
    assert not P.is_generic(P.LengthTuple.parse("1,1,1,1,2"))
    assert not P.is_generic(P.LengthTuple.equilateral(3))
    assert P.is_generic(P.LengthTuple.parse("1,1,3,3,3"))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_equilateral_non_facets(n):
    sys = P.caterpillar_system(P.LengthTuple.equilateral(n))
    non = sorted(f.label for f in sys.functionals if P.face_codim(sys, f) != 1)
    assert non == sorted(P.equilateral_non_facet_labels(n))
    assert all(P.face_codim(sys, l) == 2 for l in non)


def test_center_is_common_level():
    for n in (2, 3, 4):
        r = P.LengthTuple.equilateral(n)
        sys = P.caterpillar_system(r)
        center = P.monotone_center(sys, r)
        assert tuple(center) == tuple(Fraction(j) for j in range(1, n + 1))
        values = {f(center) for f in P.facets(sys)}
        assert values == {1}


@settings(max_examples=25)
@given(st.integers(1, 3).flatmap(lambda n: st.sampled_from(enumerate_triangulations(n))))
def test_bending_polytopes_have_full_dimension(t):
    sys = P.bending_polytope(t, P.LengthTuple.equilateral(t.n))
    assert sys.dim == t.n
    assert sys.is_feasible()
    assert len(P.facets(sys)) >= t.n + 1


def test_caterpillar_bending_polytope_agrees_with_shift():
    r = P.LengthTuple.parse("2,1,3,2,3,2")
    t = caterpillar_triangulation(r.n)
    bend = P.bending_polytope(t, r)
    cat = P.caterpillar_system(r)
    to_u, to_lengths = P.caterpillar_shift(r)
    for v in P.vertices(cat):
        assert bend.contains(to_lengths(v))
        assert tuple(to_u(to_lengths(v))) == tuple(v)
    assert len(P.vertices(bend)) == len(P.vertices(cat))


def test_gz_polytope_is_feasible_and_labelled():
    sys = P.gz_polytope(2, 5)
    assert sys.is_feasible()
    assert all(isinstance(l, tuple) and l[0] == "k" for l in sys.labels)


def test_json_rows_use_rational_strings():
    js = P.caterpillar_system(P.LengthTuple.equilateral(2)).to_json()
    assert js["dim"] == 2
    row = js["rows"][0]
    assert row["label"].startswith("l_") and "/" in row["const"]
