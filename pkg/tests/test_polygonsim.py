import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bendmirror import polygonsim as S
from bendmirror.errors import DegenerateAtBoundary, NotInPolytope, TriangleInequalityViolated
from bendmirror.polygoncomb import caterpillar_triangulation, enumerate_triangulations
from bendmirror.polytopes import LengthTuple

cases = st.integers(1, 5).flatmap(
    lambda n: st.tuples(st.sampled_from(enumerate_triangulations(n)), st.integers(0, 2**31))
)


@given(cases, st.floats(0, 2 * math.pi), st.data())
def test_bending_conserves_structure(case, theta, data):
    t, seed = case
    r = LengthTuple.equilateral(t.n)
    c = S.random_config(r, t, np.random.default_rng(seed))
    d = data.draw(st.sampled_from(t.diagonals))
    b = S.bend(c, d, theta)
    assert b.closure_residual() < 1e-9 and b.length_residual() < 1e-9
    for e in S.noncrossing_diagonals(d, t.n):
        assert abs(S.diagonal_length(b, e) - S.diagonal_length(c, e)) < 1e-9


@given(cases)
def test_reconstruction_roundtrip(case):
    t, seed = case
    r = LengthTuple.equilateral(t.n)
    c = S.random_config(r, t, np.random.default_rng(seed))
    lengths = S.measured_lengths(c, t)
    angles = S.dihedral_angles(c, t)
    c2 = S.reconstruct_polygon(r, t, lengths, angles)
    for d in t.diagonals:
        assert abs(S.diagonal_length(c2, d) - lengths[d]) < 1e-9
        delta = (S.dihedral_angles(c2, t)[d] - angles[d] + math.pi) % (2 * math.pi) - math.pi
        assert abs(delta) < 1e-7


@given(st.integers(0, 2**31))
def test_bending_shifts_its_own_angle(seed):
    r = LengthTuple.equilateral(2)
    t = caterpillar_triangulation(2)
    c = S.random_config(r, t, np.random.default_rng(seed))
    before = S.dihedral_angles(c, t)[(1, 3)]
    after = S.dihedral_angles(S.bend(c, (1, 3), 0.7), t)[(1, 3)]
    assert abs(((after - before - 0.7) + math.pi) % (2 * math.pi) - math.pi) < 1e-8


def test_commuting_and_crossing_flows():
    r = LengthTuple.equilateral(2)
    c = S.random_config(r, caterpillar_triangulation(2), np.random.default_rng(0))
    assert S.check_commuting(c, (1, 3), (1, 4), 0.4, 1.1) < 1e-9
    assert S.check_commuting(c, (1, 3), (2, 4), 0.4, 1.1) > 1e-3


def test_violations():
    r = LengthTuple.equilateral(2)
    t = caterpillar_triangulation(2)
    with pytest.raises(TriangleInequalityViolated):
        S.reconstruct_polygon(r, t, {(1, 3): 3.0, (1, 4): 1.0})
    with pytest.raises(DegenerateAtBoundary):
        S.reconstruct_polygon(r, t, {(1, 3): 2.0, (1, 4): 1.0}, {(1, 3): 0.0, (1, 4): 0.0})
    c = S.reconstruct_polygon(r, t, {(1, 3): 2.0, (1, 4): 1.0}, allow_boundary=True)
    assert c.closure_residual() < 1e-9
    with pytest.raises(NotInPolytope):
        S.fiber_topology(r, t, {(1, 3): 3, (1, 4): 1})


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_interior_fiber_is_a_torus(n):
    r = LengthTuple.equilateral(n)
    lengths = S.caterpillar_lengths_from_u(r, list(range(1, n + 1)))
    ft = S.fiber_topology(r, caterpillar_triangulation(n), lengths)
    assert (ft.m1, ft.m2, ft.m3) == (n, 0, 0)


def test_special_fibers():
    r2 = LengthTuple.equilateral(2)
    t2 = caterpillar_triangulation(2)
    ft = S.fiber_topology(r2, t2, S.caterpillar_lengths_from_u(r2, [2, 2]))
    assert ft.describe() == "S2"
    r3 = LengthTuple.equilateral(3)
    ft = S.fiber_topology(r3, caterpillar_triangulation(3), S.caterpillar_lengths_from_u(r3, [1, 3, 3]))
    assert ft.describe() == "SO3"


def test_degenerate_eleven_gon():
    from bendmirror.acceptance import eleven_gon_fiber

    ft = eleven_gon_fiber()
    assert (ft.m1, ft.m2, ft.m3) == (3, 1, 1)
    assert ft.to_json()["type"] == "(S1)^3 x S2 x SO3"


def test_gauge_fix_puts_diagonal_on_axis():
    r = LengthTuple.equilateral(3)
    c = S.random_config(r, caterpillar_triangulation(3), np.random.default_rng(5))
    g = S.gauge_fix(c, (1, 3))
    v = S.diagonal_vector(g, (1, 3))
    assert np.allclose(v[1:], 0) and v[0] > 0
