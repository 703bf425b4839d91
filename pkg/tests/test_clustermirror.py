import pytest
from hypothesis import given
from hypothesis import strategies as st

from bendmirror import clustermirror as cm
from bendmirror.errors import ValidationError
from bendmirror.exactalg import LaurentPoly
from bendmirror.polygoncomb import all_diagonals, enumerate_triangulations, flip_path_to_diagonal
from bendmirror.potentials import caterpillar_potential
from bendmirror.reference import reference


def charts(max_n=4):
    return st.integers(1, max_n).flatmap(lambda n: st.sampled_from(enumerate_triangulations(n)))


@given(charts(), st.data())
def test_every_plucker_coordinate_is_laurent(t, data):
    chart = cm.ClusterChart(t)
    i, j = data.draw(st.sampled_from(all_diagonals(t.n)))
    p = cm.plucker_in_chart((i, j), chart)
    assert isinstance(p, LaurentPoly) and not p.is_zero()
    # coefficients of cluster monomials are positive integers
    assert all(c > 0 and c.denominator == 1 for _, c in p.items())


@given(charts(3), st.data())
def test_plucker_relation_holds_in_any_chart(t, data):
    chart = cm.ClusterChart(t, cm.KEEP_SYMBOLIC)
    a, b, c, d = sorted(data.draw(st.sets(st.integers(1, t.n + 3), min_size=4, max_size=4)))
    p = lambda i, j: cm.plucker_in_chart((i, j), chart)  # noqa: E731
    assert p(a, c) * p(b, d) == p(a, b) * p(c, d) + p(a, d) * p(b, c)


@given(charts(4), st.data())
def test_mutation_matches_direct_computation(t, data):
    chart = cm.ClusterChart(t)
    d = data.draw(st.sampled_from(t.diagonals))
    w = cm.w_bend_in_chart(chart)
    assert cm.mutate_potential(w, chart, d) == cm.w_bend_in_chart(chart.flipped(d))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_caterpillar_chart_gives_closed_formula(n):
    w = cm.w_bend_in_chart(cm.caterpillar_chart(n)).rename(cm.caterpillar_renaming(n))
    assert w == caterpillar_potential(n)


def test_heptagon_references():
    chart = cm.caterpillar_chart(4)
    w = cm.w_bend_in_chart(chart)
    assert w == reference("HEPTAGON_CATERPILLAR")
    assert cm.mutate_potential(w, chart, (1, 5)) == reference("HEPTAGON_FLIPPED")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_symbolic_frozen_specialises(n):
    chart = cm.caterpillar_chart(n, cm.KEEP_SYMBOLIC)
    w = cm.w_mr(chart)
    frozen = [v for v in w.variables if v not in cm.caterpillar_chart(n).variables]
    assert len(w.variables) == 2 * n + 2
    ones = {v: 1 for v in frozen}
    from bendmirror.exactalg import LaurentFraction, substitute
    from fractions import Fraction

    special = substitute(w, {v: LaurentFraction(Fraction(1)) for v in ones})
    assert special.with_variables(chart.with_policy(cm.SET_TO_ONE).variables) == cm.w_bend_in_chart(
        chart.with_policy(cm.SET_TO_ONE)
    )


def test_transport_along_a_path():
    chart = cm.caterpillar_chart(3)
    path = [rem for rem, _ in flip_path_to_diagonal(chart.triangulation, (2, 6))]
    w, final = cm.transport(cm.w_bend_in_chart(chart), chart, path)
    assert (2, 6) in final.triangulation
    assert w == cm.w_bend_in_chart(final)


def test_policy_validation():
    with pytest.raises(ValidationError):
        cm.chart_from_spec(2, "caterpillar", "frozen_to_two")
    with pytest.raises(ValidationError):
        cm.w_bend_in_chart(cm.caterpillar_chart(2, cm.KEEP_SYMBOLIC))
