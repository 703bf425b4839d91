from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bendmirror import diskclasses as D
from bendmirror.errors import OddN


@pytest.mark.parametrize("n", range(2, 7))
def test_rank(n):
    assert D.h2_rank(n) == 2 * n + 1


def test_delta_example():
    q = D.build_ladder_quiver(5)
    c = D.make_class(q, {(2, 0): Fraction(1, 2), (2, 1): Fraction(1, 2), (2, 2): 3})
    assert D.delta_vector(c, q) == (0, -4, 3, 0, 0)


def test_quiver_counts():
    q = D.build_ladder_quiver(2)
    assert len(q.labels) == 9
    assert len(q.facet_arrows) == 5


@given(st.integers(3, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(2, n - 1))))
def test_square_relation_is_in_the_kernel(data):
    n, i = data
    q = D.build_ladder_quiver(n)
    c = D.make_class(q, D.relation(i))
    assert all(x == 0 for x in D.delta_vector(c, q))
    assert c.area == 0 and c.maslov == 0


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(
    st.just(n),
    st.dictionaries(st.sampled_from(D.arrow_labels(n)), st.integers(-3, 3), max_size=5))))
def test_normal_form_preserves_boundary(data):
    n, coeffs = data
    q = D.build_ladder_quiver(n)
    c = D.make_class(q, coeffs)
    nf = D.normal_form(c, q)
    assert nf.boundary == c.boundary
    assert D.normal_form(nf, q).coeffs == nf.coeffs


@pytest.mark.parametrize("n", [2, 4])
def test_classification_matches_hand_oracle(n):
    got = {(c.coeffs, c.sphere_family) for c in D.classify_effective(n)}
    want = {(tuple(sorted(d.items())), s) for d, s in D.expected_family(n)}
    assert got == want


def test_classification_local_models():
    classes = D.classify_effective(4)
    models = sorted(c.local_model for c in classes if c.local_model)
    assert models == ["S2", "S2", "SO3", "SO3"]
    assert all(c.maslov == 2 and c.area == 1 for c in classes)


def test_odd_n_rejected():
    with pytest.raises(OddN):
        D.classify_effective(3)
