from fractions import Fraction

import pytest

from bendmirror import potentials as W
from bendmirror.errors import OddN
from bendmirror.exactalg import parse_laurent
from bendmirror.polytopes import LengthTuple
from bendmirror.reference import pentagon_reference, reference


def test_n2_formula():
    assert W.caterpillar_potential(2) == reference("N2_FORMULA")
    assert len(W.caterpillar_potential(2)) == 7


@pytest.mark.parametrize("n", [2, 4, 6])
def test_equivariant_reduction_of_gz(n):
    assert W.equivariant_reduce(W.gz_potential(n), n) == W.caterpillar_potential(n)


def test_gz_reference_at_n2():
    assert W.gz_potential(2) == reference("N2_GZ")
    assert W.equivariant_reduce(W.gz_potential(2), 2) == reference("N2_GZ_REDUCED")


@pytest.mark.parametrize("n", [3, 5, 0])
def test_odd_n_rejected(n):
    with pytest.raises(OddN):
        W.caterpillar_potential(n)


@pytest.mark.parametrize("n", [2, 4])
def test_classes_reproduce_formula(n):
    assert W.classes_potential(n) == W.caterpillar_potential(n)


def test_symbolic_ansatz_and_assignment():
    from bendmirror.diskclasses import classify_effective

    classes = classify_effective(2)
    counts = {}
    for k, c in enumerate(c for c in classes if c.kind != "basic"):
        counts[c] = W.kappa_var(k + 1)
    w = W.potential_from_classes(classes, counts, W.z_vars(2))
    slots = W.kappa_slot_variables(w)
    assert len(slots) == 2
    assert W.assign_kappas(w, {s: 2 for s in slots}) == W.caterpillar_potential(2)


def test_local_model_references():
    assert W.local_model_potential("S2", 2) == reference("S2_MODEL_KAPPA2")
    assert W.local_model_potential("SO3", 0) == reference("SO3_MODEL_KAPPA0")


def test_transported_family_matches_model():
    fam = W.transported_s2_family((0, 1), (-2, -1), ("y1", "y2"))
    assert fam.at(0) == parse_laurent("y1 + y2 + 1/(y1^2*y2)")
    assert fam.at(2) - fam.at(0) == parse_laurent("2/y1")


@pytest.mark.parametrize("key", sorted(W.PENTAGON_TUPLES))
def test_pentagon_pipeline_reproduces_stored(key):
    res = W.pentagon_pipeline(LengthTuple.parse(key))
    assert res.potential == pentagon_reference()[key]
    assert sorted(W.newton_vertices(res.potential)) == sorted(set(res.basic_exponents))


def test_newton_vertices_drop_interior_points():
    w = parse_laurent("x + 1/x + y + 1/y + 1")
    assert sorted(W.newton_vertices(w)) == [(-1, 0), (0, -1), (0, 1), (1, 0)]


def test_pentagon_lookup_accepts_strings():
    assert W.pentagon_potential("2,2,2,4,4") == pentagon_reference()["2,2,2,4,4"]
    assert W.stored_pentagon_potential("1,1,3,2,2").coefficient({"y1": -1}) == Fraction(2)
