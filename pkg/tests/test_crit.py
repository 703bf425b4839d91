import cmath

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bendmirror import crit
from bendmirror.errors import EmptyResult, NoConvergence, ValidationError
from bendmirror.exactalg import parse_laurent
from bendmirror.potentials import local_model_family


def test_one_variable_critical_values():
    # z + 1/z has critical points z = +-1 with values +-2
    vals = crit.critical_values(parse_laurent("z + 1/z"))
    assert len(vals) == 2
    assert min(abs(v - 2) for v in vals) < 1e-9 and min(abs(v + 2) for v in vals) < 1e-9


@given(st.integers(1, 6))
def test_scaled_one_variable(k):
    # z + k/z: critical value +-2 sqrt(k)
    vals = crit.critical_values(parse_laurent(f"z + {k}/z"))
    want = 2 * cmath.sqrt(k)
    assert all(min(abs(v - s * want) for s in (1, -1)) < 1e-8 for v in vals)


def test_points_have_small_residual_and_are_sorted():
    w = parse_laurent("x + y + 1/(x*y)")
    pts = crit.critical_points(w)
    assert len(pts) == 3
    assert all(p.residual < 1e-9 for p in pts)
    for p in pts:
        assert abs(p.value ** 3 - 27) < 1e-8


def test_deterministic_for_fixed_seed():
    w = parse_laurent("x + y + 2/x + 1/(x*y)")
    cfg = crit.NewtonConfig(seed=3)
    assert crit.critical_values(w, cfg) == crit.critical_values(w, cfg)


def test_no_critical_points():
    with pytest.raises(NoConvergence):
        crit.critical_points(parse_laurent("x"), crit.NewtonConfig(starts=10))
    with pytest.raises(ValidationError):
        crit.critical_points(parse_laurent("3"))


def test_kappa_values():
    assert crit.solve_kappa(local_model_family("S2"), crit.S2_EIGENVALUES) == [2]
    assert crit.solve_kappa(local_model_family("SO3"), crit.SO3_EIGENVALUES) == [0]


def test_kappa_admissibility_reports_values():
    ok, vals = crit.kappa_admissible(local_model_family("S2"), 1, crit.S2_EIGENVALUES)
    assert not ok and vals


def test_empty_kappa_result():
    with pytest.raises(EmptyResult):
        crit.solve_kappa(local_model_family("S2"), crit.EigenvalueSet((100,), "none"), range(0, 3))
