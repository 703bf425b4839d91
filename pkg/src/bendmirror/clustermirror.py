"""Pluecker coordinates of Gr(2, n+3) in the cluster charts of triangulations.

Each triangulation ``T`` of the (n+3)-gon gives a cluster chart whose
unfrozen variables are the Pluecker coordinates ``p_ij`` of its diagonals.
The frozen variables are the coordinates of polygon sides.  Any other
Pluecker coordinate is reached by walking a flip path and applying the
exchange relation

    p_ac * p_bd = p_ab * p_cd + p_ad * p_bc      (a < b < c < d)

at every step.  By the Laurent phenomenon each step is an exact division.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .errors import ValidationError
from .exactalg import LaurentFraction, LaurentPoly, exact_div, substitute
from .polygoncomb import (
    Diagonal,
    Triangulation,
    caterpillar_triangulation,
    flip,
    flip_path_to_diagonal,
    is_side,
    normalize_pair,
    quadrilateral,
)

SET_TO_ONE = "set_to_one"
# the affine chart p_12 != 0 is normalised by p_12 = 1 under both policies
AFFINE_INDEX = (1, 2)
KEEP_SYMBOLIC = "keep_symbolic"


def plucker_name(i: int, j: int) -> str:
    """Variable name for ``p_ij`` (``p13``; ``p1_10`` once labels pass 9)."""
    i, j = sorted((i, j))
    return f"p{i}{j}" if j < 10 else f"p{i}_{j}"


def is_frozen(index: Tuple[int, int], n: int) -> bool:
    return is_side(index[0], index[1], n)


def frozen_indices(n: int) -> List[Tuple[int, int]]:
    m = n + 3
    return [(i, i + 1) for i in range(1, m)] + [(1, m)]


@dataclass
class ClusterChart:
    """Chart of a triangulation, with a policy for the frozen variables.

    The memo cache belongs to the chart object, so repeated queries against
    one chart reuse earlier exchange computations.
    """

    triangulation: Triangulation
    frozen_policy: str = SET_TO_ONE
    _cache: Dict[Diagonal, LaurentPoly] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.frozen_policy not in (SET_TO_ONE, KEEP_SYMBOLIC):
            raise ValidationError(f"unknown frozen policy {self.frozen_policy!r}")

    @property
    def n(self) -> int:
        return self.triangulation.n

    @property
    def variables(self) -> Tuple[str, ...]:
        names = [plucker_name(*d) for d in self.triangulation.diagonals]
        if self.frozen_policy == KEEP_SYMBOLIC:
            names += [plucker_name(*f) for f in frozen_indices(self.n) if f != AFFINE_INDEX]
        return tuple(names)

    def with_policy(self, policy: str) -> "ClusterChart":
        return ClusterChart(self.triangulation, policy)

    def flipped(self, d: Diagonal) -> "ClusterChart":
        return ClusterChart(flip(self.triangulation, d)[0], self.frozen_policy)


def chart_from_spec(n: int, spec: str = "caterpillar", policy: str = SET_TO_ONE) -> ClusterChart:
    return ClusterChart(Triangulation.parse(n, spec), policy)


def _frozen_value(index: Tuple[int, int], chart: ClusterChart) -> LaurentPoly:
    if chart.frozen_policy == SET_TO_ONE or index == AFFINE_INDEX:
        return LaurentPoly.constant(1)
    return LaurentPoly.var(plucker_name(*index))


def _exchange_numerator(quad: Tuple[int, int, int, int], value) -> LaurentPoly:
    a, b, c, d = quad
    return value((a, b)) * value((c, d)) + value((a, d)) * value((b, c))


def plucker_in_chart(index: Tuple[int, int], chart: ClusterChart) -> LaurentPoly:
    """Laurent expression of ``p_index`` in the chart's variables."""
    n = chart.n
    i, j = index
    if not (1 <= i <= n + 3 and 1 <= j <= n + 3) or i == j:
        raise ValidationError(f"{index} is not a Pluecker index for n={n}")
    index = normalize_pair(i, j, n)
    if is_frozen(index, n):
        return _frozen_value(index, chart)
    if index in chart.triangulation:
        return LaurentPoly.var(plucker_name(*index))
    cache = chart._cache
    if index in cache:
        return cache[index]

    def value(pair):
        pair = tuple(sorted(pair))
        if is_frozen(pair, n):
            return _frozen_value(pair, chart)
        if pair in chart.triangulation:
            return LaurentPoly.var(plucker_name(*pair))
        return cache[pair]

    current = chart.triangulation
    for removed, added in flip_path_to_diagonal(current, index):
        if added not in cache:
            quad = quadrilateral(current, removed)
            # exactness of this division is the Laurent phenomenon
            cache[added] = exact_div(_exchange_numerator(quad, value), value(removed))
        current, _ = flip(current, removed)
    return cache[index]


def w_bend_in_chart(chart: ClusterChart) -> LaurentPoly:
    """Sum of ``p_{i,i+2}`` over ``i = 1..n+3`` (indices mod n+3), frozen = 1."""
    if chart.frozen_policy != SET_TO_ONE:
        raise ValidationError("w_bend_in_chart needs the set_to_one frozen policy")
    n = chart.n
    total = LaurentPoly.zero(chart.variables)
    for i in range(1, n + 4):
        total = total + plucker_in_chart(normalize_pair(i, i + 2, n), chart)
    return total.with_variables(chart.variables)


def w_mr_terms(n: int) -> List[Tuple[Tuple[int, int], Tuple[int, int]]]:
    """(numerator, denominator) index pairs ``(j, j+2) / (j, j+1)`` for ``j = 1..n+3``."""
    return [(normalize_pair(j, j + 2, n), normalize_pair(j, j + 1, n)) for j in range(1, n + 4)]


def w_mr(chart: ClusterChart) -> LaurentPoly:
    """Superpotential with frozen variables kept symbolic.

    The result lives in 2n+2 variables: the n chart variables and the n+2
    frozen ones other than ``p_12``, which the affine chart sets to one.
    Setting every frozen variable to one recovers ``w_bend_in_chart``.
    """
    if chart.frozen_policy != KEEP_SYMBOLIC:
        chart = chart.with_policy(KEEP_SYMBOLIC)
    total = LaurentPoly.zero(chart.variables)
    for num, den in w_mr_terms(chart.n):
        total = total + exact_div(plucker_in_chart(num, chart), plucker_in_chart(den, chart))
    return total.with_variables(chart.variables)


def exchange_binding(chart: ClusterChart, d: Diagonal) -> Tuple[ClusterChart, Dict[str, LaurentFraction]]:
    """Flip ``d`` and express the old variable ``p_d`` in the new chart."""
    n = chart.n
    d = tuple(sorted(d))
    quad = quadrilateral(chart.triangulation, d)
    new_chart = chart.flipped(d)
    a, b, c, e = quad
    new = (b, e) if d == (a, c) else (a, c)

    def value(pair):
        pair = tuple(sorted(pair))
        if is_frozen(pair, n):
            return _frozen_value(pair, chart)
        return LaurentPoly.var(plucker_name(*pair))

    numer = _exchange_numerator(quad, value)
    return new_chart, {plucker_name(*d): LaurentFraction(numer, value(new))}


def mutate_potential(w: LaurentPoly, chart: ClusterChart, d: Diagonal) -> LaurentPoly:
    """Rewrite ``w`` from ``chart`` into the chart obtained by flipping ``d``."""
    new_chart, binding = exchange_binding(chart, d)
    out = substitute(w, binding)
    return out.with_variables(sorted(set(out.used_variables()) | set(new_chart.variables)))


def transport(w: LaurentPoly, chart: ClusterChart, flips: List[Diagonal]) -> Tuple[LaurentPoly, ClusterChart]:
    """Apply a sequence of mutations, returning the potential and final chart."""
    for d in flips:
        w = mutate_potential(w, chart, d)
        chart = chart.flipped(d)
    return w, chart


def caterpillar_renaming(n: int) -> Dict[str, str]:
    """``p_{1,j+2} -> z_j``: the caterpillar chart in polytope coordinates."""
    return {plucker_name(1, j + 2): f"z{j}" for j in range(1, n + 1)}


def caterpillar_chart(n: int, policy: str = SET_TO_ONE) -> ClusterChart:
    return ClusterChart(caterpillar_triangulation(n), policy)
