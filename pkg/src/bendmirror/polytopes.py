"""Bending and Gelfand-Zeitlin polytopes as exact half-space systems.

Coordinates
-----------
For a general triangulation the bending polytope lives in the lengths of
its diagonals, one variable ``d_i_j`` per diagonal.  For the caterpillar
triangulation we also use the shifted coordinates

    u_j = |r|_{j+1} - |d_{1,j+2}|,     j = 1..n,

in which the triangle inequalities become the functionals ``l_{i,j}``
labelled as in the ladder diagram (with ``u_0 = 0`` and
``u_{n+1} = |r| - 2 r_{n+3}``).

All arithmetic is exact; faces are located with an exact simplex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, Hashable, List, Optional, Sequence, Tuple, Union

from ._lp import ExactLP
from .errors import InfeasibleSystem, InvalidLengthTuple, NoCommonLevelPoint, ValidationError
from .exactalg import as_fraction, fraction_str, rank, solve_linear
from .polygoncomb import Triangulation, caterpillar_triangulation

Label = Union[Tuple[int, int], str]


# ---------------------------------------------------------------------------
# length tuples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LengthTuple:
    """Side lengths ``r_1..r_{n+3}`` of the polygon."""

    r: Tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(as_fraction(x) for x in self.r)
        object.__setattr__(self, "r", vals)
        if len(vals) < 4:
            raise InvalidLengthTuple("need at least four side lengths")
        if any(x <= 0 for x in vals):
            raise InvalidLengthTuple("side lengths must be positive")
        if self.total - 2 * max(vals) <= 0:
            raise InvalidLengthTuple(
                "no polygon closes: the longest side is at least half the perimeter"
            )

    @classmethod
    def parse(cls, text: Union[str, Sequence]) -> "LengthTuple":
        if isinstance(text, str):
            parts = [p for p in text.replace(" ", "").split(",") if p]
        else:
            parts = list(text)
        return cls(tuple(as_fraction(p) for p in parts))

    @classmethod
    def equilateral(cls, n: int, side=1) -> "LengthTuple":
        return cls(tuple([as_fraction(side)] * (n + 3)))

    @property
    def n(self) -> int:
        return len(self.r) - 3

    @property
    def total(self) -> Fraction:
        return sum(self.r, Fraction(0))

    def partial(self, i: int) -> Fraction:
        """``|r|_i = r_1 + ... + r_i`` (``|r|_0 = 0``)."""
        return sum(self.r[:i], Fraction(0))

    def __getitem__(self, i: int) -> Fraction:
        """One-based access, matching the usual ``r_i`` indexing."""
        if not 1 <= i <= len(self.r):
            raise IndexError(i)
        return self.r[i - 1]

    def is_equilateral(self) -> bool:
        return len(set(self.r)) == 1

    def to_json(self) -> List[str]:
        return [fraction_str(x) for x in self.r]


def is_generic(r: LengthTuple) -> bool:
    """No choice of signs makes ``sum eps_j r_j`` vanish."""
    vals = r.r
    # fixing eps_1 = +1 halves the search without losing any case
    for signs in product((1, -1), repeat=len(vals) - 1):
        if vals[0] + sum(s * x for s, x in zip(signs, vals[1:])) == 0:
            return False
    return True


def pentagon_caterpillar_is_toric(r: LengthTuple) -> bool:
    """Toricness of the caterpillar bending action on pentagon spaces.

    The criterion (valid for generic 5-tuples) is ``r1 != r2`` and
    ``r4 != r5``.
    """
    if r.n != 2:
        raise ValidationError("the toricness criterion is stated for pentagons only")
    if not is_generic(r):
        raise ValidationError("the toricness criterion needs a generic tuple")
    return r[1] != r[2] and r[4] != r[5]


# ---------------------------------------------------------------------------
# half-space systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineFunctional:
    """``const + coeffs . u``; the half-space is where this is nonnegative."""

    label: Label
    const: Fraction
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "const", as_fraction(self.const))
        object.__setattr__(self, "coeffs", tuple(as_fraction(c) for c in self.coeffs))
        if self.const == 0 and not any(self.coeffs):
            raise ValidationError(f"functional {self.label} is identically zero")

    def __call__(self, u: Sequence) -> Fraction:
        return self.const + sum((c * as_fraction(x) for c, x in zip(self.coeffs, u)), Fraction(0))

    def evaluate_float(self, u: Sequence[float]) -> float:
        return float(self.const) + sum(float(c) * x for c, x in zip(self.coeffs, u))

    def same_as(self, other: "AffineFunctional") -> bool:
        return self.const == other.const and self.coeffs == other.coeffs

    @property
    def label_str(self) -> str:
        if isinstance(self.label, tuple):
            return "l_" + "_".join(str(x) for x in self.label)
        return str(self.label)

    def to_json(self) -> dict:
        return {
            "label": self.label_str,
            "const": fraction_str(self.const),
            "coeffs": [fraction_str(c) for c in self.coeffs],
        }


@dataclass
class HalfSpaceSystem:
    """Polyhedron ``{u : f(u) >= 0 for every functional f}`` in ``R^dim``."""

    dim: int
    functionals: List[AffineFunctional]
    var_names: Tuple[str, ...] = ()
    _codim_cache: Dict[Hashable, Optional[int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.var_names:
            self.var_names = tuple(f"u{i}" for i in range(1, self.dim + 1))
        labels = [f.label for f in self.functionals]
        if len(set(labels)) != len(labels):
            raise ValidationError("duplicate functional labels")
        for f in self.functionals:
            if len(f.coeffs) != self.dim:
                raise ValidationError(f"functional {f.label} has the wrong dimension")

    def __getitem__(self, label: Label) -> AffineFunctional:
        for f in self.functionals:
            if f.label == label:
                return f
        raise KeyError(label)

    @property
    def labels(self) -> List[Label]:
        return [f.label for f in self.functionals]

    def contains(self, u: Sequence) -> bool:
        return all(f(u) >= 0 for f in self.functionals)

    def is_interior(self, u: Sequence) -> bool:
        return all(f(u) > 0 for f in self.functionals)

    def distinct(self) -> List[AffineFunctional]:
        """Functionals with coincident copies removed (first label kept)."""
        out: List[AffineFunctional] = []
        for f in self.functionals:
            if not any(f.same_as(g) for g in out):
                out.append(f)
        return out

    def coincidences(self) -> List[Tuple[Label, Label]]:
        return [
            (f.label, g.label)
            for f, g in combinations(self.functionals, 2)
            if f.same_as(g)
        ]

    def _rows(self, fs: Sequence[AffineFunctional]):
        return [(f.coeffs, f.const) for f in fs]

    def lp(self, equalities: Sequence[AffineFunctional] = ()) -> ExactLP:
        return ExactLP(self.dim, self._rows(self.functionals), self._rows(equalities))

    def is_feasible(self) -> bool:
        return self.lp().feasible

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "vars": list(self.var_names),
            "rows": [f.to_json() for f in self.functionals],
        }


def implicit_equalities(sys: HalfSpaceSystem, tight: Sequence[AffineFunctional]):
    """Functionals vanishing on all of ``{tight = 0} & sys``; None if empty."""
    lp = sys.lp(tight)
    if not lp.feasible:
        return None
    implicit = list(tight)
    positive = set()
    for g in sys.functionals:
        if any(g is t for t in tight) or g.label in positive:
            continue
        value, point = lp.maximize(g.coeffs, g.const)
        if value is None or value > 0:
            # any functional positive at this optimum is not implicit either
            for h in sys.functionals:
                if h(point) > 0:
                    positive.add(h.label)
            positive.add(g.label)
        else:
            implicit.append(g)
    return implicit


def face_codim_of(sys: HalfSpaceSystem, tight: Sequence[AffineFunctional]) -> Optional[int]:
    """Codimension of the face ``{f = 0 for f in tight}``, or None if empty."""
    implicit = implicit_equalities(sys, tight)
    if implicit is None:
        return None
    return rank([list(f.coeffs) for f in implicit])


def face_codim(sys: HalfSpaceSystem, f: Union[AffineFunctional, Label]) -> Optional[int]:
    """Codimension in ``R^dim`` of ``{f = 0}`` intersected with the polytope.

    ``None`` stands for the empty face.  Raises :class:`InfeasibleSystem`
    when the polytope itself is empty.
    """
    if not isinstance(f, AffineFunctional):
        f = sys[f]
    if f.label in sys._codim_cache:
        return sys._codim_cache[f.label]
    if not sys.is_feasible():
        raise InfeasibleSystem("the polytope is empty")
    out = face_codim_of(sys, [f])
    sys._codim_cache[f.label] = out
    return out


def facets(sys: HalfSpaceSystem) -> List[AffineFunctional]:
    """Functionals whose zero set meets the polytope in a facet."""
    return [f for f in sys.functionals if face_codim(sys, f) == 1]


def facet_labels(sys: HalfSpaceSystem) -> List[Label]:
    return [f.label for f in facets(sys)]


def vertices(sys: HalfSpaceSystem) -> List[Tuple[Fraction, ...]]:
    """Exact vertex enumeration by brute force over n-subsets (small n only)."""
    fs = sys.distinct()
    out = set()
    for subset in combinations(fs, sys.dim):
        a = [list(f.coeffs) for f in subset]
        b = [-f.const for f in subset]
        x = solve_linear(a, b)
        if x is not None and sys.contains(x):
            out.add(tuple(x))
    return sorted(out)


# ---------------------------------------------------------------------------
# concrete polytopes
# ---------------------------------------------------------------------------

def caterpillar_functionals(r: LengthTuple) -> List[AffineFunctional]:
    """The ``3n+3`` functionals ``l_{i,j}`` in shifted coordinates ``u``."""
    n = r.n

    def vec(entries: Dict[int, int]):
        # entries keyed by u-index 0..n+1; u_0 and u_{n+1} are constants
        c = [Fraction(0)] * n
        const = Fraction(0)
        for k, s in entries.items():
            if 1 <= k <= n:
                c[k - 1] += s
            elif k == n + 1:
                const += s * (r.total - 2 * r[n + 3])
        return const, c

    out = []
    for i in range(1, n + 2):
        const, c = vec({i - 1: -1, i: -1})
        out.append(AffineFunctional((i, 0), 2 * r.partial(i) + const, c))
    for i in range(1, n + 2):
        const, c = vec({i: -1, i - 1: 1})
        out.append(AffineFunctional((i, 1), 2 * r[i + 1] + const, c))
    for i in range(0, n + 1):
        const, c = vec({i + 1: 1, i: -1})
        out.append(AffineFunctional((i, 2), const, c))
    return out


def caterpillar_system(r: LengthTuple) -> HalfSpaceSystem:
    """Caterpillar bending polytope in the shifted coordinates ``u``."""
    return HalfSpaceSystem(r.n, caterpillar_functionals(r), tuple(f"u{j}" for j in range(1, r.n + 1)))


def diagonal_var(d: Tuple[int, int]) -> str:
    return f"d_{d[0]}_{d[1]}"


def _triangle_label(tri, opposite_side, caterpillar_labels: bool, n: int):
    a, b, c = tri
    if caterpillar_labels and a == 1 and c == b + 1:
        j = b - 1  # triangle (1, j+1, j+2)
        # the inequality "other two sides minus this side"
        if opposite_side == (b, c):  # the polygon side r_{j+1} is subtracted
            return (j, 0)
        if opposite_side == (1, c):  # the chord (1, j+2) is subtracted
            return (j - 1, 2)
        return (j, 1)
    return "tri_{}_{}_{}_{}_{}".format(a, b, c, *opposite_side)


def bending_polytope(t: Triangulation, r: LengthTuple) -> HalfSpaceSystem:
    """Triangle inequalities of ``t`` in the diagonal lengths ``d_i_j``.

    For every triangle with sides ``x, y, z`` we emit ``x + y - z >= 0``
    and its two rotations; polygon sides contribute the constants ``r_i``.
    The caterpillar system carries the labels ``l_{i,j}``.
    """
    if t.n != r.n:
        raise ValidationError("triangulation and length tuple disagree on n")
    n = t.n
    diag_index = {d: k for k, d in enumerate(t.diagonals)}
    cat = t == caterpillar_triangulation(n)

    def side(p, q):
        p, q = sorted((p, q))
        if (p, q) in diag_index:
            v = [Fraction(0)] * n
            v[diag_index[(p, q)]] = Fraction(1)
            return Fraction(0), v
        # a polygon side from p to q has length r_p, except (1, n+3)
        length = r[n + 3] if (p, q) == (1, n + 3) else r[p]
        return length, [Fraction(0)] * n

    out = []
    for tri in t.triangles():
        a, b, c = tri
        sides = [(a, b), (b, c), (a, c)]
        for opp in sides:
            const = Fraction(0)
            coeffs = [Fraction(0)] * n
            for s in sides:
                k, v = side(*s)
                sign = -1 if s == opp else 1
                const += sign * k
                coeffs = [x + sign * y for x, y in zip(coeffs, v)]
            out.append(AffineFunctional(_triangle_label(tri, opp, cat, n), const, coeffs))
    if cat:
        order = {f.label: f for f in out}
        out = [order[f.label] for f in caterpillar_functionals(r)]
    return HalfSpaceSystem(n, out, tuple(diagonal_var(d) for d in t.diagonals))


def caterpillar_shift(r: LengthTuple):
    """Affine map lengths -> shifted coordinates: ``u_j = |r|_{j+1} - d_{1,j+2}``."""

    def to_u(lengths: Sequence) -> List[Fraction]:
        return [r.partial(j + 1) - as_fraction(x) for j, x in enumerate(lengths, start=1)]

    def to_lengths(u: Sequence) -> List[Fraction]:
        return [r.partial(j + 1) - as_fraction(x) for j, x in enumerate(u, start=1)]

    return to_u, to_lengths


def gz_var(i: int, j: int) -> str:
    return f"u_{i}_{j}"


def gz_polytope(n: int, total) -> HalfSpaceSystem:
    """Gelfand-Zeitlin pattern with top row ``(0, ..., 0, |r|, |r|)``.

    Variables ``u_{i,1}, u_{i,2}`` for ``i = 1..n+1``; the conventions
    ``u_{0,2} = 0`` and ``u_{n+2,1} = total`` supply constants.
    """
    total = as_fraction(total)
    if total <= 0:
        raise ValidationError("total length must be positive")
    names = [gz_var(i, j) for i in range(1, n + 2) for j in (1, 2)]
    index = {nm: k for k, nm in enumerate(names)}

    def lin(plus, minus):
        c = [Fraction(0)] * len(names)
        const = Fraction(0)
        for (i, j), s in ((plus, 1), (minus, -1)):
            if (i, j) == (0, 2):
                continue
            if (i, j) == (n + 2, 1):
                const += s * total
                continue
            c[index[gz_var(i, j)]] += s
        return const, c

    out = []
    for i in range(1, n + 2):
        out.append(AffineFunctional(("k", i, 0), *lin((i, 1), (i, 2))))
    for i in range(1, n + 2):
        out.append(AffineFunctional(("k", i, 1), *lin((i + 1, 1), (i, 1))))
    for i in range(0, n + 1):
        out.append(AffineFunctional(("k", i, 2), *lin((i + 1, 2), (i, 2))))
    return HalfSpaceSystem(len(names), out, tuple(names))


# ---------------------------------------------------------------------------
# the monotone center
# ---------------------------------------------------------------------------

def common_level_point(sys: HalfSpaceSystem):
    """Point where all facet functionals take one common positive value.

    Returns ``(point, level)`` or raises :class:`NoCommonLevelPoint`.
    """
    fs = facets(sys)
    if not fs:
        raise NoCommonLevelPoint("no facets")
    a = [list(f.coeffs) + [Fraction(-1)] for f in fs]
    b = [-f.const for f in fs]
    x = solve_linear(a, b)
    if x is None:
        raise NoCommonLevelPoint("facet functionals admit no common level point")
    point, level = x[:-1], x[-1]
    if level <= 0 or not sys.contains(point):
        raise NoCommonLevelPoint("the common level is not positive inside the polytope")
    return point, level


def monotone_center(sys: HalfSpaceSystem, r: LengthTuple) -> List[Fraction]:
    """Monotone center: ``(r1, 2 r1, ..., n r1)`` for equilateral caterpillar data.

    Otherwise the common-level point of the facet functionals, found exactly.
    """
    if r.is_equilateral() and sys.var_names == tuple(f"u{j}" for j in range(1, r.n + 1)):
        return [j * r[1] for j in range(1, r.n + 1)]
    return common_level_point(sys)[0]


def equilateral_non_facet_labels(n: int) -> List[Tuple[int, int]]:
    """Labels whose zero sets are codimension two in the equilateral case."""
    return [(1, 0), (1, 1), (n, 2), (n + 1, 0)]
