"""Spatial polygons: reconstruction, bending flows and fiber types.

A configuration stores the edge vectors ``v_1..v_{n+3}`` in R^3; vertex
``P_1`` sits at the origin and ``P_{j+1} = P_j + v_j``.  The diagonal
``d_{i,j}`` (``i < j``) is ``v_i + ... + v_{j-1} = P_j - P_i``.

Angle convention.  For a diagonal ``(a, b)`` of a triangulation, let ``s``
be the third vertex of the adjacent triangle on the side of the labels
between ``a`` and ``b`` and ``o`` the third vertex of the other one.  The
angle is the signed rotation about ``P_b - P_a`` (right-hand rule) taking
the unfolded position of ``o`` (its mirror image across the line) to
``s``.  Angle ``0`` therefore means both triangles lie flat in one plane
on opposite sides of the diagonal.  Since :func:`bend` turns the ``s``
side forward by ``theta``, the bending flow of a diagonal advances its own
angle at unit speed.

Gauge.  ``P_a`` is placed at the origin for the first diagonal ``(a, b)``
of the triangulation, ``P_b`` on the positive x-axis and ``P_{a+1}`` in the
half-plane ``y <= 0`` of the xy-plane.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import (
    DegenerateAtBoundary,
    DegenerateAxis,
    NotInPolytope,
    TriangleInequalityViolated,
    ValidationError,
)
from .polygoncomb import Diagonal, Triangulation, crosses, is_diagonal
from .polytopes import LengthTuple

TOL = 1e-9


@dataclass(frozen=True)
class PolygonConfig:
    vectors: np.ndarray
    lengths: LengthTuple

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=float)
        if v.shape != (len(self.lengths.r), 3):
            raise ValidationError(f"expected {len(self.lengths.r)} edge vectors in R^3")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def n(self) -> int:
        return self.lengths.n

    def vertices(self) -> np.ndarray:
        return np.vstack([np.zeros(3), np.cumsum(self.vectors, axis=0)[:-1]])

    def closure_residual(self) -> float:
        return float(np.max(np.abs(self.vectors.sum(axis=0))))

    def length_residual(self) -> float:
        r = np.array([float(x) for x in self.lengths.r])
        return float(np.max(np.abs(np.linalg.norm(self.vectors, axis=1) - r)))

    def check(self, tol: float = TOL) -> None:
        if self.closure_residual() > tol:
            raise ValidationError(f"polygon does not close (residual {self.closure_residual():.3g})")
        if self.length_residual() > tol:
            raise ValidationError(f"edge lengths off by {self.length_residual():.3g}")

    def to_json(self) -> dict:
        return {"vectors": [[float(x) for x in v] for v in self.vectors], "r": self.lengths.to_json()}


@dataclass(frozen=True)
class FiberType:
    m1: int
    m2: int
    m3: int
    c_nu: Tuple[Tuple[int, int], ...]

    def describe(self) -> str:
        parts = []
        for name, m in (("S1", self.m1), ("S2", self.m2), ("SO3", self.m3)):
            if m:
                parts.append(name if m == 1 else f"({name})^{m}")
        return " x ".join(parts) if parts else "point"

    def to_json(self) -> dict:
        return {
            "m1": self.m1, "m2": self.m2, "m3": self.m3,
            "cNu": {str(k): v for k, v in self.c_nu},
            "type": self.describe(),
        }


# ---------------------------------------------------------------------------
# measurement and flows
# ---------------------------------------------------------------------------

def _check_diagonal(d: Sequence[int], n: int) -> Tuple[int, int]:
    i, j = sorted(d)
    if not (1 <= i < j <= n + 3) or j - i < 2:
        raise ValidationError(f"{tuple(d)} is not a chord of the {n + 3}-gon")
    return i, j


def diagonal_vector(c: PolygonConfig, d: Sequence[int]) -> np.ndarray:
    i, j = sorted(d)
    return c.vectors[i - 1:j - 1].sum(axis=0)


def diagonal_length(c: PolygonConfig, d: Sequence[int]) -> float:
    """``|v_i + ... + v_{j-1}|``; ``(1, n+3)`` measures ``|v_{n+3}|`` by closure."""
    i, j = sorted(d)
    if not 1 <= i < j <= c.n + 3:
        raise ValidationError(f"{tuple(d)} is not a pair of vertex labels")
    return float(np.linalg.norm(diagonal_vector(c, (i, j))))


def bend(c: PolygonConfig, d: Sequence[int], theta: float) -> PolygonConfig:
    """Rotate ``v_i .. v_{j-1}`` by ``theta`` about the diagonal ``d_{i,j}``."""
    i, j = _check_diagonal(d, c.n)
    axis = diagonal_vector(c, (i, j))
    norm = np.linalg.norm(axis)
    if norm < TOL:
        raise DegenerateAxis(f"diagonal {(i, j)} has length {norm:.3g}; the bending axis is undefined")
    rot = Rotation.from_rotvec(theta * axis / norm)
    v = np.array(c.vectors)
    v[i - 1:j - 1] = rot.apply(v[i - 1:j - 1])
    return PolygonConfig(v, c.lengths)


def gauge_fix(c: PolygonConfig, d: Sequence[int] = (1, 3)) -> PolygonConfig:
    """Rotate so that ``d`` points along +x and ``P_{a+1}`` has ``y <= 0``, ``z = 0``."""
    a, b = sorted(d)
    e1 = diagonal_vector(c, (a, b))
    if np.linalg.norm(e1) < TOL:
        raise DegenerateAxis(f"cannot gauge-fix along the zero diagonal {(a, b)}")
    e1 = e1 / np.linalg.norm(e1)
    w = c.vectors[a - 1] - np.dot(c.vectors[a - 1], e1) * e1
    if np.linalg.norm(w) < TOL:
        w = _any_perpendicular(e1)
    e2 = -w / np.linalg.norm(w)
    e3 = np.cross(e1, e2)
    rot = np.vstack([e1, e2, e3])
    return PolygonConfig(c.vectors @ rot.T, c.lengths)


def _any_perpendicular(k: np.ndarray) -> np.ndarray:
    for e in (np.array([0.0, 0.0, 1.0]), np.array([0.0, 1.0, 0.0])):
        w = e - np.dot(e, k) * k
        if np.linalg.norm(w) > 1e-6:
            return w / np.linalg.norm(w)
    raise DegenerateAxis("no perpendicular direction")  # unreachable for unit k


def check_commuting(c: PolygonConfig, d1: Diagonal, d2: Diagonal, theta1: float, theta2: float,
                    gauge: Sequence[int] = (1, 3)) -> float:
    """Sup-norm distance between the two orders of bending (after gauge fixing)."""
    one = bend(bend(c, d1, theta1), d2, theta2)
    two = bend(bend(c, d2, theta2), d1, theta1)
    return float(np.max(np.abs(gauge_fix(one, gauge).vectors - gauge_fix(two, gauge).vectors)))


# ---------------------------------------------------------------------------
# reconstruction
# ---------------------------------------------------------------------------

def _edge_length(p: int, q: int, r: LengthTuple, lengths: Mapping[Diagonal, float]) -> float:
    p, q = sorted((p, q))
    m = r.n + 3
    if q - p == 1:
        return float(r[p])
    if (p, q) == (1, m):
        return float(r[m])
    return float(lengths[(p, q)])


def _normalise_lengths(t: Triangulation, lengths: Mapping) -> Dict[Diagonal, float]:
    out = {}
    for d, x in lengths.items():
        d = tuple(sorted(d))
        if d not in t:
            raise ValidationError(f"length given for {d}, which is not in {t}")
        out[d] = x
    missing = [d for d in t.diagonals if d not in out]
    if missing:
        raise ValidationError(f"missing lengths for {missing}")
    return out


def _inner_outer(t: Triangulation, d: Diagonal) -> Tuple[int, int]:
    a, b = d
    thirds = [next(v for v in tri if v not in d) for tri in t.adjacent_triangles(d)]
    inner = next(v for v in thirds if a < v < b)
    outer = next(v for v in thirds if v != inner)
    return inner, outer


def _rotate(vec: np.ndarray, axis: np.ndarray, angle: float) -> np.ndarray:
    return Rotation.from_rotvec(angle * axis).apply(vec)


def reconstruct_polygon(
    r: LengthTuple,
    t: Triangulation,
    lengths: Mapping[Diagonal, float],
    angles: Optional[Mapping[Diagonal, float]] = None,
    allow_boundary: bool = False,
) -> PolygonConfig:
    """Build a configuration from diagonal lengths and dihedral angles of ``t``.

    Raises :class:`TriangleInequalityViolated` outside the polytope and, by
    default, :class:`DegenerateAtBoundary` on its boundary, where some
    angle is undefined.  With ``allow_boundary`` such angles are ignored
    and canonical choices are made instead.
    """
    if t.n != r.n:
        raise ValidationError("triangulation and length tuple disagree on n")
    lengths = _normalise_lengths(t, lengths)
    angles = {tuple(sorted(d)): float(a) for d, a in (angles or {}).items()}
    for d in angles:
        if d not in t:
            raise ValidationError(f"angle given for {d}, which is not in {t}")

    for tri in t.triangles():
        a, b, c = tri
        s = [_edge_length(a, b, r, lengths), _edge_length(b, c, r, lengths), _edge_length(a, c, r, lengths)]
        slack = min(s[0] + s[1] - s[2], s[1] + s[2] - s[0], s[0] + s[2] - s[1])
        if min(s) < -TOL or slack < -TOL:
            raise TriangleInequalityViolated(f"triangle {tri} with sides {s} cannot close")
        if (min(s) < TOL or slack < TOL) and not allow_boundary:
            raise DegenerateAtBoundary(f"triangle {tri} is degenerate; pass allow_boundary to accept")

    m = r.n + 3
    pos: Dict[int, np.ndarray] = {}
    first = t.diagonals[0]
    a, b = first
    dist = lambda p, q: _edge_length(p, q, r, lengths)  # noqa: E731
    pos[a] = np.zeros(3)
    pos[b] = np.array([dist(a, b), 0.0, 0.0])
    inner, _ = _inner_outer(t, first)
    pos[inner] = _place_planar(pos[a], pos[b], dist(a, inner), dist(b, inner), np.array([0.0, -1.0, 0.0]))

    # walk the dual tree across diagonals
    queue = deque([first])
    seen = {first}
    while queue:
        d = queue.popleft()
        p, q = d
        s_in, s_out = _inner_outer(t, d)
        if s_in in pos and s_out in pos:
            pass
        else:
            known, unknown, sign = (s_in, s_out, -1.0) if s_in in pos else (s_out, s_in, 1.0)
            theta = angles.get(d, 0.0)
            pos[unknown] = _place_across(
                pos[p], pos[q], pos[known], dist(p, unknown), dist(q, unknown), sign * theta, allow_boundary, d
            )
        for tri in t.adjacent_triangles(d):
            for e in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])):
                if e in t and e not in seen:
                    seen.add(e)
                    queue.append(e)
    if len(pos) != m:
        raise ValidationError("triangulation does not reach every vertex")  # unreachable
    pts = np.array([pos[k] for k in range(1, m + 1)])
    vectors = np.roll(pts, -1, axis=0) - pts
    # translate so that P_1 is the origin (vectors are translation invariant)
    return PolygonConfig(vectors, r)


def _place_planar(pa, pb, la, lb, side):
    axis = pb - pa
    dlen = np.linalg.norm(axis)
    if dlen < TOL:
        return pa + la * side
    k = axis / dlen
    x = (la**2 - lb**2 + dlen**2) / (2 * dlen)
    h = math.sqrt(max(la**2 - x**2, 0.0))
    return pa + x * k + h * side


def _place_across(pp, pq, known, lp, lq, theta, allow_boundary, d):
    """Third vertex of the triangle across the diagonal ``pq`` from ``known``."""
    axis = pq - pp
    dlen = np.linalg.norm(axis)
    if dlen < TOL:
        if not allow_boundary:
            raise DegenerateAtBoundary(f"diagonal {d} has zero length")
        away = known - pp
        u = -away / np.linalg.norm(away) if np.linalg.norm(away) > TOL else np.array([1.0, 0.0, 0.0])
        return pp + lp * u
    k = axis / dlen
    x = (lp**2 - lq**2 + dlen**2) / (2 * dlen)
    h = math.sqrt(max(lp**2 - x**2, 0.0))
    w = known - pp
    w = w - np.dot(w, k) * k
    if np.linalg.norm(w) < TOL:
        if h > TOL and not allow_boundary:
            raise DegenerateAtBoundary(f"the angle at {d} is undefined: a triangle is flat")
        u_known = _any_perpendicular(k)
        theta = 0.0
    else:
        u_known = w / np.linalg.norm(w)
    u = _rotate(-u_known, k, theta)
    return pp + x * k + h * u


def dihedral_angles(c: PolygonConfig, t: Triangulation) -> Dict[Diagonal, float]:
    """Angles of ``c`` at the diagonals of ``t`` in ``[0, 2 pi)``."""
    pts = c.vertices()
    P = lambda k: pts[k - 1]  # noqa: E731
    out = {}
    for d in t.diagonals:
        a, b = d
        s, o = _inner_outer(t, d)
        axis = P(b) - P(a)
        if np.linalg.norm(axis) < TOL:
            raise DegenerateAxis(f"diagonal {d} has zero length")
        k = axis / np.linalg.norm(axis)
        us = P(s) - P(a)
        us = us - np.dot(us, k) * k
        uo = P(o) - P(a)
        uo = uo - np.dot(uo, k) * k
        if np.linalg.norm(us) < TOL or np.linalg.norm(uo) < TOL:
            raise DegenerateAtBoundary(f"the angle at {d} is undefined")
        e0 = -us / np.linalg.norm(us)
        e1 = np.cross(k, e0)
        out[d] = -math.atan2(np.dot(uo, e1), np.dot(uo, e0)) % (2 * math.pi)
    return out


def measured_lengths(c: PolygonConfig, t: Triangulation) -> Dict[Diagonal, float]:
    return {d: diagonal_length(c, d) for d in t.diagonals}


def interior_point(sys) -> np.ndarray:
    """A point maximising the smallest slack of the system (exact LP, then float)."""
    from ._lp import ExactLP

    rows = [(list(f.coeffs) + [Fraction(-1)], f.const) for f in sys.functionals]
    lp = ExactLP(sys.dim + 1, rows)
    value, point = lp.maximize([Fraction(0)] * sys.dim + [Fraction(1)])
    if value is None or value <= 0:
        raise ValidationError("the polytope has empty interior")
    return np.array([float(x) for x in point[:-1]])


def random_interior_lengths(sys, rng: np.random.Generator, x0: Optional[np.ndarray] = None,
                            steps: int = 20) -> np.ndarray:
    """Hit-and-run sample in the interior of a bounded half-space system."""
    a = np.array([[float(c) for c in f.coeffs] for f in sys.functionals])
    b = np.array([float(f.const) for f in sys.functionals])
    x = interior_point(sys) if x0 is None else np.array(x0, dtype=float)
    for _ in range(steps):
        d = rng.normal(size=len(x))
        d /= np.linalg.norm(d)
        ad = a @ d
        slack = a @ x + b
        with np.errstate(divide="ignore"):
            ratios = -slack / ad
        hi = np.min(ratios[ad < -1e-15], initial=np.inf)
        lo = np.max(ratios[ad > 1e-15], initial=-np.inf)
        x = x + rng.uniform(lo, hi) * d
    return x


@lru_cache(maxsize=256)
def _system_and_center(t: Triangulation, r: LengthTuple):
    from .polytopes import bending_polytope

    sys = bending_polytope(t, r)
    return sys, interior_point(sys)


def random_config(r: LengthTuple, t: Triangulation, rng: np.random.Generator,
                  margin: float = 1e-3) -> PolygonConfig:
    """A configuration with random interior lengths and random angles."""
    sys, x0 = _system_and_center(t, r)
    for _ in range(100):
        x = random_interior_lengths(sys, rng, x0)
        if all(f.evaluate_float(x) > margin for f in sys.functionals):
            break
    else:
        x = x0
    lengths = dict(zip(t.diagonals, x))
    angles = {d: rng.uniform(0, 2 * math.pi) for d in t.diagonals}
    return reconstruct_polygon(r, t, lengths, angles)


# ---------------------------------------------------------------------------
# fiber topology
# ---------------------------------------------------------------------------

def _exact(x):
    return isinstance(x, (int, Fraction))


def _is_zero(x) -> bool:
    return x == 0 if _exact(x) else abs(x) < TOL


def fiber_topology(r: LengthTuple, t: Triangulation, lengths: Mapping) -> FiberType:
    """Fiber type ``(S1)^m1 x (S2)^m2 x SO(3)^m3`` over a point of the polytope.

    Triangles of ``t`` are grouped into regions connected across diagonals
    of nonzero length.  A triangle is flat when a side vanishes or a
    triangle inequality is an equality.  A region without non-flat
    triangles is a segment; a region with ``N`` of them is a rigidly glued
    ``(N+2)``-gon contributing ``N-1`` circles.  Exact arithmetic is used
    for rational lengths, a ``1e-9`` tolerance for floats.
    """
    if t.n != r.n:
        raise ValidationError("triangulation and length tuple disagree on n")
    lengths = _normalise_lengths(t, lengths)
    exact = all(_exact(x) for x in lengths.values())
    m = r.n + 3

    def side(p, q):
        p, q = sorted((p, q))
        if q - p == 1:
            return r[p] if exact else float(r[p])
        if (p, q) == (1, m):
            return r[m] if exact else float(r[m])
        x = lengths[(p, q)]
        return Fraction(x) if exact else float(x)

    tris = t.triangles()
    flat = {}
    for tri in tris:
        a, b, c = tri
        s = [side(a, b), side(b, c), side(a, c)]
        slacks = [s[0] + s[1] - s[2], s[1] + s[2] - s[0], s[0] + s[2] - s[1]]
        tol = 0 if exact else TOL
        if min(s) < -tol or min(slacks) < -tol:
            raise NotInPolytope(f"triangle {tri} with sides {s} violates a triangle inequality")
        flat[tri] = any(_is_zero(x) for x in s) or any(_is_zero(x) for x in slacks)

    # union the triangles across nonzero diagonals
    parent = {tri: tri for tri in tris}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d in t.diagonals:
        if not _is_zero(lengths[d]):
            t1, t2 = t.adjacent_triangles(d)
            parent[find(t1)] = find(t2)
    regions: Dict[Tuple, List] = {}
    for tri in tris:
        regions.setdefault(find(tri), []).append(tri)

    c_nu: Dict[int, int] = {}
    for members in regions.values():
        count = sum(1 for tri in members if not flat[tri])
        nu = 2 if count == 0 else count + 2
        c_nu[nu] = c_nu.get(nu, 0) + 1
    m1 = sum(c * (nu - 3) for nu, c in c_nu.items() if nu >= 3)
    m2 = c_nu.get(2, 0)
    polys = sum(c for nu, c in c_nu.items() if nu >= 3)
    m3 = max(polys - 1, 0)
    return FiberType(m1, m2, m3, tuple(sorted(c_nu.items())))


def caterpillar_lengths_from_u(r: LengthTuple, u: Sequence) -> Dict[Diagonal, Fraction]:
    """Pull a shifted-coordinate point back to caterpillar diagonal lengths."""
    from .polytopes import caterpillar_shift

    _, to_lengths = caterpillar_shift(r)
    return {(1, j + 2): x for j, x in enumerate(to_lengths(u), start=1)}


def noncrossing_diagonals(d: Diagonal, n: int) -> List[Diagonal]:
    from .polygoncomb import all_diagonals

    return [e for e in all_diagonals(n) if e != tuple(d) and not crosses(tuple(d), e) and is_diagonal(e, n)]
