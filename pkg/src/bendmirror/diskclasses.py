"""Ladder quivers, basic disk classes, boundary maps and the effective classes.

The dual ladder quiver has two rows of vertices ``(i, 1)`` and ``(i, 2)``.
Every arrow corresponds to one of the polytope's functionals and carries
the normal vector ``t - h`` of its tail and head vertex vectors.  The
boundary of the basic class attached to an arrow is the gradient ``h - t``
of its functional, which is also the exponent vector of its monomial in
the disk potential.

For the bending system the vertex vectors are ``v_{i,2} = e_i`` and
``v_{i+1,1} = -e_i`` (``i = 1..n``), with the four phantom vertices
``(1,1), (0,2), (n+1,2), (n+2,1)`` at the origin.  For the GZ system every
vertex is its own basis vector except the phantoms ``(0,2)`` and
``(n+2,1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import OddN, ValidationError
from .exactalg import fraction_str, rank, solve_linear
from .polytopes import (
    LengthTuple,
    caterpillar_system,
    equilateral_non_facet_labels,
    face_codim_of,
    implicit_equalities,
)

Label = Tuple[int, int]
Vertex = Tuple[int, int]

BENDING = "bending"
GZ = "gz"


@dataclass(frozen=True)
class Arrow:
    label: Label
    tail: Vertex
    head: Vertex
    normal: Tuple[int, ...]
    facet: bool = True
    coincides_with: Optional[Label] = None

    @property
    def gradient(self) -> Tuple[int, ...]:
        return tuple(-x for x in self.normal)


@dataclass
class LadderQuiver:
    n: int
    kind: str
    boxes: frozenset
    vertex_vectors: Dict[Vertex, Tuple[int, ...]]
    arrows: List[Arrow]

    def __getitem__(self, label: Label) -> Arrow:
        for a in self.arrows:
            if a.label == label:
                return a
        raise KeyError(label)

    @property
    def labels(self) -> List[Label]:
        return [a.label for a in self.arrows]

    @property
    def facet_arrows(self) -> List[Arrow]:
        return [a for a in self.arrows if a.facet]

    @property
    def dim(self) -> int:
        return len(next(iter(self.vertex_vectors.values())))


def arrow_endpoints(label: Label) -> Tuple[Vertex, Vertex]:
    """Tail and head of ``e_{i,j}`` in the dual ladder quiver."""
    i, j = label
    if j == 0:
        return (i, 2), (i, 1)
    if j == 1:
        return (i, 1), (i + 1, 1)
    if j == 2:
        return (i, 2), (i + 1, 2)
    raise ValidationError(f"bad arrow label {label}")


def arrow_labels(n: int) -> List[Label]:
    return (
        [(i, 0) for i in range(1, n + 2)]
        + [(i, 1) for i in range(1, n + 2)]
        + [(i, 2) for i in range(0, n + 1)]
    )


def _bending_vertices(n: int) -> Dict[Vertex, Tuple[int, ...]]:
    def e(k):
        v = [0] * n
        if k:
            v[k - 1] = 1
        return tuple(v)

    zero = tuple([0] * n)
    out = {(1, 1): zero, (0, 2): zero, (n + 1, 2): zero, (n + 2, 1): zero}
    for i in range(1, n + 1):
        out[(i, 2)] = e(i)
        out[(i + 1, 1)] = tuple(-x for x in e(i))
    return out


def _gz_vertices(n: int) -> Dict[Vertex, Tuple[int, ...]]:
    order = [(i, j) for i in range(1, n + 2) for j in (1, 2)]
    dim = len(order)
    out = {(0, 2): tuple([0] * dim), (n + 2, 1): tuple([0] * dim)}
    for k, v in enumerate(order):
        vec = [0] * dim
        vec[k] = 1
        out[v] = tuple(vec)
    return out


def build_ladder_quiver(n: int, kind: str = BENDING) -> LadderQuiver:
    """Dual ladder quiver of the GZ (``kind="gz"``) or bending system.

    The bending quiver keeps all ``3n+3`` labels; the four that do not
    define facets in the equilateral case are flagged and linked to the
    label they coincide with.
    """
    if n < 1:
        raise ValidationError("n must be at least 1")
    if kind == BENDING:
        verts = _bending_vertices(n)
        # the unit box at the bottom left is removed
        boxes = frozenset((a, b) for a in range(n + 1) for b in range(2) if (a, b) != (0, 0))
    elif kind == GZ:
        verts = _gz_vertices(n)
        boxes = frozenset((a, b) for a in range(n + 1) for b in range(2))
    else:
        raise ValidationError(f"unknown quiver kind {kind!r}")
    twins = {}
    if kind == BENDING:
        twins = {(1, 0): (1, 1), (1, 1): (1, 0), (n, 2): (n + 1, 0), (n + 1, 0): (n, 2)}
    non_facets = set(equilateral_non_facet_labels(n)) if kind == BENDING else set()
    arrows = []
    for label in arrow_labels(n):
        t, h = arrow_endpoints(label)
        normal = tuple(a - b for a, b in zip(verts[t], verts[h]))
        arrows.append(Arrow(label, t, h, normal, label not in non_facets, twins.get(label)))
    return LadderQuiver(n, kind, boxes, verts, arrows)


# ---------------------------------------------------------------------------
# disk classes
# ---------------------------------------------------------------------------

def label_str(label: Label) -> str:
    return f"{label[0]}_{label[1]}"


@dataclass(frozen=True)
class DiskClass:
    """Rational combination of basic classes, optionally with a sphere family.

    ``sphere_family`` is ``None`` or the index ``k`` of the vanishing
    sphere ``alpha_k`` whose integer multiples may be added freely; they
    change neither boundary nor area.
    """

    n: int
    coeffs: Tuple[Tuple[Label, Fraction], ...]
    boundary: Tuple[Fraction, ...]
    area: Fraction
    maslov: Fraction
    sphere_family: Optional[int] = None
    kind: str = "basic"
    local_model: Optional[str] = None

    def coeff(self, label: Label) -> Fraction:
        return dict(self.coeffs).get(label, Fraction(0))

    @property
    def support(self) -> Tuple[Label, ...]:
        return tuple(l for l, _ in self.coeffs)

    @property
    def integral_boundary(self) -> bool:
        return all(x.denominator == 1 for x in self.boundary)

    def describe(self) -> str:
        parts = []
        for l, c in self.coeffs:
            parts.append(("" if c == 1 else fraction_str(c) + "*") + f"a{label_str(l)}")
        s = " + ".join(parts) if parts else "0"
        if self.sphere_family is not None:
            s += f" + c{self.sphere_family}*alpha{self.sphere_family}"
        return s

    def to_json(self) -> dict:
        return {
            "coeffs": {label_str(l): fraction_str(c) for l, c in self.coeffs},
            "boundary": [fraction_str(x) for x in self.boundary],
            "area": fraction_str(self.area),
            "maslov": fraction_str(self.maslov),
            "sphereFamily": None if self.sphere_family is None else f"alpha_{self.sphere_family}",
            "kind": self.kind,
            "localModel": self.local_model,
        }


def _clean(coeffs: Mapping[Label, Fraction]) -> Tuple[Tuple[Label, Fraction], ...]:
    return tuple(sorted((l, Fraction(c)) for l, c in coeffs.items() if c != 0))


def make_class(
    quiver: LadderQuiver,
    coeffs: Mapping[Label, object],
    r1=1,
    sphere_family: Optional[int] = None,
    kind: str = "basic",
    local_model: Optional[str] = None,
) -> DiskClass:
    """Class from coefficients on arrows; area uses ``l(u0) = r1`` for every arrow."""
    coeffs = {l: Fraction(c) for l, c in coeffs.items()}
    for l in coeffs:
        quiver[l]  # raises KeyError on unknown labels
    boundary = [Fraction(0)] * quiver.dim
    for l, c in coeffs.items():
        for k, g in enumerate(quiver[l].gradient):
            boundary[k] += c * g
    r1 = Fraction(r1)
    area = sum(coeffs.values(), Fraction(0)) * r1
    return DiskClass(
        quiver.n, _clean(coeffs), tuple(boundary), area, 2 * area / r1,
        sphere_family, kind, local_model,
    )


def basic_class(quiver: LadderQuiver, label: Label, r1=1) -> DiskClass:
    return make_class(quiver, {label: 1}, r1)


def delta(k: int, c: DiskClass, quiver: Optional[LadderQuiver] = None) -> Fraction:
    """``delta_k`` of the boundary, by counting where arrows cross the k-th diagonal.

    An arrow contributes ``+1`` when its head is ``(k,2)`` or its tail is
    ``(k+1,1)`` and ``-1`` when its head is ``(k+1,1)`` or its tail is
    ``(k,2)``.  This is computed from the quiver combinatorics alone and
    serves as an independent check on the stored boundary vectors.
    """
    if not 1 <= k <= c.n:
        raise ValidationError(f"k={k} out of range 1..{c.n}")
    quiver = quiver or build_ladder_quiver(c.n)
    total = Fraction(0)
    for label, coeff in c.coeffs:
        a = quiver[label]
        s = 0
        if a.head == (k, 2):
            s += 1
        if a.tail == (k + 1, 1):
            s += 1
        if a.head == (k + 1, 1):
            s -= 1
        if a.tail == (k, 2):
            s -= 1
        total += coeff * s
    return total


def delta_vector(c: DiskClass, quiver: Optional[LadderQuiver] = None) -> Tuple[Fraction, ...]:
    quiver = quiver or build_ladder_quiver(c.n)
    return tuple(delta(k, c, quiver) for k in range(1, c.n + 1))


def relation(i: int) -> Dict[Label, int]:
    """The relation ``beta_{i,0} + beta_{i,1} - beta_{i+1,0} - beta_{i,2}``."""
    return {(i, 0): 1, (i, 1): 1, (i + 1, 0): -1, (i, 2): -1}


def relation_range(n: int) -> range:
    return range(2, n)


def normal_form(c: DiskClass, quiver: Optional[LadderQuiver] = None, r1=None) -> DiskClass:
    """Eliminate ``beta_{i,2}`` (``2 <= i <= n-1``) using the relations."""
    coeffs = dict(c.coeffs)
    for i in relation_range(c.n):
        x = coeffs.pop((i, 2), Fraction(0))
        if x:
            # beta_{i,2} = beta_{i,0} + beta_{i,1} - beta_{i+1,0}
            for l, s in ((i, 0), 1), ((i, 1), 1), ((i + 1, 0), -1):
                coeffs[l] = coeffs.get(l, Fraction(0)) + s * x
    quiver = quiver or build_ladder_quiver(c.n)
    if r1 is None:
        # the relations have zero total weight, so the area scale is preserved
        weight = sum((x for _, x in c.coeffs), Fraction(0))
        r1 = c.area / weight if weight else 1
    return make_class(quiver, coeffs, r1, c.sphere_family, c.kind, c.local_model)


def h2_rank(n: int) -> int:
    """Rank of the span of the facet arrows modulo the relations."""
    if n < 2:
        raise ValidationError("n must be at least 2")
    quiver = build_ladder_quiver(n)
    facet_labels = [a.label for a in quiver.facet_arrows]
    rows = []
    for i in relation_range(n):
        rel = relation(i)
        rows.append([Fraction(rel.get(l, 0)) for l in facet_labels])
    return len(facet_labels) - (rank(rows) if rows else 0)


# ---------------------------------------------------------------------------
# classification of effective Maslov-two classes
# ---------------------------------------------------------------------------

def delta_patterns(n: int) -> List[Tuple[int, ...]]:
    """Boundary patterns allowed for Maslov-two effective classes.

    Either a single entry ``+-1`` or two adjacent entries ``+-1``; all
    other entries zero.
    """
    out = []
    for k in range(n):
        for s in (1, -1):
            v = [0] * n
            v[k] = s
            out.append(tuple(v))
    for k in range(n - 1):
        for s in (1, -1):
            for t in (1, -1):
                v = [0] * n
                v[k], v[k + 1] = s, t
                out.append(tuple(v))
    return out


def _vertex_solutions(columns: np.ndarray, rhs_list: Sequence[Sequence[int]]):
    """Vertices of ``{a >= 0 : A a = b}`` for every ``b`` in ``rhs_list``.

    Candidate bases are screened in floating point (one inverse per basis,
    shared by all right-hand sides); survivors are re-solved exactly.
    Returns one dict ``{coefficient tuple: support}`` per right-hand side.
    """
    m_rows, m_cols = columns.shape
    rhs = np.asarray(rhs_list, dtype=float).T
    exact_cols = [[Fraction(int(x)) for x in columns[:, j]] for j in range(m_cols)]
    seen: List[Dict[Tuple[Fraction, ...], Tuple[int, ...]]] = [dict() for _ in rhs_list]
    for subset in combinations(range(m_cols), m_rows):
        sub = columns[:, subset].astype(float)
        if abs(np.linalg.det(sub)) < 1e-9:
            continue
        xs = np.linalg.solve(sub, rhs)
        for k in np.nonzero(np.all(xs > -1e-9, axis=0))[0]:
            a = [[exact_cols[j][i] for j in subset] for i in range(m_rows)]
            sol = solve_linear(a, [Fraction(v) for v in rhs_list[k]])
            if sol is None or any(v < 0 for v in sol):
                continue
            full = [Fraction(0)] * m_cols
            for j, v in zip(subset, sol):
                full[j] = v
            seen[k][tuple(full)] = tuple(j for j, v in enumerate(full) if v)
    return seen


@lru_cache(maxsize=None)
def _equilateral_system(n: int):
    return caterpillar_system(LengthTuple.equilateral(n))


@lru_cache(maxsize=None)
def _support_face_codim(n: int, support: Tuple[Label, ...]) -> Optional[int]:
    sys = _equilateral_system(n)
    return face_codim_of(sys, [sys[l] for l in support])


@lru_cache(maxsize=None)
def _facets_through_strata(n: int) -> Tuple[Tuple[int, frozenset], ...]:
    """For ``g_1`` and ``g_n``: labels of the functionals vanishing on the stratum."""
    sys = _equilateral_system(n)
    out = []
    for k, stratum in ((1, [(1, 0), (1, 1)]), (n, [(n, 2), (n + 1, 0)])):
        implicit = implicit_equalities(sys, [sys[l] for l in stratum])
        out.append((k, frozenset(f.label for f in implicit) - set(stratum)))
    return tuple(out)


def _sphere_index(n: int, support: Sequence[Label]) -> Optional[int]:
    """Index k when the support lies among the facets through the stratum g_k."""
    for k, through in _facets_through_strata(n):
        if set(support) <= through:
            return k
    return None


LOCAL_MODELS = {2: "S2", 3: "SO3"}


def classify_effective(n: int) -> List[DiskClass]:
    """Effective Maslov-two classes of the equilateral caterpillar system.

    For every allowed boundary pattern ``p`` we enumerate the vertices of
    ``{a >= 0, sum a = 1, sum a_F dF = p}`` over the facet arrows, pass to
    the normal form modulo the relations and deduplicate.  Non-basic
    classes record the local model of the stratum where their support
    meets, and a sphere family when that stratum is one of the two
    codimension-two non-facet strata.
    """
    if n < 2 or n % 2:
        raise OddN(f"classification needs an even n >= 2, got {n}")
    quiver = build_ladder_quiver(n)
    facet_arrows = quiver.facet_arrows
    labels = [a.label for a in facet_arrows]
    grads = np.array([a.gradient for a in facet_arrows], dtype=int).T
    columns = np.vstack([grads, np.ones((1, len(labels)), dtype=int)])
    patterns = delta_patterns(n)
    solutions = _vertex_solutions(columns, [list(p) + [1] for p in patterns])
    # group vertices by their class modulo the relations
    groups: Dict[Tuple, List[DiskClass]] = {}
    for per_pattern in solutions:
        for sol, support in per_pattern.items():
            c = make_class(quiver, {labels[j]: sol[j] for j in support})
            groups.setdefault(normal_form(c, quiver, 1).coeffs, []).append(c)
    found: Dict[Tuple, DiskClass] = {}
    for key, members in groups.items():
        # prefer the normal form itself, then the smallest support
        members.sort(key=lambda c: (c.coeffs != key, len(c.coeffs), c.coeffs))
        found[key] = members[0]
    out = []
    for c in found.values():
        if len(c.coeffs) == 1:
            out.append(c)
            continue
        support = c.support
        codim = _support_face_codim(n, support)
        out.append(
            make_class(
                quiver, dict(c.coeffs), 1, _sphere_index(n, support), "nonbasic",
                LOCAL_MODELS.get(codim),
            )
        )
    return sorted(out, key=_class_order)


def _class_order(c: DiskClass):
    return (len(c.coeffs), c.coeffs)


def expected_family(n: int) -> List[Tuple[Dict[Label, Fraction], Optional[int]]]:
    """The effective-class list written out by hand, as an oracle."""
    half = Fraction(1, 2)
    out = [({(i, 0): 1}, None) for i in range(2, n + 1)]
    out += [({(i, 1): 1}, None) for i in range(2, n + 2)]
    out += [({(i, 2): 1}, None) for i in range(0, n)]
    out += [({(i, 0): half, (i, 1): half}, None) for i in range(2, n)]
    out.append(({(2, 0): half, (1, 2): half}, 1))
    out.append(({(n, 0): half, (n, 1): half}, n))
    return [({l: Fraction(c) for l, c in d.items()}, s) for d, s in out]
