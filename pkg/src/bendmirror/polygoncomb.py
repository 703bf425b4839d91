"""Triangulations of the labeled convex (n+3)-gon and Whitehead moves.

Vertices are labeled ``1..n+3`` counter-clockwise.  A diagonal is an
ordered pair ``(i, j)`` with ``i < j`` that is not a side of the polygon.
A triangulation is a set of ``n`` pairwise non-crossing diagonals, stored
as a sorted tuple so that equality is structural.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .errors import (
    BoundExceeded,
    DiagonalNotInTriangulation,
    InvalidTriangulation,
    ValidationError,
)

Diagonal = Tuple[int, int]
Triangle = Tuple[int, int, int]

DEFAULT_FLIP_BOUND = 6


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


def normalize_pair(i: int, j: int, n: int) -> Tuple[int, int]:
    """Reduce labels modulo ``n+3`` into ``1..n+3`` and order the pair."""
    m = n + 3
    a = (i - 1) % m + 1
    b = (j - 1) % m + 1
    return (a, b) if a < b else (b, a)


def is_side(i: int, j: int, n: int) -> bool:
    a, b = normalize_pair(i, j, n)
    return b - a == 1 or (a, b) == (1, n + 3)


def is_diagonal(d: Sequence[int], n: int) -> bool:
    i, j = d
    return 1 <= i < j <= n + 3 and j - i >= 2 and (i, j) != (1, n + 3)


def all_diagonals(n: int) -> List[Diagonal]:
    return [(i, j) for i in range(1, n + 4) for j in range(i + 2, n + 4) if (i, j) != (1, n + 3)]


def crosses(d1: Diagonal, d2: Diagonal) -> bool:
    """True when the two chords cross in the interior of the polygon."""
    (a, c), (b, d) = sorted([tuple(d1), tuple(d2)])
    return a < b < c < d


def parse_diagonal(text: str) -> Diagonal:
    try:
        a, b = (int(x) for x in text.strip().split("-"))
    except ValueError as exc:
        raise ValidationError(f"cannot parse diagonal {text!r}; expected 'a-b'") from exc
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Triangulation:
    """A triangulation of the (n+3)-gon by ``n`` non-crossing diagonals."""

    n: int
    diagonals: Tuple[Diagonal, ...]

    def __post_init__(self):
        diags = tuple(sorted(tuple(sorted(d)) for d in self.diagonals))
        object.__setattr__(self, "diagonals", diags)
        if self.n < 1:
            raise InvalidTriangulation("n must be at least 1")
        if len(set(diags)) != len(diags) or len(diags) != self.n:
            raise InvalidTriangulation(
                f"expected {self.n} distinct diagonals, got {list(diags)}"
            )
        for d in diags:
            if not is_diagonal(d, self.n):
                raise InvalidTriangulation(f"{d} is not a diagonal of the {self.n + 3}-gon")
        for d1, d2 in combinations(diags, 2):
            if crosses(d1, d2):
                raise InvalidTriangulation(f"diagonals {d1} and {d2} cross")

    @classmethod
    def parse(cls, n: int, text: str) -> "Triangulation":
        """Parse ``"caterpillar"`` or ``"1-3,1-4,..."``."""
        text = text.strip()
        if text == "caterpillar":
            return caterpillar_triangulation(n)
        diags = [parse_diagonal(p) for p in text.split(",") if p.strip()]
        return cls(n, tuple(diags))

    def __contains__(self, d) -> bool:
        return tuple(sorted(d)) in self.diagonals

    def __iter__(self) -> Iterator[Diagonal]:
        return iter(self.diagonals)

    @property
    def edges(self) -> List[Tuple[int, int]]:
        """Polygon sides followed by diagonals."""
        m = self.n + 3
        sides = [(i, i + 1) for i in range(1, m)] + [(1, m)]
        return sides + list(self.diagonals)

    def triangles(self) -> List[Triangle]:
        adj = {v: set() for v in range(1, self.n + 4)}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        tris = []
        for a in adj:
            for b in adj[a]:
                if b <= a:
                    continue
                for c in adj[a] & adj[b]:
                    if c > b:
                        tris.append((a, b, c))
        return sorted(tris)

    def adjacent_triangles(self, d: Diagonal) -> List[Triangle]:
        a, c = d
        return [t for t in self.triangles() if a in t and c in t]

    def key(self) -> str:
        return ",".join(f"{i}-{j}" for i, j in self.diagonals)

    def to_json(self) -> List[List[int]]:
        return [list(d) for d in self.diagonals]

    def __str__(self) -> str:
        return "{" + self.key() + "}"


def caterpillar_triangulation(n: int) -> Triangulation:
    """All diagonals through vertex 1: ``(1,3), (1,4), ..., (1,n+2)``."""
    if n < 1:
        raise ValidationError("n must be at least 1")
    return Triangulation(n, tuple((1, j) for j in range(3, n + 3)))


def _triangulate(vertices: Tuple[int, ...]) -> List[List[Diagonal]]:
    # vertices is a consecutive run of polygon labels; the chord
    # (first, last) is either a side or a diagonal handled by the caller
    if len(vertices) < 3:
        return [[]]
    a, b = vertices[0], vertices[-1]
    out = []
    for k in range(1, len(vertices) - 1):
        left = vertices[: k + 1]
        right = vertices[k:]
        extra = []
        if k >= 2:
            extra.append((a, vertices[k]))
        if len(vertices) - 1 - k >= 2:
            extra.append((vertices[k], b))
        for lt in _triangulate(left):
            for rt in _triangulate(right):
                out.append(extra + lt + rt)
    return out


def enumerate_triangulations(n: int) -> List[Triangulation]:
    """Every triangulation of the (n+3)-gon, sorted by diagonal list."""
    if n < 1:
        raise ValidationError("n must be at least 1")
    found = {tuple(sorted(ds)) for ds in _triangulate(tuple(range(1, n + 4)))}
    return [Triangulation(n, ds) for ds in sorted(found)]


def flip(t: Triangulation, d: Diagonal) -> Tuple[Triangulation, Diagonal]:
    """Whitehead move: replace ``d`` by the other diagonal of its quadrilateral."""
    d = tuple(sorted(d))
    if d not in t:
        raise DiagonalNotInTriangulation(f"{d} is not in {t}")
    new = opposite_diagonal(t, d)
    diags = tuple(x for x in t.diagonals if x != d) + (new,)
    return Triangulation(t.n, diags), new


def quadrilateral(t: Triangulation, d: Diagonal) -> Tuple[int, int, int, int]:
    """Sorted vertices of the two triangles adjacent to ``d``."""
    d = tuple(sorted(d))
    if d not in t:
        raise DiagonalNotInTriangulation(f"{d} is not in {t}")
    tris = t.adjacent_triangles(d)
    verts = sorted(set(tris[0]) | set(tris[1]))
    return tuple(verts)


def opposite_diagonal(t: Triangulation, d: Diagonal) -> Diagonal:
    a, c = tuple(sorted(d))
    others = [v for v in quadrilateral(t, d) if v not in (a, c)]
    return tuple(sorted(others))


def neighbors(t: Triangulation) -> List[Tuple[Diagonal, Triangulation, Diagonal]]:
    """All single flips of ``t`` as ``(removed, result, added)``, sorted."""
    out = []
    for d in t.diagonals:
        t2, new = flip(t, d)
        out.append((d, t2, new))
    return out


def flip_graph(n: int, bound: int = DEFAULT_FLIP_BOUND) -> nx.Graph:
    """Graph whose vertices are triangulations joined by single flips.

    Nodes are :class:`Triangulation` objects; each edge stores the removed
    and added diagonals under ``"flip"`` as seen from the smaller endpoint.
    """
    if n > bound:
        raise BoundExceeded(f"n={n} exceeds the flip-graph bound {bound}")
    g = nx.Graph()
    tris = enumerate_triangulations(n)
    g.add_nodes_from(tris)
    for t in tris:
        for d, t2, new in neighbors(t):
            if not g.has_edge(t, t2):
                g.add_edge(t, t2, flip=(d, new))
    return g


def flip_graph_json(g: nx.Graph) -> Dict[str, List[str]]:
    return {
        t.key(): sorted(s.key() for s in g.neighbors(t))
        for t in sorted(g.nodes, key=lambda x: x.diagonals)
    }


def flip_path_to_diagonal(
    start: Triangulation, target: Diagonal
) -> List[Tuple[Diagonal, Diagonal]]:
    """Shortest flip sequence from ``start`` to a triangulation containing ``target``.

    Breadth-first search exploring flips in lexicographic order of the
    removed diagonal, so the answer is deterministic.  Returns the list of
    ``(removed, added)`` pairs.
    """
    target = tuple(sorted(target))
    if not is_diagonal(target, start.n):
        raise ValidationError(f"{target} is not a diagonal of the {start.n + 3}-gon")
    if target in start:
        return []
    parent: Dict[Triangulation, Optional[Tuple[Triangulation, Diagonal, Diagonal]]] = {start: None}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        for d, t2, new in neighbors(t):
            if t2 in parent:
                continue
            parent[t2] = (t, d, new)
            if new == target:
                path = []
                cur = t2
                while parent[cur] is not None:
                    prev, rem, add = parent[cur]
                    path.append((rem, add))
                    cur = prev
                return path[::-1]
            queue.append(t2)
    raise ValidationError(f"no flip path reaches {target}")  # unreachable: graph is connected


def brute_force_triangulations(n: int) -> List[Triangulation]:
    """Reference enumeration over all n-subsets of diagonals."""
    out = []
    for ds in combinations(all_diagonals(n), n):
        if all(not crosses(a, b) for a, b in combinations(ds, 2)):
            out.append(Triangulation(n, ds))
    return sorted(out, key=lambda t: t.diagonals)
