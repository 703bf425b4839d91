"""Optional matplotlib figures for the command-line reports.

matplotlib is imported lazily and only when a figure is requested, so the
rest of the package works without the ``plot`` extra installed.
"""

from __future__ import annotations

from typing import Sequence

from .errors import ValidationError
from .exactalg import LaurentPoly


def _pyplot():
    try:
        import matplotlib
    except ImportError as exc:  # pragma: no cover - depends on the environment
        raise ValidationError("plotting needs matplotlib; install the 'plot' extra") from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path: str) -> str:
    # a fixed creation date keeps repeated runs byte-identical for svg/pdf
    metadata = {"Date": None} if str(path).endswith((".svg", ".pdf")) else None
    fig.savefig(path, metadata=metadata)
    import matplotlib.pyplot as plt

    plt.close(fig)
    return str(path)


def _hull(points: Sequence[Sequence[float]]):
    """Convex hull of planar points, counter-clockwise (monotone chain)."""
    pts = sorted(set(map(tuple, points)))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def plot_newton_polygon(w: LaurentPoly, path: str, title: str = "") -> str:
    """Scatter the exponents of a two-variable potential with their hull."""
    w = w.trimmed()
    if len(w.variables) != 2:
        raise ValidationError(
            f"a Newton polygon needs exactly 2 variables, this potential has {len(w.variables)}"
        )
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(4, 4))
    pts = [e for e, _ in w.items()]
    hull = _hull(pts)
    xs = [p[0] for p in hull] + [hull[0][0]]
    ys = [p[1] for p in hull] + [hull[0][1]]
    ax.fill(xs, ys, alpha=0.15)
    ax.plot(xs, ys, lw=1)
    for e, c in w.items():
        ax.plot(e[0], e[1], "o", color="k")
        if c != 1:
            ax.annotate(str(c), e, textcoords="offset points", xytext=(4, 4))
    ax.axhline(0, color="0.8", lw=0.5)
    ax.axvline(0, color="0.8", lw=0.5)
    ax.set_xlabel(w.variables[0])
    ax.set_ylabel(w.variables[1])
    ax.set_aspect("equal")
    ax.set_title(title or "Newton polygon")
    return _save(fig, path)


def plot_polytope_2d(sys, path: str, title: str = "") -> str:
    """Draw a two-dimensional half-space system through its vertices."""
    from .polytopes import vertices

    if sys.dim != 2:
        raise ValidationError(f"only 2-dimensional polytopes can be drawn, got dim {sys.dim}")
    verts = [tuple(float(x) for x in v) for v in vertices(sys)]
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(4, 4))
    hull = _hull(verts)
    if hull:
        xs = [p[0] for p in hull] + [hull[0][0]]
        ys = [p[1] for p in hull] + [hull[0][1]]
        ax.fill(xs, ys, alpha=0.25)
        ax.plot(xs, ys, "k-", lw=1)
    ax.set_xlabel(sys.var_names[0])
    ax.set_ylabel(sys.var_names[1])
    ax.set_aspect("equal")
    ax.set_title(title or "polytope")
    return _save(fig, path)


def plot_flip_graph(g, path: str, title: str = "") -> str:
    """Draw a flip graph with a seeded spring layout."""
    import networkx as nx

    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 6))
    pos = nx.spring_layout(g, seed=1)
    nx.draw_networkx_edges(g, pos, ax=ax, alpha=0.5)
    nx.draw_networkx_nodes(g, pos, ax=ax, node_size=40)
    if g.number_of_nodes() <= 14:
        nx.draw_networkx_labels(g, pos, {t: t.key() for t in g.nodes}, ax=ax, font_size=6)
    ax.set_axis_off()
    ax.set_title(title or "flip graph")
    return _save(fig, path)
