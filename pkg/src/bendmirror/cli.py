"""Command-line front end.

Every verb builds a JSON payload tagged with the output schema, plus an
optional table used by ``--format csv`` and ``--format pretty``.  Library
errors are caught here and mapped to exit status 2 (bad input) or 3
(a computation failed), with ``{"error": {"code", "message"}}`` on stdout
and a one-line diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from . import SCHEMA, __version__
from .errors import BendMirrorError, ValidationError
from .exactalg import LaurentPoly, as_fraction, fraction_str

log = logging.getLogger("bendmirror")

VERBS = ("potential", "mutate", "classify", "polytope", "kappa", "simulate", "fiber", "flipgraph", "check")


@dataclass
class Output:
    payload: Dict[str, Any]
    header: List[str] = field(default_factory=list)
    rows: List[List[Any]] = field(default_factory=list)
    text: Optional[str] = None


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as validation errors."""

    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# value helpers
# ---------------------------------------------------------------------------

def _round(x: float, digits: int = 10) -> float:
    y = round(float(x), digits)
    return 0.0 if y == 0 else y


def _complex_pair(z: complex, digits: int = 10) -> List[float]:
    return [_round(z.real, digits), _round(z.imag, digits)]


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError as exc:
        raise ValidationError(f"not a complex number: {text!r}") from exc


def _parse_range(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError as exc:
        raise ValidationError(f"expected a range 'lo:hi', got {text!r}") from exc
    if hi < lo:
        raise ValidationError("empty kappa range")
    return range(lo, hi + 1)


def _split(text: str) -> List[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def _length_tuple(text: Optional[str], n: Optional[int]):
    from .polytopes import LengthTuple

    if text:
        r = LengthTuple.parse(text)
        if n is not None and r.n != n:
            raise ValidationError(f"--r has {len(r.r)} sides but --n {n} needs {n + 3}")
        return r
    if n is None:
        raise ValidationError("give --n or --r")
    return LengthTuple.equilateral(n)


def _triangulation(n: int, spec: str):
    from .polygoncomb import Triangulation

    return Triangulation.parse(n, spec)


def _poly_output(w: LaurentPoly, extra: Optional[Dict[str, Any]] = None) -> Output:
    payload = {"potential": w.to_json(), "text": str(w)}
    payload.update(extra or {})
    header = list(w.variables) + ["coeff"]
    rows = [list(e) + [fraction_str(c)] for e, c in w.items()]
    return Output(payload, header, rows, f"W = {w}")


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------

def _chart_potential(cm, chart) -> LaurentPoly:
    if chart.frozen_policy == cm.KEEP_SYMBOLIC:
        return cm.w_mr(chart)
    return cm.w_bend_in_chart(chart)


def cmd_potential(args) -> Output:
    from . import clustermirror as cm
    from . import potentials
    from .crit import NewtonConfig

    config = NewtonConfig(seed=args.seed)
    if args.pentagon:
        w = potentials.pentagon_potential(args.pentagon, use_pipeline=args.pipeline, config=config)
        out = _poly_output(w, {"source": "pipeline" if args.pipeline else "stored", "r": args.pentagon})
        if args.plot:
            from .plotting import plot_newton_polygon

            out.payload["plot"] = plot_newton_polygon(w, args.plot, f"r = ({args.pentagon})")
        return out
    if args.n is None:
        raise ValidationError("potential needs --n or --pentagon")
    source = args.source
    if source == "formula":
        w = potentials.caterpillar_potential(args.n)
    elif source == "cluster":
        chart = cm.chart_from_spec(args.n, args.chart, args.policy)
        w = _chart_potential(cm, chart)
        if args.chart == "caterpillar" and args.policy == cm.SET_TO_ONE:
            w = w.rename(cm.caterpillar_renaming(args.n))
    elif source == "gz-reduce":
        w = potentials.equivariant_reduce(potentials.gz_potential(args.n), args.n)
    else:
        w = potentials.classes_potential(args.n, config)
    out = _poly_output(w, {"source": source, "n": args.n})
    if args.plot:
        from .plotting import plot_newton_polygon

        out.payload["plot"] = plot_newton_polygon(w, args.plot, f"n = {args.n}, {source}")
    return out


def cmd_mutate(args) -> Output:
    from . import clustermirror as cm
    from .polygoncomb import parse_diagonal

    chart = cm.chart_from_spec(args.n, args.chart, args.policy)
    w = _chart_potential(cm, chart)
    flips = [parse_diagonal(d) for spec in args.flip for d in _split(spec)]
    if not flips:
        raise ValidationError("mutate needs at least one --flip a-c")
    moved, final = cm.transport(w, chart, flips)
    direct = _chart_potential(cm, final)
    return _poly_output(moved, {
        "n": args.n,
        "from": chart.triangulation.key(),
        "flips": [f"{a}-{c}" for a, c in flips],
        "chart": final.triangulation.key(),
        "agreesWithDirect": moved == direct,
    })


def cmd_classify(args) -> Output:
    from .diskclasses import classify_effective

    classes = classify_effective(args.n)
    items = [c.to_json() for c in classes]
    header = ["class", "boundary", "area", "maslov", "sphereFamily", "localModel"]
    rows = [
        [c.describe(), " ".join(j["boundary"]), j["area"], j["maslov"], j["sphereFamily"] or "", j["localModel"] or ""]
        for c, j in zip(classes, items)
    ]
    return Output({"n": args.n, "classes": items}, header, rows)


def cmd_polytope(args) -> Output:
    from . import polytopes

    r = _length_tuple(args.r, args.n)
    t = _triangulation(r.n, args.chart)
    from .polygoncomb import caterpillar_triangulation

    if t == caterpillar_triangulation(r.n):
        sys_ = polytopes.caterpillar_system(r)
        chart = "caterpillar"
    else:
        sys_ = polytopes.bending_polytope(t, r)
        chart = t.key()
    payload = sys_.to_json()
    facet_set = {id(f) for f in polytopes.facets(sys_)}
    payload.update({
        "r": r.to_json(),
        "chart": chart,
        "facets": [f.label_str for f in sys_.functionals if id(f) in facet_set],
        "feasible": sys_.is_feasible(),
    })
    header = ["label", "const"] + list(sys_.var_names) + ["facet"]
    rows = [[f.label_str, fraction_str(f.const)] + [fraction_str(c) for c in f.coeffs] + [id(f) in facet_set]
            for f in sys_.functionals]
    out = Output(payload, header, rows)
    if args.plot:
        from .plotting import plot_polytope_2d

        payload["plot"] = plot_polytope_2d(sys_, args.plot, f"r = ({','.join(r.to_json())})")
    return out


def cmd_kappa(args) -> Output:
    from . import crit
    from .potentials import local_model_family

    model = {"s2": "S2", "so3": "SO3"}[args.model]
    default = crit.S2_EIGENVALUES if model == "S2" else crit.SO3_EIGENVALUES
    allowed = default
    if args.allowed:
        allowed = crit.EigenvalueSet(tuple(_parse_complex(v) for v in _split(args.allowed)), "user")
    config = crit.NewtonConfig(seed=args.seed)
    family = local_model_family(model)
    found = crit.solve_kappa(family, allowed, _parse_range(args.range), config)
    values = []
    for k in found:
        vals = crit.critical_values(family.at(k), config)
        values.append({"kappa": k, "values": [_complex_pair(v) for v in vals]})
    payload = {
        "model": model,
        "allowed": [_complex_pair(v) for v in allowed.values],
        "kappa": found,
        "critical_values": values,
    }
    rows = [[e["kappa"], " ".join(f"{re}{im:+}i" for re, im in e["values"])] for e in values]
    return Output(payload, ["kappa", "critical_values"], rows)


def _parse_bends(text: str):
    from .polygoncomb import parse_diagonal

    out = []
    for part in _split(text):
        try:
            d, th = part.split(":")
            out.append((parse_diagonal(d), float(th)))
        except ValueError as exc:
            raise ValidationError(f"expected 'a-c:theta', got {part!r}") from exc
    return out


def _floats(text: str, what: str) -> List[float]:
    try:
        return [float(as_fraction(x)) for x in _split(text)]
    except BendMirrorError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"cannot parse {what} {text!r}") from exc


def _config_payload(c, t) -> Dict[str, Any]:
    from .errors import DegenerateAtBoundary, DegenerateAxis
    from .polygonsim import dihedral_angles, measured_lengths

    payload = {
        "vectors": [[_round(x, 12) for x in v] for v in c.vectors],
        "closureResidual": _round(c.closure_residual(), 12),
        "lengthResidual": _round(c.length_residual(), 12),
        "diagonals": {f"{a}-{b}": _round(x, 12) for (a, b), x in measured_lengths(c, t).items()},
    }
    try:
        payload["angles"] = {f"{a}-{b}": _round(x, 12) for (a, b), x in dihedral_angles(c, t).items()}
    except (DegenerateAtBoundary, DegenerateAxis):
        payload["angles"] = None
    return payload


def cmd_simulate(args) -> Output:
    from . import polygonsim

    r = _length_tuple(args.r, None)
    t = _triangulation(r.n, args.chart)
    lengths = _floats(args.lengths, "lengths")
    if len(lengths) != r.n:
        raise ValidationError(f"--lengths needs {r.n} values, one per diagonal of {t}")
    angles = None
    if args.angles:
        a = _floats(args.angles, "angles")
        if len(a) != r.n:
            raise ValidationError(f"--angles needs {r.n} values")
        angles = dict(zip(t.diagonals, a))
    c = polygonsim.reconstruct_polygon(r, t, dict(zip(t.diagonals, lengths)), angles,
                                       allow_boundary=args.allow_boundary)
    bends = _parse_bends(args.bend) if args.bend else []
    for d, th in bends:
        c = polygonsim.bend(c, d, th)
    payload = {"r": r.to_json(), "chart": t.key(), "bends": [[f"{a}-{b}", th] for (a, b), th in bends]}
    payload.update(_config_payload(c, t))
    rows = [[i + 1] + v for i, v in enumerate(payload["vectors"])]
    return Output(payload, ["edge", "x", "y", "z"], rows)


def cmd_fiber(args) -> Output:
    from . import polygonsim

    r = _length_tuple(args.r, None)
    t = _triangulation(r.n, args.chart)
    lengths = [as_fraction(x) for x in _split(args.lengths)]
    if len(lengths) != r.n:
        raise ValidationError(f"--lengths needs {r.n} values, one per diagonal of {t}")
    ft = polygonsim.fiber_topology(r, t, dict(zip(t.diagonals, lengths)))
    payload = {"r": r.to_json(), "chart": t.key(), "lengths": [fraction_str(x) for x in lengths]}
    payload.update(ft.to_json())
    return Output(payload, ["m1", "m2", "m3", "type"], [[ft.m1, ft.m2, ft.m3, ft.describe()]])


def cmd_flipgraph(args) -> Output:
    import networkx as nx

    from .polygoncomb import flip_graph, flip_graph_json

    g = flip_graph(args.n)
    adj = flip_graph_json(g)
    degrees = sorted({d for _, d in g.degree()})
    payload = {
        "n": args.n,
        "nodes": g.number_of_nodes(),
        "edges": g.number_of_edges(),
        "connected": nx.is_connected(g),
        "degrees": degrees,
        "adjacency": adj,
    }
    rows = [[k, " ".join(v)] for k, v in adj.items()]
    out = Output(payload, ["triangulation", "neighbors"], rows)
    if args.plot:
        from .plotting import plot_flip_graph

        payload["plot"] = plot_flip_graph(g, args.plot, f"flip graph, n = {args.n}")
    return out


def cmd_check(args) -> Output:
    from .acceptance import CHECKS, run_check

    wanted = [int(x) for x in _split(args.criteria)] if args.criteria else [k for k, _, _ in CHECKS]
    results = []
    for k in wanted:
        try:
            results.append(run_check(k))
        except KeyError as exc:
            raise ValidationError(f"no criterion {k}") from exc
    payload = {"passed": all(r.passed for r in results), "results": [r.to_json() for r in results]}
    rows = [[r.number, r.title, "PASS" if r.passed else "FAIL", f"{r.seconds:.2f}", r.detail] for r in results]
    text = "\n".join(r.line() for r in results)
    text += f"\n{sum(r.passed for r in results)}/{len(results)} criteria passed"
    return Output(payload, ["criterion", "title", "status", "seconds", "detail"], rows, text)


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    p.add_argument("--seed", type=int, default=None,
                   help="seed for Newton starts and sampling (default: a fixed library seed)")
    p.add_argument("--plot", metavar="PATH", help="also write a matplotlib figure to PATH")
    p.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bendmirror", description="Bending systems, cluster charts and disk potentials.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--check", action="store_true",
                        help="run the acceptance suite (same as the 'check' verb)")
    sub = parser.add_subparsers(dest="verb", parser_class=_Parser, metavar="VERB")

    p = sub.add_parser("potential", parents=[_common()], help="disk potential as a Laurent polynomial")
    p.add_argument("--n", type=int)
    p.add_argument("--source", choices=("formula", "cluster", "gz-reduce", "classes"), default="formula")
    p.add_argument("--chart", default="caterpillar", help="'caterpillar' or a list like 1-3,1-4")
    p.add_argument("--policy", choices=("set_to_one", "keep_symbolic"), default="set_to_one")
    p.add_argument("--pentagon", metavar="R", help="pentagon length tuple such as 1,1,3,3,3")
    p.add_argument("--pipeline", action="store_true", help="compute the pentagon potential from scratch")
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("mutate", parents=[_common()], help="transport W_Bend along flips")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--chart", default="caterpillar")
    p.add_argument("--flip", action="append", default=[], help="diagonal a-c to flip; repeatable")
    p.add_argument("--policy", choices=("set_to_one", "keep_symbolic"), default="set_to_one")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("classify", parents=[_common()], help="effective Maslov-2 disk classes (even n)")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("polytope", parents=[_common()], help="H-representation of a bending polytope")
    p.add_argument("--n", type=int)
    p.add_argument("--r", help="side lengths, default all ones")
    p.add_argument("--chart", default="caterpillar")
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("kappa", parents=[_common()], help="pin kappa by the critical-value criterion")
    p.add_argument("--model", choices=("s2", "so3"), required=True)
    p.add_argument("--allowed", help="comma-separated allowed critical values, e.g. 0,4,-4 or 4i")
    p.add_argument("--range", default="-10:10", help="inclusive integer range lo:hi")
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("simulate", parents=[_common()], help="build a polygon and bend it")
    p.add_argument("--r", required=True)
    p.add_argument("--chart", default="caterpillar")
    p.add_argument("--lengths", required=True, help="diagonal lengths in sorted diagonal order")
    p.add_argument("--angles", help="dihedral angles in the same order")
    p.add_argument("--bend", help="bends to apply, e.g. 1-3:0.5,1-4:1.2")
    p.add_argument("--allow-boundary", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fiber", parents=[_common()], help="topology of the fiber over a length vector")
    p.add_argument("--r", required=True)
    p.add_argument("--chart", default="caterpillar")
    p.add_argument("--lengths", required=True)
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("flipgraph", parents=[_common()], help="triangulations and flips of the (n+3)-gon")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_flipgraph)

    p = sub.add_parser("check", parents=[_common()], help="run the acceptance suite")
    p.add_argument("--criteria", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_check, format="pretty")
    return parser


def render(out: Output, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"schema": SCHEMA, **out.payload}, indent=2, sort_keys=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if out.header:
            w.writerow(out.header)
            w.writerows(out.rows)
        else:
            w.writerow(["key", "value"])
            for k, v in out.payload.items():
                w.writerow([k, json.dumps(v)])
        return buf.getvalue()
    if out.text is not None:
        return out.text + "\n"
    if out.header:
        cells = [out.header] + [[str(x) for x in row] for row in out.rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(out.header))]
        return "".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in cells)
    return json.dumps(out.payload, indent=2) + "\n"


def run_command(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, run the verb and write its output; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser = build_parser()
        if argv and argv[0] == "--check":
            argv = ["check"] + argv[1:]
        args = parser.parse_args(argv)
        if args.verb is None:
            parser.print_help(stdout)
            return 0
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=stderr,
                            format="%(name)s: %(message)s")
        if args.seed is None:
            from .crit import DEFAULT_SEED

            args.seed = DEFAULT_SEED
        out = args.func(args)
        stdout.write(render(out, args.format))
        if args.verb == "check" and not out.payload["passed"]:
            return 1
        return 0
    except BendMirrorError as exc:
        stdout.write(json.dumps({"schema": SCHEMA, "error": exc.as_dict()}) + "\n")
        stderr.write(f"bendmirror: {exc.code}: {exc.message}\n")
        return exc.exit_status


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run_command(argv))
