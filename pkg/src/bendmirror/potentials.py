"""Disk potential functions.

Four independent routes produce the potential of the monotone caterpillar
fiber for even ``n``:

* the closed formula (:func:`caterpillar_potential`);
* the cluster chart of the caterpillar triangulation
  (:func:`bendmirror.clustermirror.w_bend_in_chart`, renamed);
* the GZ potential reduced along the torus that collapses it to the
  polygon space (:func:`equivariant_reduce` of :func:`gz_potential`);
* the classified effective classes with counting invariants
  (:func:`potential_from_classes`).

The module also stores the local-model families whose free coefficient is
fixed by a critical-value criterion, and the pentagon potentials of a few
non-equilateral monotone tuples together with a pipeline recomputing them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from ._lp import ExactLP
from .diskclasses import GZ, DiskClass, build_ladder_quiver
from .errors import (
    ComputationError,
    NoCommonLevelPoint,
    NonIntegralBoundary,
    OddN,
    UnsupportedTuple,
    ValidationError,
)
from .exactalg import LaurentFraction, LaurentPoly, solve_linear, substitute
from .polytopes import (
    LengthTuple,
    caterpillar_system,
    common_level_point,
    face_codim_of,
    facets,
    is_generic,
)

Count = Union[int, Fraction, str]


def z_vars(n: int) -> Tuple[str, ...]:
    return tuple(f"z{j}" for j in range(1, n + 1))


def _mono(exps: Mapping[str, int], coeff=1, variables=()) -> LaurentPoly:
    return LaurentPoly.monomial(exps, coeff, variables)


def exponent_monomial(exponent: Sequence[int], variables: Sequence[str], coeff=1) -> LaurentPoly:
    return _mono({v: int(e) for v, e in zip(variables, exponent)}, coeff, variables)


# ---------------------------------------------------------------------------
# closed formula
# ---------------------------------------------------------------------------

def caterpillar_potential(n: int) -> LaurentPoly:
    """``z1 + 2/z1 + zn + 2/zn + sum_j (zj/zj+1 + zj+1/zj + 1/(zj zj+1))``."""
    if n < 2 or n % 2:
        raise OddN(f"the closed formula is stated for even n >= 2, got n={n}")
    vs = z_vars(n)
    z = {v: LaurentPoly.var(v, vs) for v in vs}
    w = LaurentPoly.zero(vs)
    for end in (vs[0], vs[-1]):
        w = w + z[end] + 2 * _mono({end: -1}, 1, vs)
    for a, b in zip(vs, vs[1:]):
        w = w + _mono({a: 1, b: -1}, 1, vs) + _mono({a: -1, b: 1}, 1, vs) + _mono({a: -1, b: -1}, 1, vs)
    return w


# ---------------------------------------------------------------------------
# GZ potential and its reduction
# ---------------------------------------------------------------------------

def y_var(i: int, j: int) -> str:
    return f"y{i}_{j}"


def gz_variables(n: int) -> Tuple[str, ...]:
    return tuple(y_var(i, j) for i in range(1, n + 2) for j in (1, 2))


def gz_potential(n: int) -> LaurentPoly:
    """Sum over arrows of the dual GZ ladder of ``y_head / y_tail``.

    The phantom vertices ``(0,2)`` and ``(n+2,1)`` carry the value one.
    """
    quiver = build_ladder_quiver(n, GZ)
    vs = gz_variables(n)
    phantoms = {(0, 2), (n + 2, 1)}
    w = LaurentPoly.zero(vs)
    for a in quiver.arrows:
        exps: Dict[str, int] = {}
        if a.head not in phantoms:
            exps[y_var(*a.head)] = exps.get(y_var(*a.head), 0) + 1
        if a.tail not in phantoms:
            exps[y_var(*a.tail)] = exps.get(y_var(*a.tail), 0) - 1
        w = w + _mono(exps, 1, vs)
    return w


def equivariant_bindings(n: int) -> Dict[str, LaurentFraction]:
    """``y_{i,1} -> 1/y_{i-1,2}`` (``y_{0,2} = 1``) and ``y_{n+1,2} -> 1``."""
    out: Dict[str, LaurentFraction] = {y_var(1, 1): LaurentFraction(1)}
    for i in range(2, n + 2):
        out[y_var(i, 1)] = LaurentFraction(1, LaurentPoly.var(y_var(i - 1, 2)))
    out[y_var(n + 1, 2)] = LaurentFraction(1)
    return out


def equivariant_reduce(w: LaurentPoly, n: int) -> LaurentPoly:
    """Restrict a GZ-chart potential to the toric reduction and rename to ``z``."""
    expected = set(gz_variables(n))
    if not set(w.used_variables()) <= expected:
        raise ValidationError(f"unexpected variables {sorted(set(w.used_variables()) - expected)}")
    reduced = substitute(w.with_variables(gz_variables(n)), equivariant_bindings(n))
    renaming = {y_var(i, 2): f"z{i}" for i in range(1, n + 1)}
    return reduced.rename(renaming).with_variables(z_vars(n))


# ---------------------------------------------------------------------------
# potentials from classes
# ---------------------------------------------------------------------------

def kappa_var(k: int) -> str:
    return f"kappa{k}"


def default_count(c: DiskClass) -> Count:
    """One on basic classes; a symbolic ``kappa_k`` slot on the others.

    Non-basic classes of Maslov index two have boundary ``-e_k`` and the
    slot is named after that ``k``.
    """
    if len(c.coeffs) == 1:
        return 1
    nz = [k for k, x in enumerate(c.boundary, start=1) if x]
    return kappa_var(nz[0]) if len(nz) == 1 else "kappa_" + "_".join(map(str, nz))


@dataclass
class PotentialAssembly:
    """Classes with counting invariants; :meth:`potential` forms the sum."""

    classes: List[DiskClass]
    counts: Dict[Tuple, Count] = field(default_factory=dict)
    variables: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.variables and self.classes:
            self.variables = z_vars(self.classes[0].n)
        for c in self.classes:
            self.counts.setdefault(c.coeffs, default_count(c))

    def potential(self) -> LaurentPoly:
        w = LaurentPoly.zero(self.variables)
        for c in self.classes:
            if not c.integral_boundary:
                raise NonIntegralBoundary(f"class {c.describe()} has a fractional boundary")
            count = self.counts[c.coeffs]
            mono = exponent_monomial([int(x) for x in c.boundary], self.variables)
            if isinstance(count, str):
                w = w + mono * LaurentPoly.var(count)
            elif count:
                w = w + mono * Fraction(count)
        return w


def potential_from_classes(classes: Sequence[DiskClass], counts: Optional[Mapping] = None,
                           variables: Sequence[str] = ()) -> LaurentPoly:
    """``sum n_beta z^{boundary}``; counts default to :func:`default_count`."""
    keyed = {}
    for k, v in (counts or {}).items():
        keyed[k.coeffs if isinstance(k, DiskClass) else k] = v
    return PotentialAssembly(list(classes), keyed, tuple(variables)).potential()


def assign_kappas(w: LaurentPoly, values: Mapping[str, int]) -> LaurentPoly:
    """Replace symbolic ``kappa`` slots by numbers and drop those variables."""
    out = substitute(w, {k: LaurentFraction(Fraction(v)) for k, v in values.items()})
    rest = tuple(v for v in out.variables if v not in values)
    return out.with_variables(rest)


def kappa_slot_variables(w: LaurentPoly) -> List[str]:
    return [v for v in w.used_variables() if v.startswith("kappa")]


# ---------------------------------------------------------------------------
# local models
# ---------------------------------------------------------------------------

S2 = "S2"
SO3 = "SO3"


@dataclass(frozen=True)
class KappaFamily:
    """``base + kappa * slot``: a potential with one unknown coefficient."""

    base: LaurentPoly
    slot: LaurentPoly
    domain: str = ""

    def at(self, kappa) -> LaurentPoly:
        return self.base + self.slot * Fraction(kappa)

    def symbolic(self, name: str = "kappa") -> LaurentPoly:
        return self.base + self.slot * LaurentPoly.var(name)


def local_model_family(model: str) -> KappaFamily:
    """The two local-model families in variables ``y1, y2(, y3)``."""
    model = model.upper()
    if model == S2:
        vs = ("y1", "y2")
        base = _mono({"y1": 1}, 1, vs) + _mono({"y1": -1, "y2": -1}, 1, vs) + _mono({"y1": -1, "y2": 1}, 1, vs)
        return KappaFamily(base, _mono({"y1": -1}, 1, vs), S2)
    if model == SO3:
        vs = ("y1", "y2", "y3")
        base = (
            _mono({"y2": 1}, 1, vs)
            + _mono({"y3": 1, "y2": -1}, 1, vs)
            + _mono({"y1": 1, "y2": -1}, 1, vs)
            + _mono({"y1": -1, "y2": -1}, 1, vs)
            + _mono({"y2": -1, "y3": -1}, 1, vs)
        )
        return KappaFamily(base, _mono({"y2": -1}, 1, vs), SO3)
    raise ValidationError(f"unknown local model {model!r}; expected S2 or SO3")


def local_model_potential(model: str, kappa: Union[int, Fraction, str] = "kappa") -> LaurentPoly:
    """The family at a given ``kappa``, or with a symbolic slot for a string."""
    fam = local_model_family(model)
    if isinstance(kappa, str):
        return fam.symbolic(kappa)
    return fam.at(kappa)


def transported_s2_family(b: Sequence[int], c: Sequence[int], variables: Sequence[str]) -> KappaFamily:
    """S2 model moved to an orbifold corner with primitive normals ``b, c``.

    The result is ``z^b + z^c + z^{-m} + kappa z^{m}`` with ``m = (b+c)/2``;
    when ``|det(b, c)| = 2`` the vectors ``m`` and ``b`` form a lattice
    basis, so this is the S2 family after a unimodular change of variables.
    """
    m = [(x + y) // 2 for x, y in zip(b, c)]
    base = (
        exponent_monomial(b, variables)
        + exponent_monomial(c, variables)
        + exponent_monomial([-x for x in m], variables)
    )
    return KappaFamily(base, exponent_monomial(m, variables), S2)


def local_model_kappas(classes: Sequence[DiskClass], config=None) -> Dict[str, int]:
    """Values of the ``kappa`` slots from each class's local model."""
    from . import crit

    allowed = {S2: crit.S2_EIGENVALUES, SO3: crit.SO3_EIGENVALUES}
    solved: Dict[str, int] = {}
    out: Dict[str, int] = {}
    for c in classes:
        slot = default_count(c)
        if not isinstance(slot, str):
            continue
        if c.local_model not in allowed:
            raise UnsupportedTuple(f"class {c.describe()} has no local model")
        if c.local_model not in solved:
            ks = crit.solve_kappa(local_model_family(c.local_model), allowed[c.local_model], config=config)
            if len(ks) != 1:
                raise ComputationError(f"kappa for {c.local_model} is not unique: {ks}")
            solved[c.local_model] = ks[0]
        out[slot] = solved[c.local_model]
    return out


def classes_potential(n: int, config=None) -> LaurentPoly:
    """Potential from the classified classes, counts one and kappa from local models."""
    from .diskclasses import classify_effective

    classes = classify_effective(n)
    w = potential_from_classes(classes)
    return assign_kappas(w, local_model_kappas(classes, config)).with_variables(z_vars(n))


# ---------------------------------------------------------------------------
# Newton polytopes
# ---------------------------------------------------------------------------

def newton_vertices(w: LaurentPoly) -> List[Tuple[int, ...]]:
    """Exponent vectors that are vertices of the Newton polytope (exact LP)."""
    pts = sorted(w.terms)
    out = []
    for p in pts:
        others = [q for q in pts if q != p]
        if not others:
            out.append(p)
            continue
        k = len(others)
        # is p a convex combination of the others?
        ineqs = [([Fraction(int(i == j)) for j in range(k)], Fraction(0)) for i in range(k)]
        eqs = [([Fraction(q[d]) for q in others], Fraction(-p[d])) for d in range(len(p))]
        eqs.append(([Fraction(1)] * k, Fraction(-1)))
        if not ExactLP(k, ineqs, eqs).feasible:
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# pentagon potentials
# ---------------------------------------------------------------------------

PENTAGON_TUPLES = ("1,1,3,3,3", "1,1,3,2,2", "2,2,2,4,4")


def _y(exps: Mapping[str, int], coeff=1) -> LaurentPoly:
    return _mono(exps, coeff, ("y1", "y2"))


def stored_pentagon_potential(key: str) -> LaurentPoly:
    """The three pentagon potentials, stored as plain text."""
    core = _y({"y1": 1}) + _y({"y2": 1, "y1": -1}) + _y({"y1": -1}, 2) + _y({"y1": -1, "y2": -1})
    if key == "1,1,3,3,3":
        return core
    if key == "1,1,3,2,2":
        return core + _y({"y2": 1})
    if key == "2,2,2,4,4":
        return core + _y({"y2": -1}, 2) + _y({"y1": 1, "y2": -1})
    raise UnsupportedTuple(f"no stored potential for r=({key})")


def _tuple_key(r: LengthTuple) -> str:
    return ",".join(str(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}" for x in r.r)


@dataclass
class PentagonPipelineResult:
    r: LengthTuple
    center: Tuple[Fraction, ...]
    level: Fraction
    facet_labels: List
    basic_exponents: List[Tuple[int, ...]]
    candidates: List[Dict]
    potential: LaurentPoly


def _det2(b, c) -> int:
    return b[0] * c[1] - b[1] * c[0]


def pentagon_pipeline(r: LengthTuple, config=None) -> PentagonPipelineResult:
    """Recompute a pentagon potential from the polytope.

    Steps: facets and the common-level point of the caterpillar polytope;
    one basic class per facet; Maslov-two candidates as vertices of the
    class-coefficient polytope over every lattice boundary; for candidates
    meeting at a corner with ``|det| = 2`` (a Lagrangian sphere stratum)
    the transported S2 model fixes the count via :func:`crit.solve_kappa`.
    Candidates with no local model, or with count zero, are dropped.
    """
    from . import crit  # imported here to keep module import order acyclic

    if r.n != 2:
        raise UnsupportedTuple("the pipeline handles pentagons (n = 2) only")
    if not is_generic(r):
        raise UnsupportedTuple("the pipeline needs a generic tuple")
    sys = caterpillar_system(r)
    try:
        center, level = common_level_point(sys)
    except NoCommonLevelPoint as exc:
        raise UnsupportedTuple(f"no monotone fiber: {exc.message}") from exc
    fs = facets(sys)
    grads = [tuple(int(x) for x in f.coeffs) for f in fs]
    vs = ("y1", "y2")
    w = LaurentPoly.zero(vs)
    for g in grads:
        w = w + exponent_monomial(g, vs)
    lo = [min(g[d] for g in grads) for d in range(2)]
    hi = [max(g[d] for g in grads) for d in range(2)]
    candidates = []
    for p in product(range(lo[0], hi[0] + 1), range(lo[1], hi[1] + 1)):
        if p == (0, 0) or p in grads:
            continue
        for support, coeffs in _pentagon_vertices(grads, p):
            entry = {"boundary": p, "support": [fs[j].label for j in support],
                     "coeffs": coeffs, "kappa": 0, "model": None}
            if len(support) == 2:
                b, c = grads[support[0]], grads[support[1]]
                corner = face_codim_of(sys, [fs[j] for j in support])
                if abs(_det2(b, c)) == 2 and corner == 2:
                    fam = transported_s2_family(b, c, vs)
                    kappas = crit.solve_kappa(fam, crit.S2_EIGENVALUES, config=config)
                    entry["model"] = S2
                    entry["kappa"] = kappas[0] if len(kappas) == 1 else None
            candidates.append(entry)
    for entry in candidates:
        if entry["kappa"]:
            w = w + exponent_monomial(entry["boundary"], vs, entry["kappa"])
    return PentagonPipelineResult(r, tuple(center), level, [f.label for f in fs], grads, candidates, w)


def _pentagon_vertices(grads: List[Tuple[int, ...]], p: Tuple[int, int]):
    """Vertices of ``{a >= 0, sum a = 1, sum a_j g_j = p}`` (exact, tiny)."""
    rows = 3
    out = {}
    for subset in combinations(range(len(grads)), rows):
        a = [[Fraction(grads[j][d]) for j in subset] for d in range(2)] + [[Fraction(1)] * rows]
        sol = solve_linear(a, [Fraction(p[0]), Fraction(p[1]), Fraction(1)])
        if sol is None or any(x < 0 for x in sol):
            continue
        support = tuple(j for j, x in zip(subset, sol) if x)
        out[support] = {j: x for j, x in zip(subset, sol) if x}
    # a support of size two may also be reached from a singular 3-subset
    for subset in combinations(range(len(grads)), 2):
        if subset in out:
            continue
        a = [[Fraction(grads[j][d]) for j in subset] for d in range(2)] + [[Fraction(1)] * 2]
        b = [Fraction(p[0]), Fraction(p[1]), Fraction(1)]
        sol = _solve_overdetermined(a, b)
        if sol is not None and all(x > 0 for x in sol):
            out[subset] = dict(zip(subset, sol))
    return sorted(out.items())


def _solve_overdetermined(a, b):
    # pick two independent rows, then check the third
    for drop in range(3):
        rows = [i for i in range(3) if i != drop]
        sol = solve_linear([a[i] for i in rows], [b[i] for i in rows])
        if sol is not None:
            if all(sum(x * y for x, y in zip(a[i], sol)) == b[i] for i in range(3)):
                return sol
            return None
    return None


def pentagon_potential(r: Union[LengthTuple, str], use_pipeline: bool = False, config=None) -> LaurentPoly:
    """Stored potential for the three tabulated tuples; the pipeline otherwise."""
    if isinstance(r, str):
        r = LengthTuple.parse(r)
    key = _tuple_key(r)
    if key in PENTAGON_TUPLES and not use_pipeline:
        return stored_pentagon_potential(key)
    return pentagon_pipeline(r, config).potential
