"""Critical points of Laurent potentials and the kappa criterion.

Critical points of ``W`` on the complex torus solve ``z_i dW/dz_i = 0``.
In logarithmic coordinates ``z = exp(x)`` this is the system
``sum_t c_t a_t exp(a_t . x) = 0`` over the terms ``c_t z^{a_t}``, whose
Jacobian is ``sum_t c_t a_t a_t^T exp(a_t . x)``.  We run damped Newton
from many random starts at once (vectorised over starts), deduplicate,
and re-check every survivor by evaluating the exact derivatives.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import EmptyResult, NoConvergence, ValidationError
from .exactalg import LaurentPoly

log = logging.getLogger(__name__)

DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class NewtonConfig:
    starts: int = 200
    radius: float = 2.0
    seed: int = DEFAULT_SEED
    max_iter: int = 80
    step_cap: float = 1.0
    tol: float = 1e-13
    dedup: float = 1e-6
    residual_tol: float = 1e-9
    # starts whose |log|z_i|| exceeds this have run off to the torus boundary
    escape: float = 18.0


@dataclass(frozen=True)
class CriticalPoint:
    coords: Tuple[complex, ...]
    value: complex
    residual: float

    def to_json(self) -> dict:
        return {
            "coords": [[z.real, z.imag] for z in self.coords],
            "value": [self.value.real, self.value.imag],
            "residual": self.residual,
        }


@dataclass(frozen=True)
class EigenvalueSet:
    values: Tuple[complex, ...]
    source: str

    def __post_init__(self):
        if not self.values:
            raise ValidationError("an eigenvalue set must be nonempty")
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))

    def contains(self, v: complex, tol: float = 1e-6) -> bool:
        return any(abs(v - a) < tol for a in self.values)


S2_EIGENVALUES = EigenvalueSet((0, 4, -4), "quantum multiplication by c1 on T*S2 model")
SO3_EIGENVALUES = EigenvalueSet((4, -4, 4j, -4j), "quantum multiplication by c1 on SO3 model")


def _arrays(w: LaurentPoly):
    items = w.items()
    a = np.array([e for e, _ in items], dtype=float)
    c = np.array([float(x) for _, x in items], dtype=complex)
    return a, c


def _newton(w: LaurentPoly, config: NewtonConfig) -> np.ndarray:
    """Run batched Newton; returns the converged log-coordinates."""
    a, c = _arrays(w)
    m = a.shape[1]
    rng = np.random.default_rng(config.seed)
    x = rng.uniform(-config.radius, config.radius, (config.starts, m)) + 1j * rng.uniform(
        -np.pi, np.pi, (config.starts, m)
    )
    active = np.ones(config.starts, dtype=bool)
    done = np.zeros(config.starts, dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(config.max_iter):
            idx = np.nonzero(active & ~done)[0]
            if idx.size == 0:
                break
            xs = x[idx]
            e = np.exp(xs @ a.T) * c  # (s, terms)
            f = e @ a  # gradient in log coordinates
            jac = np.einsum("st,ti,tj->sij", e, a, a)
            norm = np.max(np.abs(f), axis=1)
            finished = norm < config.tol
            done[idx[finished]] = True
            go = ~finished
            if not go.any():
                break
            try:
                step = np.linalg.solve(jac[go], -f[go][..., None])[..., 0]
            except np.linalg.LinAlgError:
                step = np.stack([_safe_solve(j, -g) for j, g in zip(jac[go], f[go])])
            size = np.max(np.abs(step), axis=1, keepdims=True)
            scale = np.minimum(1.0, config.step_cap / np.maximum(size, 1e-300))
            new = xs[go] + step * scale
            bad = ~np.all(np.isfinite(new), axis=1) | (np.max(np.abs(new.real), axis=1) > config.escape)
            gidx = idx[go]
            x[gidx[~bad]] = new[~bad]
            active[gidx[bad]] = False
        # a final residual pass for points that stopped on the iteration limit
        e = np.exp(x @ a.T) * c
        norm = np.max(np.abs(e @ a), axis=1)
    ok = active & np.isfinite(norm) & (norm < 1e-10) & (np.max(np.abs(x.real), axis=1) <= config.escape)
    return x[ok]


def _safe_solve(j: np.ndarray, g: np.ndarray) -> np.ndarray:
    sol, *_ = np.linalg.lstsq(j, g, rcond=None)
    return sol


def _residual(w: LaurentPoly, z: Sequence[complex]) -> float:
    return max(abs(w.log_derivative(v).evaluate(z)) for v in w.variables) if w.variables else 0.0


def _canonical_key(coords: Sequence[complex]):
    return tuple((round(z.real, 7), round(z.imag, 7)) for z in coords)


def critical_points(w: LaurentPoly, config: Optional[NewtonConfig] = None) -> List[CriticalPoint]:
    """Critical points of ``w`` found by multistart Newton, deduplicated.

    Raises :class:`NoConvergence` when no start converges.
    """
    config = config or NewtonConfig()
    w = w.trimmed()
    if w.is_constant() or not w.variables:
        raise ValidationError("critical points of a constant are not isolated")
    xs = _newton(w, config)
    if len(xs) == 0:
        raise NoConvergence(f"none of {config.starts} Newton starts converged")
    pts: List[np.ndarray] = []
    for z in np.exp(xs):
        if all(np.max(np.abs(z - q)) > config.dedup * max(1.0, np.max(np.abs(q))) for q in pts):
            pts.append(z)
    out = []
    for z in pts:
        coords = tuple(complex(v) for v in z)
        res = _residual(w, coords)
        if res >= config.residual_tol:
            log.debug("dropping critical point with residual %g", res)
            continue
        out.append(CriticalPoint(coords, complex(w.evaluate(coords)), float(res)))
    if not out:
        raise NoConvergence("no Newton limit passed the residual check")
    return sorted(out, key=lambda p: _canonical_key(p.coords))


def cluster_values(values: Iterable[complex], tol: float = 1e-6) -> List[complex]:
    reps: List[complex] = []
    for v in values:
        if not any(abs(v - r) < tol for r in reps):
            reps.append(v)
    return sorted(reps, key=lambda v: (round(v.real, 6), round(v.imag, 6)))


def critical_values(w: LaurentPoly, config: Optional[NewtonConfig] = None) -> List[complex]:
    """Distinct critical values (clustered at ``1e-6``), canonically sorted."""
    config = config or NewtonConfig()
    return cluster_values((p.value for p in critical_points(w, config)), config.dedup)


def kappa_admissible(family, kappa: int, allowed: EigenvalueSet,
                     config: Optional[NewtonConfig] = None) -> Tuple[bool, List[complex]]:
    """Whether every critical value of ``family.at(kappa)`` is allowed.

    A family member with no critical points at all is reported as not
    admissible.
    """
    try:
        values = critical_values(family.at(kappa), config)
    except NoConvergence:
        return False, []
    return all(allowed.contains(v) for v in values), values


def solve_kappa(family, allowed: EigenvalueSet, kappa_range: Iterable[int] = range(-10, 11),
                config: Optional[NewtonConfig] = None) -> List[int]:
    """Integers ``kappa`` whose critical values all lie in ``allowed``."""
    out = [k for k in kappa_range if kappa_admissible(family, k, allowed, config)[0]]
    if not out:
        raise EmptyResult("no kappa in range satisfies the eigenvalue criterion")
    return out
