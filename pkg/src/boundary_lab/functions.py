"""Evaluable bounded analytic functions on the disk.

Every representation evaluates on broadcast arrays of ``(theta, eps)`` via
:meth:`AnalyticFunction.values`; the scalar helpers below wrap that for a
single :class:`DiskPoint`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .boundary_sets import (
    AtomMeasure,
    BoundarySet,
    CantorMeasure,
    SingularMeasure,
    measure_for_set,
    measure_from_json,
)
from .complex_core import (
    DiskPoint,
    LeftHalfPlaneValue,
    UnitCirclePoint,
    chordal_gap,
    herglotz_array,
    left_log,
    left_log_array,
    mobius_lhp_to_disk_array,
    normalize_angle,
)
from .errors import NoExplicitLog, QuadratureBudgetExceeded

TRANSFORM_LOWER = math.exp(math.pi / 2)
TRANSFORM_BOUND = math.exp(1.5 * math.pi)

MAX_QUAD_DEPTH = 24
MAX_QUAD_NODES = 2**24
LEAF_RATIO = 0.1
DEFAULT_TOL = 1e-10


def _grid(theta, eps):
    theta = np.asarray(theta, dtype=float)
    eps = np.asarray(eps, dtype=float)
    if np.any(~((eps > 0.0) & (eps <= 1.0))):
        raise ValueError("eps must lie in (0, 1]")
    return np.broadcast_arrays(np.mod(theta, 2.0 * math.pi), eps)


class AnalyticFunction:
    """Base class; subclasses set ``bound`` and ``has_explicit_log``."""

    bound: float = 1.0
    has_explicit_log: bool = False

    def values(self, theta, eps) -> np.ndarray:
        raise NotImplementedError

    def log_values(self, theta, eps) -> np.ndarray:
        raise NoExplicitLog(f"{type(self).__name__} has no explicit logarithm")

    def evaluate(self, z: DiskPoint) -> complex:
        return complex(self.values(z.theta, z.eps))

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(AnalyticFunction):
    c: complex

    @property
    def bound(self) -> float:
        return abs(self.c)

    def values(self, theta, eps):
        theta, eps = _grid(theta, eps)
        return np.full(theta.shape, complex(self.c))

    def to_json(self):
        return {"type": "constant", "value": [self.c.real, self.c.imag]}


@dataclass(frozen=True)
class Blaschke(AnalyticFunction):
    zeros: tuple[complex, ...]
    bound = 1.0
    has_explicit_log = False

    def __post_init__(self):
        zs = tuple(complex(a) for a in self.zeros)
        if any(not abs(a) < 1.0 for a in zs):
            raise ValueError("Blaschke zeros must satisfy |a| < 1")
        object.__setattr__(self, "zeros", zs)

    def partial(self, n: int) -> "Blaschke":
        return Blaschke(self.zeros[:n])

    def values(self, theta, eps):
        theta, eps = _grid(theta, eps)
        z = (1.0 - eps) * np.exp(1j * theta)
        out = np.ones(z.shape, dtype=complex)
        for a in self.zeros:
            if a == 0:
                out = out * z
            else:
                out = out * ((abs(a) / a) * (a - z) / (1.0 - a.conjugate() * z))
        return out

    def to_json(self):
        return {"type": "blaschke", "zeros": [[a.real, a.imag] for a in self.zeros]}


def _atom_log(measure: AtomMeasure, theta, eps):
    t = np.asarray(measure.points)
    w = np.asarray(measure.weights)
    k = herglotz_array(theta[..., None], eps[..., None], t)
    return -(k * w).sum(axis=-1)


def _cantor_log(measure: CantorMeasure, theta, eps, tol):
    """Hierarchical sum of -mass * kernel over the depth-d endpoint atoms.

    A generation-k arc is summed as a cluster (its two children's midpoints,
    mass split evenly) once it is small relative to its chordal distance from z
    and the coarse-versus-children discrepancy is below ``tol`` times its
    mass; otherwise it is split. Depth-d arcs are exact atoms.
    """
    sysm = measure.system
    depth = sysm.depth
    if depth > MAX_QUAD_DEPTH:
        raise QuadratureBudgetExceeded(f"depth {depth} exceeds the cap {MAX_QUAD_DEPTH}")
    th = theta.ravel()
    ep = eps.ravel()
    n = th.size
    total = np.zeros(n, dtype=complex)
    nodes = np.zeros(n, dtype=np.int64)

    pt = np.arange(n)
    left = np.full(n, sysm.start)
    right_child = np.zeros(n, dtype=bool)
    rho = sysm.rho
    for k in range(depth + 1):
        span = sysm.arc_length(k)
        mass = 2.0**-k
        if k == depth:
            atom = np.where(right_child, left + span, left)
            if depth == 0:
                atom = left
            np.add.at(total, pt, -mass * herglotz_array(th[pt], ep[pt], np.mod(atom, 2.0 * math.pi)))
            np.add.at(nodes, pt, 1)
            break
        child = span * rho
        mid = left + 0.5 * span
        mid_l = left + 0.5 * child
        mid_r = left + span - 0.5 * child
        tp, ep_ = th[pt], ep[pt]
        coarse = herglotz_array(tp, ep_, np.mod(mid, 2.0 * math.pi))
        fine = 0.5 * (
            herglotz_array(tp, ep_, np.mod(mid_l, 2.0 * math.pi))
            + herglotz_array(tp, ep_, np.mod(mid_r, 2.0 * math.pi))
        )
        np.add.at(nodes, pt, 3)
        # distance from z to the nearest point of the arc
        inside = np.abs(_wrap(tp - mid)) <= 0.5 * span
        near = np.where(
            inside,
            ep_,
            np.minimum(
                chordal_gap(tp, ep_, np.mod(left, 2.0 * math.pi)),
                chordal_gap(tp, ep_, np.mod(left + span, 2.0 * math.pi)),
            ),
        )
        accept = (span < LEAF_RATIO * near) & (np.abs(coarse - fine) <= tol)
        np.add.at(total, pt[accept], -mass * fine[accept])
        keep = ~accept
        pt = np.repeat(pt[keep], 2)
        lk = left[keep]
        left = np.stack([lk, lk + span - child], axis=1).ravel()
        right_child = np.tile([False, True], lk.size)
        if nodes.max(initial=0) > MAX_QUAD_NODES:
            raise QuadratureBudgetExceeded("quadrature exceeded 2**24 nodes")
    return total.reshape(theta.shape)


def _wrap(d):
    return np.remainder(d + math.pi, 2.0 * math.pi) - math.pi


@dataclass(frozen=True)
class SingularInner(AnalyticFunction):
    """exp(-integral of the Herglotz kernel against a positive singular measure)."""

    measure: SingularMeasure
    tol: float = DEFAULT_TOL
    bound = 1.0
    has_explicit_log = True

    def __post_init__(self):
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")

    def log_values(self, theta, eps):
        theta, eps = _grid(theta, eps)
        if isinstance(self.measure, AtomMeasure):
            return _atom_log(self.measure, theta, eps)
        return _cantor_log(self.measure, theta, eps, self.tol)

    def values(self, theta, eps):
        return np.exp(self.log_values(theta, eps))

    def to_json(self):
        return {"type": "singular_inner", "measure": self.measure.to_json(), "tol": self.tol}


@dataclass(frozen=True)
class Product(AnalyticFunction):
    factors: tuple[AnalyticFunction, ...]

    @property
    def bound(self) -> float:
        return math.prod(f.bound for f in self.factors)

    @property
    def has_explicit_log(self) -> bool:
        return all(f.has_explicit_log for f in self.factors)

    def values(self, theta, eps):
        theta, eps = _grid(theta, eps)
        out = np.ones(theta.shape, dtype=complex)
        for f in self.factors:
            out = out * f.values(theta, eps)
        return out

    def log_values(self, theta, eps):
        if not self.has_explicit_log:
            raise NoExplicitLog("product contains factors without an explicit logarithm")
        theta, eps = _grid(theta, eps)
        out = np.zeros(theta.shape, dtype=complex)
        for f in self.factors:
            out = out + f.log_values(theta, eps)
        return out

    def to_json(self):
        return {"type": "product", "factors": [f.to_json() for f in self.factors]}


@dataclass(frozen=True)
class Transformed(AnalyticFunction):
    """g = exp(-i log h) with h = log f on the branch arg h in (pi/2, 3pi/2).

    ``blaschke`` records a factor divided out of the original function, which
    is then ``blaschke * inner``; it never enters the values of g.
    """

    inner: AnalyticFunction
    blaschke: Blaschke | None = field(default=None)
    bound = TRANSFORM_BOUND
    has_explicit_log = False

    def __post_init__(self):
        _require_log(self.inner)

    def original(self) -> AnalyticFunction:
        if self.blaschke is None:
            return self.inner
        return Product((self.blaschke, self.inner))

    def values(self, theta, eps):
        h = self.inner.log_values(theta, eps)
        return np.exp(-1j * left_log_array(h))

    def to_json(self):
        doc = {"type": "transform", "inner": self.inner.to_json()}
        if self.blaschke is not None:
            doc["blaschke"] = self.blaschke.to_json()
        return doc


@dataclass(frozen=True)
class MobiusComposed(AnalyticFunction):
    """z -> psi_xi(h(z)) with psi_xi(zeta) = -xi (1 + zeta)/(1 - zeta)."""

    inner: AnalyticFunction
    xi: float
    bound = 1.0
    has_explicit_log = False

    def __post_init__(self):
        _require_log(self.inner)
        object.__setattr__(self, "xi", normalize_angle(float(self.xi)))

    def values(self, theta, eps):
        return mobius_lhp_to_disk_array(self.xi, self.inner.log_values(theta, eps))

    def to_json(self):
        return {"type": "mobius", "inner": self.inner.to_json(), "xi": self.xi}


def _require_log(rep: AnalyticFunction):
    if not rep.has_explicit_log:
        raise NoExplicitLog(
            f"{type(rep).__name__} is not zero-free by construction; "
            "divide out its Blaschke factor first"
        )
    if rep.bound > 1.0:
        raise NoExplicitLog("an explicit logarithm needs a sup-norm bound <= 1")


# -- operation-level API -------------------------------------------------------


def blaschke_eval(zeros, z: DiskPoint) -> complex:
    return Blaschke(tuple(zeros)).evaluate(z)


def blaschke_condition(zeros) -> float:
    return math.fsum(1.0 - abs(complex(a)) for a in zeros)


def singular_inner_eval(mu: SingularMeasure, z: DiskPoint, tol: float = DEFAULT_TOL) -> complex:
    return SingularInner(mu, tol).evaluate(z)


def analytic_log(rep: AnalyticFunction, z: DiskPoint) -> LeftHalfPlaneValue:
    _require_log(rep)
    return LeftHalfPlaneValue(complex(rep.log_values(z.theta, z.eps)))


def transform_g(h) -> complex:
    """exp(-i log h) on the (pi/2, 3pi/2) branch; modulus exp(arg h)."""
    return complex(np.exp(-1j * left_log(h)))


def transform_g_polar(h) -> complex:
    """The same value written as e^{arg h}(cos log|h| - i sin log|h|)."""
    lg = left_log(h)
    return math.exp(lg.imag) * complex(math.cos(lg.real), -math.sin(lg.real))


def lusin_function(E: BoundarySet, tol: float = DEFAULT_TOL) -> Transformed:
    return Transformed(SingularInner(measure_for_set(E), tol))


def corollary1_pipeline(zeros, f1: AnalyticFunction) -> Transformed:
    """Transform of the zero-free factor f1 of f = B * f1."""
    return Transformed(f1, Blaschke(tuple(zeros)))


def psi_compose(h_rep: AnalyticFunction, xi) -> MobiusComposed:
    theta = xi.theta if isinstance(xi, UnitCirclePoint) else float(xi)
    return MobiusComposed(h_rep, theta)


def function_from_json(doc: dict) -> AnalyticFunction:
    kind = doc.get("type")
    if kind == "singular_inner":
        return SingularInner(measure_from_json(doc["measure"]), float(doc.get("tol", DEFAULT_TOL)))
    if kind == "blaschke":
        return Blaschke(tuple(complex(re, im) for re, im in doc["zeros"]))
    if kind == "product":
        return Product(tuple(function_from_json(f) for f in doc["factors"]))
    if kind == "transform":
        b = doc.get("blaschke")
        return Transformed(function_from_json(doc["inner"]), function_from_json(b) if b else None)
    if kind == "mobius":
        return MobiusComposed(function_from_json(doc["inner"]), float(doc["xi"]))
    if kind == "constant":
        re, im = doc["value"]
        return Constant(complex(re, im))
    raise ValueError(f"unknown function type {kind!r}")
