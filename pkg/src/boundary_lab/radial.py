"""Radial traces, convergence verdicts and almost-everywhere statistics."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .complex_core import normalize_angle
from .errors import WindowTooLarge
from .functions import AnalyticFunction, Blaschke

CONV_TOL = 1e-6
OSC_TOL = 1.0
WINDOW = 12
K_MIN = 3
K_MAX = 45

CONVERGED = "converged"
OSCILLATING = "oscillating"
INCONCLUSIVE = "inconclusive"


def default_schedule(k_min: int = K_MIN, k_max: int = K_MAX) -> np.ndarray:
    return 2.0 ** -np.arange(k_min, k_max + 1, dtype=float)


@dataclass(frozen=True)
class RadialTrace:
    theta: float
    eps_schedule: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        eps = np.asarray(self.eps_schedule, dtype=float)
        vals = np.asarray(self.values, dtype=complex)
        _check_schedule(eps)
        if vals.shape != eps.shape:
            raise ValueError("values and schedule differ in length")
        object.__setattr__(self, "eps_schedule", eps)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.size


def _check_schedule(eps):
    if eps.ndim != 1 or eps.size == 0:
        raise ValueError("schedule must be a nonempty 1-d sequence")
    if np.any(eps <= 0.0) or np.any(eps > 1.0) or np.any(np.diff(eps) >= 0.0):
        raise ValueError("schedule must be strictly decreasing within (0, 1]")


@dataclass(frozen=True)
class TraceVerdict:
    kind: str
    window: int
    limit: complex | None = None
    tail_diameter: float = 0.0

    def to_json(self, theta: float) -> dict:
        doc = {"theta": theta, "kind": self.kind, "tail_diameter": self.tail_diameter, "window": self.window}
        if self.limit is not None:
            doc["limit"] = [self.limit.real, self.limit.imag]
        return doc


def radial_sample(rep: AnalyticFunction, theta: float, schedule=None) -> RadialTrace:
    eps = default_schedule() if schedule is None else np.asarray(schedule, dtype=float)
    _check_schedule(eps)
    theta = normalize_angle(theta)
    return RadialTrace(theta, eps, rep.values(theta, eps))


def diameter(values) -> float:
    v = np.asarray(values, dtype=complex)
    if v.size < 2:
        return 0.0
    return float(np.abs(v[:, None] - v[None, :]).max())


def oscillation_diameter(trace: RadialTrace, tail_start: int) -> float:
    if not 0 <= tail_start < len(trace):
        raise ValueError("tail_start out of range")
    return diameter(trace.values[tail_start:])


def classify(trace: RadialTrace, conv_tol=CONV_TOL, osc_tol=OSC_TOL, window=WINDOW) -> TraceVerdict:
    if not 0.0 < conv_tol < osc_tol:
        raise ValueError("need 0 < conv_tol < osc_tol")
    if window > len(trace) or window < 1:
        raise WindowTooLarge(f"window {window} exceeds trace length {len(trace)}")
    tail = trace.values[-window:]
    d = diameter(tail)
    if d < conv_tol:
        return TraceVerdict(CONVERGED, window, limit=complex(tail[-1]), tail_diameter=d)
    if d > osc_tol:
        return TraceVerdict(OSCILLATING, window, tail_diameter=d)
    return TraceVerdict(INCONCLUSIVE, window, tail_diameter=d)


@dataclass(frozen=True)
class AeSummary:
    total: int
    converged: int
    oscillating: int
    inconclusive: int
    min_modulus: float | None
    median_modulus: float | None
    fraction_near_unit: float | None

    @property
    def converged_fraction(self) -> float:
        return self.converged / self.total

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "converged": self.converged,
            "oscillating": self.oscillating,
            "inconclusive": self.inconclusive,
            "min_modulus": self.min_modulus,
            "median_modulus": self.median_modulus,
            "fraction_near_unit": self.fraction_near_unit,
        }


def probe(rep, thetas, schedule=None, conv_tol=CONV_TOL, osc_tol=OSC_TOL, window=WINDOW, threads: int = 1):
    """Sample and classify one trace per angle; output order follows ``thetas``."""

    def one(theta):
        tr = radial_sample(rep, theta, schedule)
        return tr, classify(tr, conv_tol, osc_tol, window)

    thetas = [float(t) for t in thetas]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, thetas))
    return [one(t) for t in thetas]


def summarize(verdicts, conv_tol=CONV_TOL) -> AeSummary:
    verdicts = list(verdicts)
    if not verdicts:
        raise ValueError("no verdicts to summarize")
    kinds = [v.kind for v in verdicts]
    mods = sorted(abs(v.limit) for v in verdicts if v.kind == CONVERGED)
    if mods:
        min_mod = mods[0]
        median = float(np.median(mods))
        near = sum(m > 1.0 - 10.0 * conv_tol for m in mods) / len(mods)
    else:
        min_mod = median = near = None
    return AeSummary(
        total=len(verdicts),
        converged=kinds.count(CONVERGED),
        oscillating=kinds.count(OSCILLATING),
        inconclusive=kinds.count(INCONCLUSIVE),
        min_modulus=min_mod,
        median_modulus=median,
        fraction_near_unit=near,
    )


def ae_statistics(rep, thetas, schedule=None, conv_tol=CONV_TOL, osc_tol=OSC_TOL, window=WINDOW, threads=1) -> AeSummary:
    if len(thetas) == 0:
        raise ValueError("thetas must be nonempty")
    results = probe(rep, thetas, schedule, conv_tol, osc_tol, window, threads)
    return summarize([v for _, v in results], conv_tol)


def partial_product_l2_gap(zeros, n: int, eps: float, grid: int) -> float:
    """Discrete mean of |B - B_n|^2 over ``grid`` points on the circle of radius 1 - eps."""
    zeros = tuple(zeros)
    if not 0 <= n <= len(zeros):
        raise ValueError("n must lie between 0 and the zero count")
    if grid < 64:
        raise ValueError("grid must be >= 64")
    theta = 2.0 * math.pi * np.arange(grid) / grid
    full = Blaschke(zeros)
    part = full.partial(n)
    head = part.values(theta, eps)
    tail = Blaschke(zeros[n:]).values(theta, eps)
    # B - B_n = B_n (tail - 1); exact zero when the tail is empty
    return float(np.mean(np.abs(head * (tail - 1.0)) ** 2))
