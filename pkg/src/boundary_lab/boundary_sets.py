"""Boundary sets E on the unit circle and singular measures carried by them.

A Cantor system is stored at a finite generation depth. Its limit set has
measure zero; :func:`measure_upper_bound` reports the depth-d cover length
``L * (2 rho)**d`` that certifies this.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

import numpy as np

from .complex_core import TWO_PI, UnitCirclePoint, normalize_angle
from .errors import EmptySet, InvalidRatio, SetCoversBase

MAX_REJECTIONS = 10**6


@dataclass(frozen=True)
class AtomList:
    points: tuple[float, ...]

    def __post_init__(self):
        pts = sorted({normalize_angle(float(p)) for p in self.points})
        object.__setattr__(self, "points", tuple(pts))

    def to_json(self) -> dict:
        return {"type": "atoms", "points": list(self.points)}


@dataclass(frozen=True)
class ArcUnion:
    """Disjoint closed arcs ``[a, b]``; an arc with ``b < a`` wraps through 0."""

    arcs: tuple[tuple[float, float], ...]

    def __post_init__(self):
        arcs = []
        for a, b in self.arcs:
            a, b = float(a), float(b)
            if b - a >= TWO_PI:
                arcs.append((0.0, TWO_PI))
                continue
            a = normalize_angle(a)
            b = normalize_angle(b) if b != TWO_PI else TWO_PI
            arcs.append((a, b))
        arcs.sort()
        pieces = _split_wrapped(arcs)
        for (a0, b0), (a1, b1) in zip(pieces, pieces[1:]):
            if a1 <= b0:
                raise ValueError("arcs must be pairwise disjoint")
        object.__setattr__(self, "arcs", tuple(arcs))

    def pieces(self) -> list[tuple[float, float]]:
        return _split_wrapped(list(self.arcs))

    def to_json(self) -> dict:
        return {"type": "arcs", "arcs": [list(a) for a in self.arcs]}


def _split_wrapped(arcs):
    out = []
    for a, b in arcs:
        if b < a:
            out.append((0.0, b))
            out.append((a, TWO_PI))
        else:
            out.append((a, b))
    out.sort()
    return out


@dataclass(frozen=True)
class CantorSystem:
    """Base arc ``[start, end]`` with two end sub-arcs of ratio ``rho`` kept per generation."""

    start: float
    end: float
    rho: float
    depth: int

    def __post_init__(self):
        if not (0.0 < self.rho < 0.5):
            raise InvalidRatio(f"rho must lie in (0, 1/2), got {self.rho!r}")
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if not (self.end > self.start and self.end - self.start <= TWO_PI + 1e-12):
            raise ValueError("base arc must have length in (0, 2*pi]")

    @property
    def length(self) -> float:
        return self.end - self.start

    def arc_lefts(self, k: int | None = None) -> np.ndarray:
        """Left endpoints of the 2**k generation-k arcs, in order."""
        k = self.depth if k is None else k
        lefts = np.array([self.start])
        span = self.length
        for _ in range(k):
            shift = span * (1.0 - self.rho)
            lefts = np.stack([lefts, lefts + shift], axis=1).ravel()
            span *= self.rho
        return lefts

    def arc_length(self, k: int | None = None) -> float:
        k = self.depth if k is None else k
        return self.length * self.rho**k

    def arcs(self, k: int | None = None) -> list[tuple[float, float]]:
        span = self.arc_length(k)
        return [(float(a), float(a + span)) for a in self.arc_lefts(k)]

    def with_depth(self, depth: int) -> "CantorSystem":
        return CantorSystem(self.start, self.end, self.rho, depth)

    def to_json(self) -> dict:
        return {
            "type": "cantor",
            "rho": self.rho,
            "depth": self.depth,
            "base": [self.start, self.end],
        }


BoundarySet = AtomList | ArcUnion | CantorSystem


def cantor_arcs(base, rho: float, depth: int) -> list[tuple[float, float]]:
    """Generation-``depth`` arcs of the middle-removal construction on ``base = (a, b)``."""
    a, b = base
    return CantorSystem(float(a), float(b), float(rho), int(depth)).arcs()


def measure_upper_bound(E: BoundarySet) -> float:
    if isinstance(E, AtomList):
        return 0.0
    if isinstance(E, ArcUnion):
        return sum(b - a for a, b in E.pieces())
    return E.length * (2.0 * E.rho) ** E.depth


def cantor_cdf(system: CantorSystem, t: float) -> float:
    """Devil's staircase of the limit Cantor measure on the base arc."""
    x = (float(t) - system.start) / system.length
    rho = system.rho
    total = 0.0
    scale = 1.0
    # rounding in t and in computed arc endpoints grows by 1/rho per level; inside
    # that band x is taken to be the endpoint, where F is known exactly
    snap = 64 * 2.0**-52
    while scale > 2.0**-53:
        s = snap if snap < 1e-3 else 0.0
        if x <= s:
            break
        if x >= 1.0 - s:
            total += scale
            break
        if abs(x - rho) <= s or abs(x - (1.0 - rho)) <= s:
            total += 0.5 * scale
            break
        snap /= rho
        if x <= rho:
            x = x / rho
        elif x >= 1.0 - rho:
            total += 0.5 * scale
            x = (x - (1.0 - rho)) / rho
        else:
            total += 0.5 * scale
            break
        scale *= 0.5
    return total


def _endpoint_generation(system: CantorSystem, k: int) -> int:
    g = 0
    while 2 ** (g + 1) < k and g < system.depth:
        g += 1
    return g


def test_points(E: BoundarySet, k: int) -> list[UnitCirclePoint]:
    """Up to ``k`` points lying in E at every generation depth, left to right."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if isinstance(E, AtomList):
        if not E.points:
            raise EmptySet("empty boundary set")
        pts = list(E.points)
        return [UnitCirclePoint(p) for p in _spread(pts, k)]
    if isinstance(E, ArcUnion):
        if not E.arcs:
            raise EmptySet("empty boundary set")
        pts = sorted({p for arc in E.arcs for p in arc})
        return [_circle_point(p) for p in _spread(pts, k)]
    # endpoints of generation g arcs are endpoints at every deeper generation
    angles = cantor_atom_angles(E, _endpoint_generation(E, k))
    return [_circle_point(float(p)) for p in _spread(list(angles), k)]


def _spread(pts: list, k: int) -> list:
    if k >= len(pts):
        return pts
    idx = np.unique(np.round(np.linspace(0, len(pts) - 1, k)).astype(int))
    return [pts[i] for i in idx]


def _circle_point(p: float) -> UnitCirclePoint:
    # a right endpoint at 2*pi must stay distinct from a left endpoint at 0
    if p >= TWO_PI:
        p = math.nextafter(TWO_PI, 0.0)
    return UnitCirclePoint(p)


def cantor_atom_angles(system: CantorSystem, g: int | None = None) -> np.ndarray:
    """Outer endpoints of the generation-(g+1) arcs, i.e. both endpoints of every generation-g arc.

    For ``g = depth - 1`` this is one atom per depth-``depth`` arc: the left end of
    left children and the right end of right children.
    """
    if g is None:
        g = system.depth - 1
    if g < 0:
        return np.array([system.start])
    lefts = system.arc_lefts(g)
    rights = lefts + system.arc_length(g)
    return np.stack([lefts, rights], axis=1).ravel()


def contains(E: BoundarySet, theta: float) -> bool:
    """Membership in the current-depth cover of E."""
    theta = normalize_angle(theta)
    if isinstance(E, AtomList):
        return theta in E.points
    if isinstance(E, ArcUnion):
        return any(a <= theta <= b for a, b in E.pieces())
    lefts = E.arc_lefts()
    span = E.arc_length()
    for shift in (0.0, TWO_PI):
        x = theta + shift
        i = bisect.bisect_right(lefts, x) - 1
        if i >= 0 and x <= lefts[i] + span:
            return True
    return False


def complement_samples(E: BoundarySet, n: int, seed: int) -> list[UnitCirclePoint]:
    """``n`` uniform points outside the current-depth cover, reproducible from ``seed``."""
    if n <= 0:
        return []
    if isinstance(E, CantorSystem):
        if measure_upper_bound(E) >= E.length:
            raise SetCoversBase("Cantor cover has full length")
        lo, hi = E.start, E.end
    else:
        if measure_upper_bound(E) >= TWO_PI:
            raise SetCoversBase("arcs cover the whole circle")
        lo, hi = 0.0, TWO_PI
    rng = np.random.default_rng(seed)
    out = []
    misses = 0
    while len(out) < n:
        t = float(rng.uniform(lo, hi))
        if contains(E, t):
            misses += 1
            if misses >= MAX_REJECTIONS:
                raise SetCoversBase("rejection sampling failed 10^6 times in a row")
            continue
        misses = 0
        out.append(UnitCirclePoint(t))
    return out


@dataclass(frozen=True)
class AtomMeasure:
    points: tuple[float, ...]
    weights: tuple[float, ...] = field(default=())

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        w = tuple(float(x) for x in self.weights) or tuple(1.0 for _ in pts)
        if not pts:
            raise EmptySet("atom measure needs at least one atom")
        if len(w) != len(pts):
            raise ValueError("points and weights differ in length")
        if any(not (x > 0.0 and math.isfinite(x)) for x in w):
            raise ValueError("atom weights must be positive and finite")
        object.__setattr__(self, "points", tuple(normalize_angle(p) for p in pts))
        object.__setattr__(self, "weights", w)

    @property
    def total_mass(self) -> float:
        return math.fsum(self.weights)

    def support(self) -> AtomList:
        return AtomList(self.points)

    def to_json(self) -> dict:
        return {"type": "atoms", "points": list(self.points), "weights": list(self.weights)}


@dataclass(frozen=True)
class CantorMeasure:
    """Unit mass, 2**-k on every generation-k arc, discretized as one atom per depth-d arc."""

    system: CantorSystem

    @property
    def total_mass(self) -> float:
        return 1.0

    def arc_mass(self, k: int) -> float:
        return 2.0**-k

    def atoms(self) -> AtomMeasure:
        angles = cantor_atom_angles(self.system)
        w = 2.0**-self.system.depth
        return AtomMeasure(tuple(angles), tuple(w for _ in angles))

    def support(self) -> CantorSystem:
        return self.system

    def to_json(self) -> dict:
        return self.system.to_json()


SingularMeasure = AtomMeasure | CantorMeasure


def measure_for_set(E: BoundarySet) -> SingularMeasure:
    """Unit-mass singular measure supported on E."""
    if isinstance(E, CantorSystem):
        return CantorMeasure(E)
    if isinstance(E, AtomList):
        pts = E.points
    else:
        pts = tuple(sorted({p for arc in E.arcs for p in arc}))
    if not pts:
        raise EmptySet("empty boundary set")
    return AtomMeasure(pts, tuple(1.0 / len(pts) for _ in pts))


def set_from_json(doc: dict) -> BoundarySet:
    kind = doc.get("type")
    if kind == "cantor":
        a, b = doc.get("base", [0.0, TWO_PI])
        return CantorSystem(float(a), float(b), float(doc["rho"]), int(doc["depth"]))
    if kind == "atoms":
        return AtomList(tuple(doc["points"]))
    if kind == "arcs":
        return ArcUnion(tuple(tuple(a) for a in doc["arcs"]))
    raise ValueError(f"unknown boundary set type {kind!r}")


def measure_from_json(doc: dict) -> SingularMeasure:
    kind = doc.get("type")
    if kind == "cantor":
        return CantorMeasure(set_from_json(doc))
    if kind == "atoms":
        return AtomMeasure(tuple(doc["points"]), tuple(doc.get("weights", ())))
    raise ValueError(f"unknown measure type {kind!r}")
