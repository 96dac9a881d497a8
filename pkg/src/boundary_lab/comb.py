"""The double-comb domain at finite slit truncation.

The unit square minus the slits ``l_2 .. l_{n_slits+1}``; even slits hang from
the bottom edge up to v = 3/4, odd slits from the top edge down to v = 1/4.
Connectivity questions are answered on a raster: blocked cells are every cell
whose closed square touches a slit or an arc, and free cells are joined by
4-neighbour flood fill.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import DegenerateRaster, IndexOutOfRange, PreconditionError, SlitCollision

Point = tuple[float, float]
_ON_EDGE = 1e-12


def slit(n: int) -> tuple[Point, Point]:
    """Endpoints (bottom, top) of the vertical slit with index ``n``."""
    if n < 2:
        raise IndexOutOfRange(f"slit index must be >= 2, got {n}")
    u = 1.0 / n
    if n % 2 == 0:
        return (u, 0.0), (u, 0.75)
    return (u, 0.25), (u, 1.0)


@dataclass(frozen=True)
class CombDomain:
    n_slits: int

    def __post_init__(self):
        if self.n_slits < 2:
            raise ValueError("n_slits must be >= 2")

    @property
    def indices(self) -> range:
        return range(2, self.n_slits + 2)

    def slits(self):
        return [(n, slit(n)) for n in self.indices]

    def contains(self, w: Point, clearance: float = 0.0) -> bool:
        u, v = w
        if not (0.0 < u < 1.0 and 0.0 < v < 1.0):
            return False
        for _, seg in self.slits():
            if _point_segment_distance(w, seg) <= clearance:
                return False
        return True

    def on_boundary(self, w: Point) -> bool:
        u, v = w
        if min(u, v, 1.0 - u, 1.0 - v) <= _ON_EDGE and 0.0 <= u <= 1.0 and 0.0 <= v <= 1.0:
            return True
        return any(_point_segment_distance(w, seg) <= _ON_EDGE for _, seg in self.slits())

    def to_json(self) -> dict:
        return {"n_slits": self.n_slits}


def contains(domain: CombDomain, w: Point, clearance: float = 0.0) -> bool:
    return domain.contains(w, clearance)


@dataclass(frozen=True)
class PolyArc:
    vertices: tuple[Point, ...]

    def segments(self):
        return list(zip(self.vertices, self.vertices[1:]))

    def check(self, domain: CombDomain):
        """Raise SlitCollision if a segment meets a slit or leaves the square."""
        for p, q in self.segments():
            for n, seg in domain.slits():
                if _segments_intersect((p, q), seg):
                    raise SlitCollision(f"segment {p}->{q} meets slit l_{n}")
            for w in (p, q):
                if not (0.0 <= w[0] <= 1.0 and 0.0 <= w[1] <= 1.0):
                    raise SlitCollision(f"vertex {w} lies outside the square")


def gamma_vertex(k: int) -> Point:
    return (1.0 / (k + 1), 0.875 if k % 2 == 1 else 0.125)


def gamma_polyline(k_max: int, domain: CombDomain | None = None) -> PolyArc:
    """Vertices M_1..M_{k_max} of the oscillating arc approaching the left side."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    arc = PolyArc(tuple(gamma_vertex(k) for k in range(1, k_max + 1)))
    arc.check(domain or CombDomain(k_max + 1))
    return arc


def hook(domain: CombDomain, gamma: PolyArc) -> PolyArc:
    """Close Gamma onto the comb by the vertical drop from M_k to the tip of slit l_{k+1}.

    A finite prefix of Gamma ends inside D and separates nothing; the hook is
    the shortest closure that keeps the alternating structure intact.
    """
    end = gamma.vertices[-1]
    for n, (bottom, top) in domain.slits():
        if abs(bottom[0] - end[0]) > _ON_EDGE:
            continue
        tip = top if end[1] > top[1] else bottom if end[1] < bottom[1] else None
        if tip is None:
            continue
        closed = PolyArc(gamma.vertices + (tip,))
        # the closing segment ends on the slit itself, so only check the prefix
        PolyArc(gamma.vertices).check(domain)
        return closed
    raise PreconditionError(f"no slit tip lies directly above or below {end}")


@dataclass
class SplitReport:
    grid: int
    components: int
    adjacency: dict[int, list[int]]
    passed: bool
    even_component: int | None = None
    odd_component: int | None = None
    even_threshold: int | None = None
    odd_threshold: int | None = None
    resolved_max: int = 0
    stable: bool | None = field(default=None)

    def signature(self):
        return (self.components, self.passed, self.even_threshold, self.odd_threshold,
                self.even_component is not None)

    def to_json(self) -> dict:
        return {
            "components": self.components,
            "adjacency": {str(k): v for k, v in self.adjacency.items()},
            "grid": self.grid,
            "stable": self.stable,
            "pass": self.passed,
            "even_threshold": self.even_threshold,
            "odd_threshold": self.odd_threshold,
            "resolved_max_index": self.resolved_max,
        }


def _reaches_square_edge(w: Point) -> bool:
    u, v = w
    return min(u, v, 1.0 - u, 1.0 - v) <= _ON_EDGE


def rasterize(domain: CombDomain, arcs, grid: int) -> np.ndarray:
    """Boolean mask (indexed [column, row]) of blocked cells."""
    blocked = np.zeros((grid, grid), dtype=bool)
    for _, seg in domain.slits():
        _supercover(blocked, seg[0], seg[1], grid)
    for arc in arcs:
        for p, q in arc.segments():
            _supercover(blocked, p, q, grid)
        if len(arc.vertices) == 1:
            _supercover(blocked, arc.vertices[0], arc.vertices[0], grid)
    return blocked


def split_check(domain: CombDomain, gamma: PolyArc, gamma1: PolyArc, grid: int, close: bool = True) -> SplitReport:
    """Flood-fill the raster of D minus both arcs and read off slit adjacency per component.

    Indices checked against the even/odd pattern are those Gamma interleaves,
    up to the slit it hooks onto; later slits sit beyond the truncated arc.
    """
    if grid < 8:
        raise ValueError("grid must be >= 8")
    if not gamma.vertices or not gamma1.vertices:
        raise PreconditionError("arcs need at least one vertex")
    if gamma.vertices[0] != gamma1.vertices[0]:
        raise PreconditionError("gamma and gamma1 must share their initial vertex")
    end1 = gamma1.vertices[-1]
    if len(gamma1.vertices) < 2 or not _reaches_square_edge(end1):
        raise PreconditionError("gamma1 must end on the square boundary")
    if end1[0] <= _ON_EDGE:
        raise PreconditionError("gamma1 must not end on the left side AB")
    gamma1.check(domain)
    if close and not domain.on_boundary(gamma.vertices[-1]):
        gamma = hook(domain, gamma)
    elif not domain.on_boundary(gamma.vertices[-1]):
        raise PreconditionError("gamma must end on the boundary of D")
    if len(gamma.vertices) < 2:
        raise PreconditionError("gamma is a single vertex and cannot separate D")

    blocked = rasterize(domain, (gamma, gamma1), grid)
    labels, count = ndimage.label(~blocked)
    adjacency = {c: [] for c in range(1, count + 1)}
    for n, (bottom, top) in domain.slits():
        for c in _adjacent_labels(labels, bottom, top, grid):
            adjacency[c].append(n)

    resolved = _resolved_indices(domain, gamma)
    report = SplitReport(grid, count, adjacency, False, resolved_max=max(resolved, default=0))
    if count == 2:
        evens = [n for n in resolved if n % 2 == 0]
        odds = [n for n in resolved if n % 2 == 1]
        for a, b in ((1, 2), (2, 1)):
            te = _threshold(evens, set(adjacency[a]))
            to = _threshold(odds, set(adjacency[b]))
            if te is not None and to is not None:
                report.passed = True
                report.even_component, report.odd_component = a, b
                report.even_threshold, report.odd_threshold = te, to
                break
    return report


def split_check_stable(domain, gamma, gamma1, grid: int) -> SplitReport:
    """Run :func:`split_check` at ``grid`` and ``2*grid``; the coarse report carries the verdict."""
    coarse = split_check(domain, gamma, gamma1, grid)
    fine = split_check(domain, gamma, gamma1, 2 * grid)
    if coarse.components != 2 and fine.components != 2:
        raise DegenerateRaster(
            f"{coarse.components} and {fine.components} components at grids {grid} and {2 * grid}"
        )
    coarse.stable = coarse.signature() == fine.signature()
    coarse.passed = coarse.passed and fine.passed and coarse.stable
    return coarse


def _resolved_indices(domain, gamma):
    u_end = gamma.vertices[-1][0]
    return [n for n in domain.indices if 1.0 / n >= u_end - _ON_EDGE]


def _threshold(indices, adjacent):
    """Smallest T among ``indices`` with every index >= T adjacent, or None."""
    if not indices:
        return None
    t = None
    for n in reversed(indices):
        if n not in adjacent:
            break
        t = n
    return t


def _adjacent_labels(labels, bottom, top, grid):
    u = bottom[0] * grid
    i0 = max(math.ceil(u) - 2, 0)
    i1 = min(math.floor(u) + 1, grid - 1)
    j0 = max(math.ceil(bottom[1] * grid) - 2, 0)
    j1 = min(math.floor(top[1] * grid) + 1, grid - 1)
    window = labels[i0 : i1 + 1, j0 : j1 + 1]
    return sorted(int(c) for c in np.unique(window) if c > 0)


def _supercover(mask, p, q, grid):
    """Mark every cell whose closed square meets the segment p-q."""
    x0, y0 = p[0] * grid, p[1] * grid
    x1, y1 = q[0] * grid, q[1] * grid
    if x0 > x1:
        x0, y0, x1, y1 = x1, y1, x0, y0
    i_lo = max(math.ceil(x0) - 1, 0)
    i_hi = min(math.floor(x1), grid - 1)
    for i in range(i_lo, i_hi + 1):
        if x1 == x0:
            ya, yb = y0, y1
        else:
            xa, xb = max(x0, i), min(x1, i + 1)
            slope = (y1 - y0) / (x1 - x0)
            ya = y0 + slope * (xa - x0)
            yb = y0 + slope * (xb - x0)
        lo, hi = min(ya, yb), max(ya, yb)
        j_lo = max(math.ceil(lo) - 1, 0)
        j_hi = min(math.floor(hi), grid - 1)
        mask[i, j_lo : j_hi + 1] = True


def _point_segment_distance(w, seg):
    (ax, ay), (bx, by) = seg
    px, py = w
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    s = 0.0 if L2 == 0.0 else max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / L2))
    return math.hypot(px - (ax + s * dx), py - (ay + s * dy))


def _orient(a, b, c):
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return 0 if abs(v) <= 1e-15 else (1 if v > 0 else -1)


def _on_segment(a, b, c):
    return min(a[0], b[0]) - 1e-15 <= c[0] <= max(a[0], b[0]) + 1e-15 and \
        min(a[1], b[1]) - 1e-15 <= c[1] <= max(a[1], b[1]) + 1e-15


def _segments_intersect(s1, s2) -> bool:
    p1, p2 = s1
    q1, q2 = s2
    o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _on_segment(p1, p2, q1):
        return True
    if o2 == 0 and _on_segment(p1, p2, q2):
        return True
    if o3 == 0 and _on_segment(q1, q2, p1):
        return True
    if o4 == 0 and _on_segment(q1, q2, p2):
        return True
    return False
