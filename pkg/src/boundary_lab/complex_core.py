"""Branch-aware complex primitives.

Points of the disk are addressed by ``(theta, eps)`` with ``z = (1 - eps) e^{i theta}``
so that radii extremely close to the boundary (``eps = 2**-45``) keep full
relative precision in every kernel denominator.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    JumpTooLarge,
    NonNegativeRealPart,
    RightHalfPlaneInput,
    ZeroValue,
)

TWO_PI = 2.0 * math.pi


def normalize_angle(theta: float) -> float:
    """Map an angle into [0, 2*pi)."""
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    # fmod of a tiny negative number can round up to exactly 2*pi
    if t >= TWO_PI:
        t = 0.0
    return t


@dataclass(frozen=True)
class UnitCirclePoint:
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", normalize_angle(float(self.theta)))

    @property
    def value(self) -> complex:
        return cmath.exp(1j * self.theta)


@dataclass(frozen=True)
class DiskPoint:
    """The point ``(1 - eps) * exp(i*theta)``; ``eps == 1`` is the origin."""

    theta: float
    eps: float

    def __post_init__(self):
        eps = float(self.eps)
        if not (0.0 < eps <= 1.0):
            raise ValueError(f"eps must lie in (0, 1], got {eps!r}")
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "theta", normalize_angle(float(self.theta)))

    @property
    def value(self) -> complex:
        return (1.0 - self.eps) * cmath.exp(1j * self.theta)

    @classmethod
    def from_complex(cls, z: complex) -> "DiskPoint":
        r = abs(z)
        if r >= 1.0:
            raise ValueError("point is not inside the open unit disk")
        theta = cmath.phase(z) if r > 0.0 else 0.0
        return cls(theta, 1.0 - r)


@dataclass(frozen=True)
class LeftHalfPlaneValue:
    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not v.real < 0.0:
            raise NonNegativeRealPart(f"real part must be negative, got {v!r}")
        object.__setattr__(self, "value", v)


class _PointAtInfinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _PointAtInfinity()


def _as_lhp(h) -> complex:
    if isinstance(h, LeftHalfPlaneValue):
        return h.value
    v = complex(h)
    if not v.real < 0.0:
        raise NonNegativeRealPart(f"real part must be negative, got {v!r}")
    return v


def left_log(h) -> complex:
    """Logarithm of a left half-plane value on the branch with arg in (pi/2, 3pi/2)."""
    v = _as_lhp(h)
    arg = math.atan2(v.imag, v.real)
    if arg < math.pi / 2:
        arg += TWO_PI
    return complex(math.log(abs(v)), arg)


def left_log_array(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if np.any(~(h.real < 0.0)):
        raise NonNegativeRealPart("real part must be negative everywhere")
    arg = np.arctan2(h.imag, h.real)
    arg = np.where(arg < math.pi / 2, arg + TWO_PI, arg)
    return np.log(np.abs(h)) + 1j * arg


def mobius_lhp_to_disk(xi, zeta) -> complex:
    """psi(zeta) = -xi (1 + zeta) / (1 - zeta); sends the left half-plane onto the disk and infinity to xi."""
    xi_val = xi.value if isinstance(xi, UnitCirclePoint) else cmath.exp(1j * float(xi))
    if zeta is INFINITY or zeta is None:
        return xi_val
    zeta = complex(zeta)
    if cmath.isinf(zeta):
        return xi_val
    if zeta.real > 0.0:
        raise RightHalfPlaneInput(f"real part must be <= 0, got {zeta!r}")
    return -xi_val * (1.0 + zeta) / (1.0 - zeta)


def mobius_lhp_to_disk_array(xi_theta: float, zeta: np.ndarray) -> np.ndarray:
    zeta = np.asarray(zeta, dtype=complex)
    if np.any(zeta.real > 0.0):
        raise RightHalfPlaneInput("real part must be <= 0 everywhere")
    xi_val = np.exp(1j * xi_theta)
    return -xi_val * (1.0 + zeta) / (1.0 - zeta)


def angle_delta(t, theta):
    """t - theta reduced into [-pi, pi] for angles already in [0, 2*pi]."""
    d = np.asarray(t, dtype=float) - np.asarray(theta, dtype=float)
    return np.where(np.abs(d) > math.pi, d - np.copysign(TWO_PI, d), d)


def herglotz_array(theta, eps, t) -> np.ndarray:
    """(e^{it} + z) / (e^{it} - z) at z = (1-eps) e^{i theta}, broadcasting over all inputs.

    Real and imaginary parts are assembled separately from
    |e^{it} - z|^2 = eps^2 + 4 (1 - eps) sin^2((t - theta)/2), which has no
    cancellation, so the on-radius value is exactly (2 - eps)/eps.
    """
    eps = np.asarray(eps, dtype=float)
    delta = angle_delta(t, theta)
    half = np.sin(0.5 * delta)
    den = eps * eps + 4.0 * (1.0 - eps) * half * half
    re = eps * (2.0 - eps) / den
    im = -2.0 * (1.0 - eps) * np.sin(delta) / den
    return re + 1j * im


def herglotz_kernel(z: DiskPoint, t) -> complex:
    t_val = t.theta if isinstance(t, UnitCirclePoint) else normalize_angle(float(t))
    return complex(herglotz_array(z.theta, z.eps, t_val))


def chordal_gap(theta, eps, t):
    """|e^{it} - z| for z = (1-eps) e^{i theta}."""
    eps = np.asarray(eps, dtype=float)
    half = np.sin(0.5 * angle_delta(t, theta))
    return np.sqrt(eps * eps + 4.0 * (1.0 - eps) * half * half)


def unwrap_argument(values) -> list[float]:
    """Continuous argument along a sequence of nonzero complex samples."""
    vals = [complex(v) for v in values]
    if not vals:
        return []
    for k, v in enumerate(vals):
        if v == 0:
            raise ZeroValue(f"sample {k} is zero")
    out = [cmath.phase(vals[0])]
    prev = out[0]
    prev_principal = out[0]
    for k in range(1, len(vals)):
        principal = cmath.phase(vals[k])
        step = math.remainder(principal - prev_principal, TWO_PI)
        if abs(step) >= math.pi:
            raise JumpTooLarge(
                f"argument jump of {step:.3g} rad between samples {k - 1} and {k}"
            )
        # choose the representative of principal closest to the running value
        cur = principal + TWO_PI * round((prev + step - principal) / TWO_PI)
        out.append(cur)
        prev, prev_principal = cur, principal
    return out
