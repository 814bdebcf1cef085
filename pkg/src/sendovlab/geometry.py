"""Distance profiles around the distinguished zero ``a`` and the geometry of
the perpendicular bisector of ``[0, z0]`` against the unit circle."""
from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DegenerateInputError, InvalidInputError, NoIntersectionError
from .polynomial import Polynomial, as_complex, point_to_json, poly_from_roots

DISK_SLACK = 1e-12
EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class RootConfiguration:
    """A zero ``a`` in (0, 1) together with the remaining zeros, all in the closed unit disk."""

    a: float
    zeros: tuple = ()

    def __post_init__(self):
        a = float(self.a)
        if not 0.0 < a < 1.0:
            raise InvalidInputError(f"a must lie in (0, 1), got {a}")
        zeros = tuple(as_complex(z) for z in self.zeros)
        for z in zeros:
            if abs(z) > 1.0 + DISK_SLACK:
                raise InvalidInputError(f"zero {z} lies outside the unit disk")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "zeros", zeros)

    @property
    def n(self) -> int:
        return len(self.zeros) + 1

    def polynomial(self) -> Polynomial:
        return poly_from_roots([complex(self.a)] + list(self.zeros))

    def conjugate(self) -> "RootConfiguration":
        return RootConfiguration(self.a, tuple(z.conjugate() for z in self.zeros))

    def to_json(self) -> dict:
        return {"a": self.a, "zeros": [point_to_json(z) for z in self.zeros]}

    @classmethod
    def from_json(cls, obj: dict) -> "RootConfiguration":
        try:
            return cls(obj["a"], tuple(as_complex(z) for z in obj["zeros"]))
        except KeyError as exc:
            raise InvalidInputError(f"configuration JSON is missing {exc}") from None


@dataclass(frozen=True)
class CriticalProfile:
    crit_points: tuple
    rho: tuple  # |a - zeta_j|, ascending
    r: tuple  # |a - z_k|, ascending

    @property
    def rho1(self) -> float:
        return self.rho[0]


@dataclass(frozen=True)
class DistanceBoundsReport:
    lower_bound: float
    upper_bound: float
    lower_margin: tuple
    upper_margin: tuple
    lower_ok: tuple
    upper_ok: tuple

    @property
    def ok(self) -> bool:
        return all(self.lower_ok) and all(self.upper_ok)


@dataclass(frozen=True)
class BisectorGeometry:
    z0: complex
    r: float
    alpha: float
    star_upper: complex
    star_lower: complex
    beta0: float
    cos_beta0: float
    # True when the smaller-real-part intersection is not the one with Im >= 0
    branch_mismatch: bool = field(default=False)


def distance_profile(cfg: RootConfiguration, crit: Sequence[complex]) -> CriticalProfile:
    """Sort the critical-point and zero distances from ``a``; ties keep input order."""
    crit = tuple(as_complex(z) for z in crit)
    if len(crit) != cfg.n - 1:
        raise InvalidInputError(f"expected {cfg.n - 1} critical points, got {len(crit)}")
    # sorted() is stable, so equal distances stay in index order
    rho = tuple(sorted(abs(cfg.a - z) for z in crit))
    r = tuple(sorted(abs(cfg.a - z) for z in cfg.zeros))
    return CriticalProfile(crit, rho, r)


def check_distance_bounds(profile: CriticalProfile, n: int, a: float, tol: float = 0.0) -> DistanceBoundsReport:
    """Check 2 rho_1 sin(pi/n) <= r_k <= 1 + a for every k.

    Margins are signed (nonnegative means satisfied); ``tol`` absorbs
    rounding in numerically computed critical points.
    """
    lower = 2.0 * profile.rho1 * math.sin(math.pi / n) if profile.rho else 0.0
    upper = 1.0 + a
    lo_m = tuple(rk - lower for rk in profile.r)
    up_m = tuple(upper - rk for rk in profile.r)
    return DistanceBoundsReport(
        lower,
        upper,
        lo_m,
        up_m,
        tuple(m >= -tol for m in lo_m),
        tuple(m >= -tol for m in up_m),
    )


def half_plane_side(z: complex, z0: complex) -> float:
    """|z| - |z - z0|: positive on the z0 side of the bisector, zero on it."""
    if z0 == 0:
        raise DegenerateInputError("bisector of [0, z0] is undefined for z0 = 0")
    return abs(z) - abs(z - z0)


def circle_intersections(z0: complex) -> tuple[complex, complex]:
    """The two points where the bisector of [0, z0] meets the unit circle.

    Closed form ``(1/2 +- i sqrt(4 - |z0|^2) / (2|z0|)) z0``. The first point
    returned is the one with Im >= 0; if both qualify, the one with larger
    real part.
    """
    z0 = as_complex(z0)
    m = abs(z0)
    if m == 0:
        raise DegenerateInputError("bisector of [0, z0] is undefined for z0 = 0")
    if m > 2.0 + 1e-12:
        raise NoIntersectionError(f"|z0| = {m} > 2: bisector misses the unit circle")
    t = math.sqrt(max(4.0 - m * m, 0.0)) / (2.0 * m)
    p = complex(0.5, t) * z0
    q = complex(0.5, -t) * z0
    if p.imag >= 0 and q.imag >= 0:
        return (p, q) if p.real >= q.real else (q, p)
    return (p, q) if p.imag >= q.imag else (q, p)


def cos_beta0_closed_form(a: float, r: float, alpha: float) -> float:
    """Real part of the bisector/unit-circle intersection for z0 = a + r e^{i alpha}.

    This is the branch with the smaller real part whenever sin(alpha) >= 0.
    """
    ca, sa = math.cos(alpha), math.sin(alpha)
    # |z0| from its components; a^2 + 2ar cos(alpha) + r^2 cancels badly near z0 = 0
    mod = math.hypot(a + r * ca, r * sa)
    # alpha = pi leaves sin(alpha) ~ 1e-16 rather than 0, so compare on scale
    if mod <= 4.0 * EPS * (a + r):
        raise DegenerateInputError("z0 = a + r e^{i alpha} is zero")
    rad = 4.0 - mod * mod
    if rad < 0.0:
        if rad < -1e-12:
            raise NoIntersectionError("|z0| > 2")
        rad = 0.0
    return 0.5 * (a + r * ca) - 0.5 * math.sqrt(rad) / mod * r * sa


def bisector_geometry(z0: complex, a: float) -> BisectorGeometry:
    """Assemble the bisector data for z0 relative to the zero ``a``.

    The working point e^{i beta0} is the intersection with the smaller real
    part; ``branch_mismatch`` flags when that point is not also the upper one.
    """
    z0 = as_complex(z0)
    up, lo = circle_intersections(z0)
    w = z0 - a
    chosen = up if up.real <= lo.real else lo
    return BisectorGeometry(
        z0=z0,
        r=abs(w),
        alpha=cmath.phase(w),
        star_upper=up,
        star_lower=lo,
        beta0=cmath.phase(chosen),
        cos_beta0=min(up.real, lo.real),
        branch_mismatch=chosen != up and up.real != lo.real,
    )


def chord_region_min_re(z0: complex) -> float:
    """Smallest real part over {|w| <= 1} on the z0 side of the bisector.

    The extreme point is a chord endpoint unless the arc on the z0 side passes
    through -1.
    """
    up, lo = circle_intersections(z0)
    if half_plane_side(-1.0 + 0j, z0) >= 0.0:
        return -1.0
    return min(up.real, lo.real)
