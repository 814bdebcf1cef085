"""Real-variable extremal analysis behind the lower bound on cos(beta0).

With ``z0 = a + r e^{i alpha}`` and ``x = cos(alpha)`` the real part of the
bisector/unit-circle intersection is ``(a + r F(x)) / 2``. The functions here
evaluate F, its mirror G, the derivative numerators and the closed-form
maximizer of G, and provide independent grid/golden-section oracles plus
exact rational certification of the polynomial identities used to find that
maximizer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._search import golden_section_max
from .errors import DomainError, InvalidInputError

RationalScalar = Fraction

RADICAND_SLACK = 1e-14

# L - R = KAPPA * Q, found by exact expansion and frozen
KAPPA = 4

GRID_POINTS = 1024
REFINE_ITERS = 100
NEAR_DEGENERATE_GAP = 0.05


def _clamp_radicand(v, what):
    v = np.asarray(v, dtype=float)
    if np.any(v < -RADICAND_SLACK):
        raise DomainError(f"{what} is negative ({float(np.min(v)):.3e})")
    return np.maximum(v, 0.0)


def _out(v, scalar):
    return float(v) if scalar else v


def G(a, r, x):
    """x + sqrt((4 - a^2 + 2arx - r^2) / (a^2 - 2arx + r^2)) * sqrt(1 - x^2)."""
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + RADICAND_SLACK):
        raise DomainError("x must lie in [-1, 1]")
    s = _clamp_radicand((1.0 - x) * (1.0 + x), "1 - x^2")
    phi = phi_of_x(a, r, x)
    if np.any(phi <= 0.0):
        raise DomainError("a^2 - 2arx + r^2 must be positive")
    psi = _clamp_radicand((4.0 - phi) / phi, "4 - phi")
    return _out(x + np.sqrt(psi) * np.sqrt(s), scalar)


def F(a, r, x):
    """x - sqrt((4 - a^2 - 2arx - r^2) / (a^2 + 2arx + r^2)) * sqrt(1 - x^2).

    Evaluated as -G(-x); negation is exact, so the mirror identity holds bitwise.
    """
    scalar = np.ndim(x) == 0
    v = -np.asarray(G(a, r, -np.asarray(x, dtype=float)))
    return _out(v, scalar)


def phi_of_x(a, r, x):
    """a^2 - 2arx + r^2, summed as (a - rx)^2 + r^2 (1 - x^2) to avoid cancellation."""
    x = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
    return (a - r * x) ** 2 + r * r * (1.0 - x) * (1.0 + x)


def x_of_phi(a, r, phi):
    return (a * a + r * r - phi) / (2.0 * a * r)


def g1(a, r, x):
    """Numerator of G'(x); same sign as G' on the open interval.

    phi^{3/2} (4-phi)^{1/2} (1-x^2)^{1/2} + 4ar(1-x^2) - x phi (4-phi)
    """
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    phi = phi_of_x(a, r, x)
    if np.any((phi <= 0.0) | (phi >= 4.0)):
        raise DomainError("phi must lie in (0, 4)")
    s = _clamp_radicand((1.0 - x) * (1.0 + x), "1 - x^2")
    v = phi**1.5 * np.sqrt(4.0 - phi) * np.sqrt(s) + 4.0 * a * r * s - x * phi * (4.0 - phi)
    return _out(v, scalar)


def g2(a, r, phi):
    """G1 rewritten in phi alone, scaled by 2ar."""
    scalar = np.ndim(phi) == 0
    phi = np.asarray(phi, dtype=float)
    s = a * a + r * r
    if np.any((phi < 0.0) | (phi > 4.0)):
        raise DomainError("phi must lie in [0, 4]")
    # 4a^2r^2 - (a^2+r^2)^2 + 2(a^2+r^2)phi - phi^2, factored so that it
    # vanishes exactly at phi = (a - r)^2 and (a + r)^2
    inner = _clamp_radicand((phi - (a - r) ** 2) * ((a + r) ** 2 - phi), "inner radicand")
    v = (
        phi**1.5 * np.sqrt(4.0 - phi) * np.sqrt(inner)
        + 8.0 * a * a * r * r
        - 2.0 * s * s
        + (s + 2.0) * phi**2
        - phi**3
    )
    return _out(v, scalar)


# -- exact identities -------------------------------------------------------


def _lr_defining(a, r, phi):
    s = a * a + r * r
    L = phi**3 * (4 - phi) * (4 * a * a * r * r - s * s + 2 * s * phi - phi * phi)
    R = (phi**3 - (s + 2) * phi**2 + 2 * s * s - 8 * a * a * r * r) ** 2
    return L, R


def _lr_expanded(a, r, phi):
    s = a * a + r * r
    t = a * a - r * r
    L = (
        phi**6
        - 2 * (s + 2) * phi**5
        + (8 * s - 4 * a * a * r * r + s * s) * phi**4
        + (16 * a * a * r * r - 4 * s * s) * phi**3
    )
    R = (
        phi**6
        - 2 * (s + 2) * phi**5
        + (s + 2) ** 2 * phi**4
        + 4 * t * t * phi**3
        - 4 * (s + 2) * t * t * phi**2
        + 4 * t**4
    )
    return L, R


def _quartic(a, r, phi):
    d = 1 - r * r
    e = a * a - 1
    ed = e + d
    q = e * d * phi**4 - 2 * ed**2 * phi**3 + (4 + e - d) * ed**2 * phi**2 - ed**4
    q_factored = (e * phi**2 - 2 * ed * phi - ed**2) * (d * phi**2 - 2 * ed * phi + ed**2)
    return q, q_factored


def _rational(v) -> Fraction:
    if isinstance(v, float):
        raise InvalidInputError("exact checks take Fraction or int, not float")
    return Fraction(v)


def quartic_identity_check(a, r, phi) -> tuple[Fraction, Fraction]:
    """Exact residuals ``(L - R - KAPPA*Q, Q - Q_factored)``.

    L and R are the two sides of the squared stationarity condition in their
    defining (unexpanded) form; Q is the quartic in phi and Q_factored its
    product of two quadratics. Both residuals vanish identically.
    """
    a, r, phi = _rational(a), _rational(r), _rational(phi)
    L, R = _lr_defining(a, r, phi)
    q, qf = _quartic(a, r, phi)
    return L - R - KAPPA * q, q - qf


def expansion_identity_check(a, r, phi) -> tuple[Fraction, Fraction]:
    """Exact residuals between the defining and the expanded forms of L and R."""
    a, r, phi = _rational(a), _rational(r), _rational(phi)
    L, R = _lr_defining(a, r, phi)
    Le, Re = _lr_expanded(a, r, phi)
    return L - Le, R - Re


def stationary_phi_exact(a, r) -> Fraction:
    a, r = _rational(a), _rational(r)
    return (a * a - r * r) / (1 + r)


def phi0_factor_residual(a, r) -> Fraction:
    """d phi0^2 - 2(e+d) phi0 + (e+d)^2 at phi0 = (a^2-r^2)/(1+r), exactly."""
    a, r = _rational(a), _rational(r)
    d = 1 - r * r
    e = a * a - 1
    phi0 = stationary_phi_exact(a, r)
    return d * phi0**2 - 2 * (e + d) * phi0 + (e + d) ** 2


def quartic_real_roots(a: float, r: float) -> list[float]:
    """Real roots of both quadratic factors, found numerically (no closed form used)."""
    d = 1.0 - r * r
    e = a * a - 1.0
    ed = e + d
    out = []
    for quad in ((e, -2.0 * ed, -ed * ed), (d, -2.0 * ed, ed * ed)):
        for z in np.roots(quad):
            if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)):
                out.append(float(z.real))
    return sorted(out)


# -- closed form and oracles ------------------------------------------------


@dataclass(frozen=True)
class ExtremalProfile:
    a: float
    r: float
    d: float
    e: float
    phi0: float
    x0: float
    x0_alt: float
    g_max_value: float
    f_lower: float
    x_interval_g: tuple
    x_interval_f: tuple


def closed_form_extremum(a: float, r: float) -> ExtremalProfile:
    """Stationary point of G on [r/a, 1] and the resulting bounds."""
    if not (0.0 < r <= a < 1.0):
        raise InvalidInputError(f"need 0 < r <= a < 1, got a={a}, r={r}")
    phi0 = (a * a - r * r) / (1.0 + r)
    return ExtremalProfile(
        a=a,
        r=r,
        d=1.0 - r * r,
        e=a * a - 1.0,
        phi0=phi0,
        x0=(2.0 * r + a * a + r * r) / (2.0 * a * (1.0 + r)),
        x0_alt=(a * a + r * r - phi0) / (2.0 * a * r),
        g_max_value=(r + 2.0) / a,
        f_lower=-(r + 2.0) / a,
        x_interval_g=(r / a, 1.0),
        x_interval_f=(-1.0, -r / a),
    )


def _mesh(lo, hi, grid, dense_end=None):
    xs = np.linspace(lo, hi, grid)
    if dense_end is not None:
        # geometric refinement towards one endpoint for collapsing brackets
        span = hi - lo
        offs = span * np.geomspace(1.0, 1e-12, grid)
        extra = hi - offs if dense_end == "hi" else lo + offs
        xs = np.unique(np.concatenate([xs, extra]))
    return xs


def _grid_argmax(func, xs, refine_iters):
    vals = func(xs)
    i = int(np.argmax(vals))
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, xs.size - 1)]
    x, v = golden_section_max(lambda t: float(func(t)), lo, hi, refine_iters)
    if v < vals[i]:
        x, v = float(xs[i]), float(vals[i])
    return x, v, float(np.max(vals))


def grid_maximize_g(a: float, r: float, grid: int = GRID_POINTS, refine_iters: int = REFINE_ITERS):
    """Brute-force maximizer of G on [r/a, 1]: uniform grid, then golden section.

    Deliberately ignores the closed-form maximizer.
    """
    if grid < 256:
        raise InvalidInputError("grid must be at least 256")
    lo = r / a
    dense = "hi" if 1.0 - lo < NEAR_DEGENERATE_GAP else None
    xs = _mesh(lo, 1.0, grid, dense)
    x, v, _ = _grid_argmax(lambda t: G(a, r, t), xs, refine_iters)
    return x, v


def grid_minimize_f(a: float, r: float, grid: int = GRID_POINTS, refine_iters: int = REFINE_ITERS):
    """Brute-force minimizer of F on [-1, -r/a]; returns (x_hat, value)."""
    if grid < 256:
        raise InvalidInputError("grid must be at least 256")
    hi = -r / a
    dense = "lo" if 1.0 + hi < NEAR_DEGENERATE_GAP else None
    xs = _mesh(-1.0, hi, grid, dense)
    x, v, _ = _grid_argmax(lambda t: -np.asarray(F(a, r, t)), xs, refine_iters)
    return x, -v


def theorem_bound(a: float, lam: float) -> float:
    """(a - lam (lam + 2) / a) / 2."""
    return 0.5 * (a - lam * (lam + 2.0) / a)


def bound_zero_crossing(a: float) -> float:
    """The lam >= 0 at which theorem_bound(a, lam) changes sign."""
    return math.sqrt(1.0 + a * a) - 1.0


def sweep_grid():
    """(a, r) cells: a = 0.05..0.95 step 0.05, r = 0.1a..0.9a step 0.1a."""
    for i in range(1, 20):
        a = i / 20
        for j in range(1, 10):
            yield a, j * a / 10
