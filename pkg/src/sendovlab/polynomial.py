"""Complex polynomials: construction, Horner evaluation, differentiation and
simultaneous (Aberth-Ehrlich) root finding.

Complex points are plain Python ``complex`` values; coefficient vectors are
``numpy`` complex128 arrays in ascending degree order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from ._search import golden_section_max
from .errors import ConvergenceError, InvalidInputError

EPS = np.finfo(float).eps

DEFAULT_TOL = 1e-10
DEFAULT_MAXITER = 300
CIRCLE_SAMPLES = 4096
CIRCLE_REFINE_ITERS = 60
# resume in double-double when a root's first-order error estimate exceeds this
REFINE_GATE = 1e-12


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Polynomial with complex coefficients, ascending degree.

    The coefficient array is copied and made read-only, so instances can be
    shared freely. ``lo`` optionally holds the rounding residue of each
    coefficient, so that ``coeffs + lo`` is a double-double value; root
    finding uses it when double precision is not enough. It defaults to
    zeros. Equality compares ``coeffs`` only.
    """

    coeffs: np.ndarray
    lo: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise InvalidInputError("polynomial needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("coefficients must be finite")
        if c[-1] == 0:
            raise InvalidInputError("leading coefficient must be nonzero")
        if self.lo is None:
            lo = np.zeros_like(c)
        else:
            lo = np.array(self.lo, dtype=complex).ravel()
            if lo.shape != c.shape or not np.all(np.isfinite(lo)):
                raise InvalidInputError("lo must be finite and match coeffs in length")
        c.setflags(write=False)
        lo.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "lo", lo)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def __call__(self, z):
        return evaluate(self, z)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        terms = ", ".join(f"{complex(c):.6g}" for c in self.coeffs)
        return f"Polynomial([{terms}])"

    def max_coeff(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def to_json(self) -> dict:
        return {"coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}


def as_complex(value) -> complex:
    """Coerce ``[re, im]`` pairs, reals and complex numbers to ``complex``."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InvalidInputError(f"complex point must be [re, im], got {value!r}")
        z = complex(float(value[0]), float(value[1]))
    else:
        z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidInputError(f"complex point must be finite, got {z!r}")
    return z


def point_to_json(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def poly_from_json(obj: dict) -> Polynomial:
    """Read either ``{"coeffs": [[re, im], ...]}`` or ``{"zeros": [[re, im], ...]}``."""
    if "coeffs" in obj:
        return Polynomial(np.array([as_complex(c) for c in obj["coeffs"]]))
    if "zeros" in obj:
        return poly_from_roots([as_complex(z) for z in obj["zeros"]])
    raise InvalidInputError("polynomial JSON needs a 'coeffs' or 'zeros' key")


def roots_to_json(roots: Iterable[complex]) -> dict:
    return {"zeros": [point_to_json(complex(z)) for z in roots]}


def poly_from_roots(roots: Sequence[complex]) -> Polynomial:
    """Monic polynomial with exactly the given zeros (with multiplicity)."""
    roots = [as_complex(z) for z in roots]
    if not roots:
        raise InvalidInputError("poly_from_roots needs at least one root")
    return Polynomial(*_exact_product_coeffs(roots))


def _split_ratio(num: int, den: int) -> tuple[float, float]:
    """num/den as hi + lo: hi correctly rounded, lo the rounded remainder."""
    hi = num / den
    return hi, float(Fraction(num, den) - Fraction(hi))


def _exact_product_coeffs(roots: Sequence[complex]) -> tuple[np.ndarray, np.ndarray]:
    """Ascending coefficients of prod (z - r) as double-double pairs.

    Every double is an integer over a power of two, so after scaling by a
    common 2**shift the product is formed exactly in Gaussian integers; each
    coefficient is rounded once at the end. The second array keeps the bits
    the double rounding drops; at high degree those bits move the roots far
    more than any iteration error does.
    """
    parts = []
    shift = 0
    for r in roots:
        for x in (r.real, r.imag):
            num, den = x.as_integer_ratio()
            parts.append((num, den))
            shift = max(shift, den.bit_length() - 1)
    ints = [num << (shift - (den.bit_length() - 1)) for num, den in parts]
    # descending coefficients of prod (Z - R_k) with Z = 2**shift z, R_k = 2**shift r_k
    re_c, im_c = [1], [0]
    for k in range(len(roots)):
        xr, xi = ints[2 * k], ints[2 * k + 1]
        new_re = re_c + [0]
        new_im = im_c + [0]
        for j in range(len(re_c)):
            new_re[j + 1] -= re_c[j] * xr - im_c[j] * xi
            new_im[j + 1] -= re_c[j] * xi + im_c[j] * xr
        re_c, im_c = new_re, new_im
    n = len(roots)
    # the Z^(n-j) coefficient equals c_(n-j) * 2**(shift*j)
    hi = np.empty(n + 1, dtype=complex)
    lo = np.empty(n + 1, dtype=complex)
    for j in range(n + 1):
        den = 1 << (shift * j)
        rh, rl = _split_ratio(re_c[j], den)
        ih, il = _split_ratio(im_c[j], den)
        hi[n - j] = complex(rh, ih)
        lo[n - j] = complex(rl, il)
    return hi, lo


def evaluate(p: Polynomial, z):
    """Horner evaluation from the leading coefficient down.

    Accepts a scalar or an array of points; scalars return ``complex``.
    """
    c = p.coeffs
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    acc = np.full(z.shape, c[-1], dtype=complex)
    for k in range(c.size - 2, -1, -1):
        acc = acc * z + c[k]
    return complex(acc) if scalar else acc


def derivative(p: Polynomial) -> Polynomial:
    if p.degree < 1:
        raise InvalidInputError("cannot differentiate a constant polynomial")
    k = np.arange(1, p.degree + 1, dtype=float)
    c = p.coeffs[1:]
    re, re_err = _two_prod(c.real, k)
    im, im_err = _two_prod(c.imag, k)
    return Polynomial(re + 1j * im, (re_err + 1j * im_err) + p.lo[1:] * k)


def conjugate_flip(p: Polynomial) -> Polynomial:
    """The polynomial z -> conj(p(conj(z))); its zeros are the conjugates of p's."""
    return Polynomial(np.conj(p.coeffs), np.conj(p.lo))


def cauchy_radius(p: Polynomial) -> float:
    """Unique positive root of |c_n| x^n - sum_{k<n} |c_k| x^k.

    Every zero of ``p`` lies in the closed disk of this radius.
    """
    m = (np.abs(p.coeffs) / abs(p.leading)).tolist()
    n = p.degree
    if not any(m[:-1]):
        return 0.0
    # h(x) = x^n - sum m_k x^k is increasing and convex beyond its positive
    # root, so Newton from the classical bound 1 + max m_k descends onto it
    x = 1.0 + max(m[:-1])
    for _ in range(200):
        h, dh = 1.0, 0.0
        for mk in reversed(m[:-1]):
            dh = dh * x + h
            h = h * x - mk
        if dh <= 0.0:
            break
        step = h / dh
        x -= step
        if step <= 1e-6 * x:
            break
    return x


# -- error-free transformations for double-double evaluation ---------------

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    """a * b as p + e exactly (Dekker)."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_mul_add(xh, xl, yh, yl, zr, zi, ch, cl):
    """Real and imaginary parts of (x + i y) * (zr + i zi) + c in double-double.

    ``x``, ``y`` and ``c`` are (hi, lo) pairs, ``z`` plain doubles.
    """
    p1, e1 = _two_prod(xh, zr)
    p2, e2 = _two_prod(yh, -zi)
    s, e3 = _two_sum(p1, p2)
    s, e4 = _two_sum(s, ch.real)
    re_h, re_l = _two_sum(s, e1 + e2 + e3 + e4 + (xl * zr - yl * zi) + cl.real)
    q1, f1 = _two_prod(xh, zi)
    q2, f2 = _two_prod(yh, zr)
    t, f3 = _two_sum(q1, q2)
    t, f4 = _two_sum(t, ch.imag)
    im_h, im_l = _two_sum(t, f1 + f2 + f3 + f4 + (xl * zi + yl * zr) + cl.imag)
    return re_h, re_l, im_h, im_l


def _dd_value_and_slope(hi: np.ndarray, lo: np.ndarray, z: np.ndarray):
    """p(z) and p'(z) by Horner in double-double, rounded to complex128.

    Accurate to about one ulp of the result plus eps**2 * sum |c_k||z|^k,
    which is what lets badly conditioned roots be located to full double
    precision.
    """
    zr, zi = z.real, z.imag
    zero = np.zeros(z.shape)
    ph, pl = np.full(z.shape, hi[-1].real), np.full(z.shape, lo[-1].real)
    qh, ql = np.full(z.shape, hi[-1].imag), np.full(z.shape, lo[-1].imag)
    dph, dpl, dqh, dql = zero, zero, zero, zero
    for k in range(hi.size - 2, -1, -1):
        # p' first, since it folds in the old p
        dph, dpl, dqh, dql = _dd_mul_add(dph, dpl, dqh, dql, zr, zi, ph + 1j * qh, pl + 1j * ql)
        ph, pl, qh, ql = _dd_mul_add(ph, pl, qh, ql, zr, zi, hi[k], lo[k])
    return (ph + pl) + 1j * (qh + ql), (dph + dpl) + 1j * (dqh + dql)


def _value_and_slope(c: np.ndarray, dc: np.ndarray, ac: np.ndarray, z: np.ndarray):
    """p(z), p'(z) and sum |c_k||z|^k at every point, via one power table.

    Used only inside the iteration, where a handful of array calls beats a
    Python-level Horner loop; final residuals still go through ``evaluate``.
    """
    m = z.size
    powers = np.empty((m, c.size), dtype=complex)
    powers[:, 0] = 1.0
    np.cumprod(np.broadcast_to(z[:, None], (m, c.size - 1)), axis=1, out=powers[:, 1:])
    return powers @ c, powers[:, :-1] @ dc, np.abs(powers) @ ac


def find_roots(p: Polynomial, tol: float = DEFAULT_TOL, maxiter: int = DEFAULT_MAXITER) -> list[complex]:
    """All ``p.degree`` zeros of ``p`` by Aberth-Ehrlich iteration.

    Starting points are roots of unity scaled to the Cauchy radius and rotated
    off the real axis. Each root is frozen once its residual reaches the
    roundoff level of Horner's rule or its correction stalls at machine
    precision. When the first-order error estimate of any root exceeds
    ``REFINE_GATE`` the iteration is resumed with double-double evaluation
    of ``p.coeffs + p.lo``. Every returned root satisfies
    ``|p(root)| <= tol * max|coeff|``, otherwise :class:`ConvergenceError`
    is raised carrying the best iterate.
    """
    if tol <= 0:
        raise InvalidInputError("tol must be positive")
    n = p.degree
    if n < 1:
        raise InvalidInputError("find_roots needs degree >= 1")
    scale = p.max_coeff()
    if n == 1:
        return [complex(-(p.coeffs[0] + p.lo[0]) / p.coeffs[1])]

    c = p.coeffs / p.leading
    dc = c[1:] * np.arange(1, n + 1)
    ac = np.abs(c)

    def fast(z):
        return _value_and_slope(c, dc, ac, z)

    def accurate(z):
        pz, dpz = _dd_value_and_slope(p.coeffs, p.lo, z)
        return pz, dpz, np.abs(_value_and_slope(c, dc, ac, z)[2]) * abs(p.leading)

    radius = max(cauchy_radius(p), 1e-3)
    angles = 2.0 * np.pi * np.arange(n) / n + 0.4
    z = _aberth(fast, radius * np.exp(1j * angles), 2.0 * (n + 1) * EPS, maxiter)

    pz, dpz, err = fast(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        estimate = np.maximum(EPS * err, np.abs(pz)) / np.abs(dpz)
    if not np.all(estimate <= REFINE_GATE):
        z = _aberth(accurate, z, 4.0 * (n + 1) * EPS * EPS, maxiter)

    residuals = np.abs(evaluate(p, z))
    if np.any(residuals > tol * scale):
        raise ConvergenceError(
            f"root iteration missed residual contract (max residual "
            f"{residuals.max():.3e} > {tol * scale:.3e})",
            best=[complex(v) for v in z],
            residuals=residuals.tolist(),
        )
    return [complex(v) for v in z]


def _aberth(evaluator, z: np.ndarray, slack: float, maxiter: int) -> np.ndarray:
    """Aberth-Ehrlich sweeps from starting points ``z``.

    ``evaluator(points)`` returns ``(p, p', bound)``; a point is frozen when
    ``|p| <= slack * bound`` or when its correction drops to rounding level.
    """
    n = z.size
    z = z.copy()
    active = np.ones(n, dtype=bool)
    rows = np.arange(n)
    for _ in range(maxiter):
        idx = np.flatnonzero(active)
        za = z[idx]
        pz, dpz, err = evaluator(za)
        done = np.abs(pz) <= slack * err
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            w = pz / dpz
            diff = za[:, None] - z[None, :]
            diff[rows[: idx.size], idx] = np.inf
            corr = w / (1.0 - w * np.sum(1.0 / diff, axis=1))
        bad = ~np.isfinite(corr)
        if bad.any():
            # p'(z) = 0 or a collision: nudge off it
            corr[bad] = 1e-8 * (1.0 + np.abs(za[bad]))
        corr[done] = 0.0
        stalled = np.abs(corr) <= 2.0 * EPS * np.abs(za)
        z[idx] = za - corr
        active[idx[done | stalled]] = False
        if not active.any():
            break
    return z


def root_clusters(roots: Sequence[complex], radius: float) -> list[list[int]]:
    """Group root indices whose mutual distance chain stays within ``radius``.

    Only groups with more than one member are returned; an empty list means
    every root is isolated at that resolution.
    """
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [g for g in groups.values() if len(g) > 1]


def min_modulus_on_circle(
    p: Polynomial,
    center: complex,
    radius: float,
    samples: int = CIRCLE_SAMPLES,
    refine_iters: int = CIRCLE_REFINE_ITERS,
) -> tuple[float, complex]:
    """Minimum of |p| over the circle |z - center| = radius.

    Dense angular sampling locates the best sample; golden-section search
    then refines inside the bracket formed by its two neighbours. The result
    is only as global as the sampling: a dip narrower than the sample spacing
    can be missed.
    """
    if radius <= 0:
        raise InvalidInputError("radius must be positive")
    if samples < 64:
        raise InvalidInputError("samples must be at least 64")
    center = as_complex(center)
    step = 2.0 * np.pi / samples
    theta = step * np.arange(samples)
    vals = np.abs(evaluate(p, center + radius * np.exp(1j * theta)))
    i = int(np.argmin(vals))
    best_t, best_v = float(theta[i]), float(vals[i])

    def neg_mod(t):
        return -abs(evaluate(p, center + radius * complex(math.cos(t), math.sin(t))))

    t, v = golden_section_max(neg_mod, best_t - step, best_t + step, refine_iters)
    if -v < best_v:
        best_t, best_v = t, -v
    return best_v, center + radius * complex(math.cos(best_t), math.sin(best_t))
