"""Instance-level checks: the hypotheses, the lower bound on |p| over the
circle |z - a| = lam, the point z0 with p(z0) = p(0), the half-plane location
of critical points, and the final lower bound on the real part of a critical
point."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    ConvergenceError,
    DegenerateInputError,
    InvalidInputError,
    NotFoundError,
    SendovLabError,
)
from .extremal import theorem_bound
from .geometry import (
    CriticalProfile,
    RootConfiguration,
    bisector_geometry,
    check_distance_bounds,
    distance_profile,
    half_plane_side,
)
from .polynomial import (
    Polynomial,
    conjugate_flip,
    derivative,
    find_roots,
    min_modulus_on_circle,
    point_to_json,
)

HOLDS = "HOLDS"
VACUOUS = "VACUOUS"
VIOLATED = "VIOLATED"
NUMERICAL_FAILURE = "NUMERICAL_FAILURE"
STATUSES = (HOLDS, VACUOUS, VIOLATED, NUMERICAL_FAILURE)

SIDE_TOL = 1e-9
ROOT_TOL = 1e-10


@dataclass(frozen=True)
class Preconditions:
    """The four hypotheses as flags with signed margins.

    Each flag is ``margin >= 0`` except ``lam_below_a``, which is strict.
    """

    lam_lower_margin: float  # lam - (1 - (1 - |p(0)|)^(1/n))
    lam_upper_margin: float  # sin(pi/n) - lam
    lam_below_a_margin: float  # a - lam
    rho1_margin: float  # rho_1 - 1

    @property
    def lam_lower(self) -> bool:
        return self.lam_lower_margin >= 0.0

    @property
    def lam_upper(self) -> bool:
        return self.lam_upper_margin >= 0.0

    @property
    def lam_below_a(self) -> bool:
        return self.lam_below_a_margin > 0.0

    @property
    def rho1(self) -> bool:
        return self.rho1_margin >= 0.0

    @property
    def all_hold(self) -> bool:
        return self.lam_lower and self.lam_upper and self.lam_below_a and self.rho1

    def to_json(self) -> dict:
        out = {}
        for name in ("lam_lower", "lam_upper", "lam_below_a", "rho1"):
            out[name] = getattr(self, name)
            out[name + "_margin"] = getattr(self, name + "_margin")
        return out


def lambda_window(p0_abs: float, n: int) -> tuple[float, float]:
    """The admissible range [1 - (1 - |p(0)|)^(1/n), sin(pi/n)] for lam."""
    lo = -math.expm1(math.log1p(-p0_abs) / n) if p0_abs < 1.0 else 1.0
    return lo, math.sin(math.pi / n)


def check_preconditions(cfg: RootConfiguration, profile: CriticalProfile, lam: float) -> Preconditions:
    p0_abs = cfg.a * math.prod(abs(z) for z in cfg.zeros)
    lo, hi = lambda_window(p0_abs, cfg.n)
    return Preconditions(
        lam_lower_margin=lam - lo,
        lam_upper_margin=hi - lam,
        lam_below_a_margin=cfg.a - lam,
        rho1_margin=profile.rho1 - 1.0,
    )


def lemma_a_rhs(lam: float, n: int) -> float:
    """1 - (1 - lam)^n without cancellation for small lam or large n."""
    if lam >= 1.0:
        return 1.0
    return -math.expm1(n * math.log1p(-lam))


@dataclass(frozen=True)
class LemmaARecord:
    rho1_ok: bool
    min_mod: float
    argmin: complex
    rhs: float
    margin: float
    status: str


def lemma_a_check(p: Polynomial, a: float, lam: float, profile: CriticalProfile) -> LemmaARecord:
    """Compare min |p| on |z - a| = lam with 1 - (1 - lam)^n.

    Only decisive when rho_1 >= 1; otherwise the margin is still reported but
    the status is VACUOUS.
    """
    n = p.degree
    if not 0.0 < a < 1.0:
        raise InvalidInputError("a must lie in (0, 1)")
    if not 0.0 < lam <= math.sin(math.pi / n) + 1e-15:
        raise InvalidInputError("need 0 < lam <= sin(pi/n)")
    min_mod, argmin = min_modulus_on_circle(p, complex(a), lam)
    rhs = lemma_a_rhs(lam, n)
    margin = min_mod - rhs
    rho1_ok = profile.rho1 >= 1.0
    if not rho1_ok:
        status = VACUOUS
    else:
        status = HOLDS if margin > 0.0 else VIOLATED
    return LemmaARecord(rho1_ok, min_mod, argmin, rhs, margin, status)


def nonzero_level_points(p: Polynomial, tol: float = ROOT_TOL) -> list[complex]:
    """All roots of p(z) - p(0) other than z = 0.

    p(z) - p(0) has zero constant term, so z is divided out exactly by
    dropping it; what remains are the other solutions of p(z) = p(0).
    """
    if p.degree < 2:
        return []
    q = Polynomial(p.coeffs[1:])
    return [z for z in find_roots(q, tol) if abs(z) > 1e-12]


def solve_z0(p: Polynomial, a: float, lam: float, tol: float = ROOT_TOL) -> list[complex]:
    """Nonzero points z0 with p(z0) = p(0) and |z0 - a| <= lam + tol.

    Sorted by distance to ``a``. More than one entry means the univalence
    assumption fails for this instance; callers should flag it.
    """
    if lam <= 0:
        raise InvalidInputError("lam must be positive")
    found = [z for z in nonzero_level_points(p, tol) if abs(z - a) <= lam + tol]
    if not found:
        raise NotFoundError(f"no nonzero solution of p(z) = p(0) within {lam} of a = {a}")
    return sorted(found, key=lambda z: (abs(z - a), z.real, z.imag))


@dataclass(frozen=True)
class GraceHeawoodRecord:
    z0: complex
    side_pos: bool
    side_neg: bool
    witness_pos: Optional[complex]
    witness_neg: Optional[complex]
    sides: tuple

    @property
    def ok(self) -> bool:
        return self.side_pos and self.side_neg


def grace_heawood_check(
    p: Polynomial,
    z0: complex,
    tol: float = SIDE_TOL,
    crit: Optional[Sequence[complex]] = None,
) -> GraceHeawoodRecord:
    """Does each closed half-plane of the bisector of [0, z0] hold a critical point?

    The witness on each side is the critical point deepest into that side.
    """
    if z0 == 0:
        raise DegenerateInputError("z0 = 0 leaves the bisector undefined")
    if crit is None:
        crit = find_roots(derivative(p))
    sides = tuple(half_plane_side(z, z0) for z in crit)
    i_pos = int(np.argmax(sides))
    i_neg = int(np.argmin(sides))
    pos = sides[i_pos] >= -tol
    neg = sides[i_neg] <= tol
    return GraceHeawoodRecord(
        z0=z0,
        side_pos=pos,
        side_neg=neg,
        witness_pos=crit[i_pos] if pos else None,
        witness_neg=crit[i_neg] if neg else None,
        sides=sides,
    )


@dataclass(frozen=True)
class ChainRecord:
    z0: complex
    r: float
    cos_b0: Optional[float]
    bound_r: float
    best_re: Optional[float]
    witness: Optional[complex]
    ok: bool
    gh_failure: bool = False


def chain_check(
    p: Polynomial,
    cfg: RootConfiguration,
    z0: complex,
    tol: float = SIDE_TOL,
    crit: Optional[Sequence[complex]] = None,
) -> ChainRecord:
    """Largest real part among critical points on the z0 side versus (a - r(r+2)/a)/2.

    Requires Im z0 >= 0; use :func:`orient_upper` first otherwise.
    """
    if z0 == 0:
        raise DegenerateInputError("z0 = 0 leaves the bisector undefined")
    if z0.imag < -tol:
        raise InvalidInputError("chain_check expects Im z0 >= 0; conjugate first")
    if crit is None:
        crit = find_roots(derivative(p))
    a = cfg.a
    r = abs(z0 - a)
    bound_r = theorem_bound(a, r)
    cos_b0 = bisector_geometry(z0, a).cos_beta0 if abs(z0) <= 2.0 else None
    on_side = [z for z in crit if half_plane_side(z, z0) >= -tol]
    if not on_side:
        return ChainRecord(z0, r, cos_b0, bound_r, None, None, False, gh_failure=True)
    witness = max(on_side, key=lambda z: (z.real, z.imag))
    return ChainRecord(z0, r, cos_b0, bound_r, witness.real, witness, witness.real >= bound_r - tol)


def orient_upper(p: Polynomial, cfg: RootConfiguration, z0: complex):
    """Conjugate the instance when Im z0 < 0 so that z0 lies in the upper half-plane.

    Returns ``(p, cfg, z0, flipped)``.
    """
    if z0.imag < 0:
        return conjugate_flip(p), cfg.conjugate(), z0.conjugate(), True
    return p, cfg, z0, False


@dataclass
class TheoremVerdict:
    a: float
    lam: float
    preconds: Preconditions
    bound: float
    status: str
    z0: Optional[complex] = None
    r: Optional[float] = None
    witness: Optional[complex] = None
    chain_ok: Optional[bool] = None
    non_unique: bool = False
    note: str = ""
    rho1: float = float("nan")
    distance_bounds_ok: Optional[bool] = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def pt(z):
            return None if z is None else point_to_json(z)

        return {
            "a": self.a,
            "lambda": self.lam,
            "preconds": self.preconds.to_json(),
            "z0": pt(self.z0),
            "r": self.r,
            "bound": self.bound,
            "witness": pt(self.witness),
            "status": self.status,
            "chain_ok": self.chain_ok,
            "non_unique": self.non_unique,
            "note": self.note,
            "rho1": self.rho1,
            "distance_bounds_ok": self.distance_bounds_ok,
        }


def theorem_verdict(cfg: RootConfiguration, lam: float, tol: float = SIDE_TOL) -> TheoremVerdict:
    """Evaluate the main claim on one configuration.

    Every nonzero z0 with p(z0) = p(0) inside |z - a| <= lam is examined and
    the worst case kept. The chain check runs even when the hypotheses fail,
    so vacuous verdicts still carry a tested chain.
    """
    bound = theorem_bound(cfg.a, lam)
    p = cfg.polynomial()
    nan_pre = Preconditions(float("nan"), float("nan"), cfg.a - lam, float("nan"))
    try:
        crit = find_roots(derivative(p), ROOT_TOL)
    except ConvergenceError as exc:
        return TheoremVerdict(cfg.a, lam, nan_pre, bound, NUMERICAL_FAILURE, note=str(exc))
    profile = distance_profile(cfg, crit)
    pre = check_preconditions(cfg, profile, lam)
    dist_ok = check_distance_bounds(profile, cfg.n, cfg.a, tol=tol).ok
    verdict = TheoremVerdict(cfg.a, lam, pre, bound, VACUOUS, rho1=profile.rho1, distance_bounds_ok=dist_ok)

    try:
        level = nonzero_level_points(p, ROOT_TOL)
    except SendovLabError as exc:
        verdict.status = NUMERICAL_FAILURE
        verdict.note = str(exc)
        return verdict
    candidates = sorted(
        (z for z in level if lam > 0 and abs(z - cfg.a) <= lam + ROOT_TOL),
        key=lambda z: (abs(z - cfg.a), z.real, z.imag),
    )
    verdict.non_unique = len(candidates) > 1

    def run_chain(z0):
        q, qcfg, qz0, flipped = orient_upper(p, cfg, z0)
        rec = chain_check(q, qcfg, qz0, tol, [z.conjugate() for z in crit] if flipped else crit)
        w = rec.witness.conjugate() if flipped and rec.witness is not None else rec.witness
        return rec, w

    worst = None
    chain_all_ok = True
    for z0 in candidates:
        rec, w = run_chain(z0)
        chain_all_ok = chain_all_ok and rec.ok
        margin = -math.inf if rec.best_re is None else rec.best_re - bound
        if worst is None or margin < worst[0]:
            worst = (margin, z0, rec, w)

    if worst is not None:
        _, z0, rec, w = worst
        verdict.z0, verdict.r, verdict.witness = z0, rec.r, w
        verdict.chain_ok = chain_all_ok
    elif level:
        # nothing inside the disk: the unconditional chain still gets exercised
        verdict.chain_ok = all(run_chain(z)[0].ok for z in level)
        verdict.note = "no z0 in disk; chain checked on all level points"

    if not pre.all_hold:
        verdict.status = VACUOUS
        return verdict
    if worst is None:
        verdict.status = VIOLATED
        verdict.note = "hypotheses hold but no z0 with p(z0) = p(0) in the disk"
    elif worst[0] >= -tol:
        verdict.status = HOLDS
    else:
        verdict.status = VIOLATED
    return verdict
