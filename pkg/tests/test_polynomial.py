import cmath
import json
from fractions import Fraction

import mpmath

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linear_sum_assignment
from scipy.spatial import ConvexHull

from sendovlab.errors import ConvergenceError, InvalidInputError
from sendovlab import polynomial as poly_mod
from sendovlab.polynomial import (
    Polynomial,
    cauchy_radius,
    conjugate_flip,
    derivative,
    evaluate,
    find_roots,
    min_modulus_on_circle,
    poly_from_json,
    poly_from_roots,
    root_clusters,
    roots_to_json,
)


def match_error(found, expected):
    found, expected = np.asarray(found), np.asarray(expected)
    cost = np.abs(found[:, None] - expected[None, :])
    i, j = linear_sum_assignment(cost)
    return float(cost[i, j].max())


def separated_disk_sample(rng, n, sep=1e-3):
    pts = []
    while len(pts) < n:
        z = np.sqrt(rng.random()) * cmath.exp(2j * np.pi * rng.random())
        if all(abs(z - w) >= sep for w in pts):
            pts.append(z)
    return pts


unit_disk = st.builds(
    lambda r, t: complex(r * np.cos(t), r * np.sin(t)),
    st.floats(0.0, 1.0),
    st.floats(0.0, 2 * np.pi),
)


def test_from_roots_examples():
    assert np.allclose(poly_from_roots([1, -1]).coeffs, [-1, 0, 1])
    assert np.allclose(poly_from_roots([0.5, -1]).coeffs, [-0.5, 0.5, 1])
    assert np.allclose(poly_from_roots([0]).coeffs, [0, 1])


def test_from_roots_is_exact_for_dyadic_roots():
    p = poly_from_roots([0.5, -0.25, 0.125j])
    # (z-1/2)(z+1/4)(z-i/8), expanded by hand
    want = [0.015625j, -0.125 + 0.03125j, -0.25 - 0.125j, 1]
    assert np.array_equal(p.coeffs, np.array(want, dtype=complex))


def test_from_roots_order_independent(rng):
    roots = list(rng.normal(size=20) + 1j * rng.normal(size=20))
    a = poly_from_roots(roots)
    b = poly_from_roots(roots[::-1])
    assert a == b


def test_evaluate_examples():
    p = Polynomial([-1, 0, 1])
    assert evaluate(p, 2) == 3
    assert evaluate(p, 1j) == -2
    q = poly_from_roots([0.6, -0.2])
    assert evaluate(q, 0) == pytest.approx(-0.12, abs=1e-15)
    assert np.allclose(evaluate(p, np.array([0, 1, 2])), [-1, 0, 3])


def test_derivative_examples():
    assert np.allclose(derivative(Polynomial([-1, 0, 1])).coeffs, [0, 2])
    d = derivative(poly_from_roots([0.5, -1]))
    assert np.allclose(d.coeffs, [0.5, 2])
    assert find_roots(d) == [pytest.approx(-0.25)]
    assert np.allclose(derivative(Polynomial([0, 1])).coeffs, [1])


def test_derivative_of_constant_rejected():
    with pytest.raises(InvalidInputError):
        derivative(Polynomial([3.0]))


def test_polynomial_validation():
    with pytest.raises(InvalidInputError):
        Polynomial([1, 0])
    with pytest.raises(InvalidInputError):
        Polynomial([])
    with pytest.raises(InvalidInputError):
        Polynomial([np.nan, 1])
    p = Polynomial([1, 2])
    with pytest.raises(ValueError):
        p.coeffs[0] = 5


def test_find_roots_examples():
    r = sorted(find_roots(Polynomial([-1, 0, 1])), key=lambda z: z.real)
    assert r == [pytest.approx(-1), pytest.approx(1)]
    assert find_roots(Polynomial([0.5, 2])) == [pytest.approx(-0.25)]


def test_find_roots_round_trip_degree_12(rng):
    roots = separated_disk_sample(rng, 12)
    got = find_roots(poly_from_roots(roots))
    assert match_error(got, roots) <= 1e-8


@pytest.mark.parametrize("n", [2, 5, 10, 15, 20, 30, 40, 50])
def test_round_trip_degree(n):
    rng = np.random.default_rng(n)
    for _ in range(20):
        roots = separated_disk_sample(rng, n)
        assert match_error(find_roots(poly_from_roots(roots)), roots) <= 1e-8


@pytest.mark.parametrize("n", [30, 40, 50])
def test_double_only_coefficients_within_condition_bound(n):
    """Without the low-order parts the rounded coefficients alone move the
    roots; the finder must still land within a small multiple of the
    first-order perturbation bound."""
    rng = np.random.default_rng(100 + n)
    eps = np.finfo(float).eps
    for _ in range(10):
        roots = separated_disk_sample(rng, n)
        p = Polynomial(poly_from_roots(roots).coeffs)
        dp = derivative(p)
        got = np.asarray(find_roots(p))
        exp = np.asarray(roots)
        cost = np.abs(got[:, None] - exp[None, :])
        i, j = linear_sum_assignment(cost)
        absp = Polynomial(np.abs(p.coeffs))
        for gi, ej in zip(i, j):
            z = exp[ej]
            cond = eps * abs(evaluate(absp, abs(z))) / abs(evaluate(dp, z))
            assert cost[gi, ej] <= 20 * cond + 1e-13


def test_residual_contract(rng):
    for n in (3, 17, 40, 50):
        p = poly_from_roots(separated_disk_sample(rng, n))
        tol = 1e-10
        for z in find_roots(p, tol):
            assert abs(evaluate(p, z)) <= tol * p.max_coeff()


def test_multiple_roots_are_found_to_residual():
    p = poly_from_roots([0.3, 0.3, 0.3, -0.5j])
    got = find_roots(p)
    assert len(got) == 4
    assert match_error(got, [0.3, 0.3, 0.3, -0.5j]) < 1e-4
    assert root_clusters(got, 1e-3) == [[i for i, z in enumerate(got) if abs(z - 0.3) < 1e-3]]


def test_convergence_error_carries_best_iterate(rng):
    p = poly_from_roots(separated_disk_sample(rng, 25))
    with pytest.raises(ConvergenceError) as err:
        find_roots(p, tol=1e-10, maxiter=1)
    assert err.value.best is not None and len(err.value.best) == 25
    assert err.value.residuals is not None


def test_find_roots_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        find_roots(Polynomial([2.0]))
    with pytest.raises(InvalidInputError):
        find_roots(Polynomial([1, 1]), tol=0)


def test_cauchy_radius_bounds_roots(rng):
    for _ in range(20):
        roots = 2 * rng.normal(size=8) + 1j * rng.normal(size=8)
        p = poly_from_roots(roots)
        assert np.max(np.abs(roots)) <= cauchy_radius(p) * (1 + 1e-6)


def _outside_distance(q, hull):
    # hull.equations rows are (normal, offset) with normal.x + offset <= 0 inside
    return float(np.max(hull.equations[:, :2] @ q + hull.equations[:, 2]))


@given(st.lists(unit_disk, min_size=3, max_size=10))
def test_gauss_lucas_hull(zeros):
    pts = np.array([[z.real, z.imag] for z in zeros])
    d = np.abs(np.subtract.outer(zeros, zeros)) + np.eye(len(zeros))
    if d.min() < 0.05:
        return  # repeated zeros give sqrt(eps)-accurate critical points
    try:
        hull = ConvexHull(pts)
    except Exception:
        return  # collinear input has an empty interior
    for c in find_roots(derivative(poly_from_roots(zeros))):
        assert _outside_distance(np.array([c.real, c.imag]), hull) <= 1e-9


def test_gauss_lucas_collinear_zeros():
    zeros = [-0.9, -0.1, 0.4, 0.8]
    for c in find_roots(derivative(poly_from_roots(zeros))):
        assert abs(c.imag) <= 1e-12 and -0.9 <= c.real <= 0.8


def test_conjugate_flip_examples():
    p = Polynomial([-1, 0, 1])
    assert conjugate_flip(p) == p
    q = conjugate_flip(poly_from_roots([0.5, 1j]))
    assert match_error(find_roots(q), [0.5, -1j]) < 1e-12


@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=2, max_size=8))
def test_conjugate_flip_involution(cs):
    c = [complex(x, y) for x, y in cs]
    if c[-1] == 0:
        c[-1] = 1
    p = Polynomial(c)
    assert conjugate_flip(conjugate_flip(p)) == p


@given(st.lists(unit_disk, min_size=1, max_size=8), unit_disk)
def test_conjugate_flip_evaluates_conjugated(zeros, z):
    p = poly_from_roots(zeros)
    want = np.conj(evaluate(p, np.conj(z)))
    assert abs(evaluate(conjugate_flip(p), z) - want) <= 1e-12 * (1 + abs(want))


def test_json_forms():
    p = poly_from_roots([0.5, 1j])
    text = json.dumps(p.to_json())
    assert poly_from_json(json.loads(text)) == p
    assert poly_from_json(roots_to_json([0.5, 1j])) == p
    with pytest.raises(InvalidInputError):
        poly_from_json({"nope": []})


def test_min_modulus_examples():
    v, _ = min_modulus_on_circle(Polynomial([0, 1]), 0, 1)
    assert v == pytest.approx(1.0, abs=1e-14)
    v, z = min_modulus_on_circle(Polynomial([-1, 1]), 0, 1)
    assert v <= 1e-9 and abs(z - 1) <= 1e-9
    v, z = min_modulus_on_circle(poly_from_roots([0.5, -1]), 0.5, 0.3)
    assert v == pytest.approx(0.36, abs=1e-12)
    assert abs(z - 0.2) <= 1e-6


def test_min_modulus_against_brute_force(rng):
    for _ in range(10):
        p = poly_from_roots(separated_disk_sample(rng, 7))
        c = complex(rng.uniform(0.1, 0.9))
        rad = rng.uniform(0.05, 0.5)
        v, z = min_modulus_on_circle(p, c, rad)
        t = np.linspace(0, 2 * np.pi, 200_001)
        brute = np.abs(evaluate(p, c + rad * np.exp(1j * t))).min()
        assert v <= brute + 1e-12
        assert v >= brute - 1e-6
        assert abs(abs(z - c) - rad) <= 1e-12
        assert abs(abs(evaluate(p, z)) - v) <= 1e-15


def test_min_modulus_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        min_modulus_on_circle(Polynomial([0, 1]), 0, 0)
    with pytest.raises(InvalidInputError):
        min_modulus_on_circle(Polynomial([0, 1]), 0, 1, samples=10)


def _exact_coeffs(roots):
    """Exact product coefficients as pairs of Fractions, ascending."""
    c = [(Fraction(1), Fraction(0))]
    for r in roots:
        xr, xi = Fraction(r.real), Fraction(r.imag)
        nxt = [(Fraction(0), Fraction(0))] * (len(c) + 1)
        for k, (cr, ci) in enumerate(c):
            a, b = nxt[k + 1]
            nxt[k + 1] = (a + cr, b + ci)
            a, b = nxt[k]
            nxt[k] = (a - (cr * xr - ci * xi), b - (cr * xi + ci * xr))
        c = nxt
    return c


def test_from_roots_double_double_against_fractions(rng):
    roots = [complex(v) for v in rng.normal(size=15) + 1j * rng.normal(size=15)]
    p = poly_from_roots(roots)
    for (er, ei), hi, lo in zip(_exact_coeffs(roots), p.coeffs, p.lo):
        assert hi.real == float(er) and hi.imag == float(ei)
        for exact, h, l in ((er, hi.real, lo.real), (ei, hi.imag, lo.imag)):
            assert abs(exact - Fraction(h) - Fraction(l)) <= abs(exact) * Fraction(1, 2**104) + Fraction(1, 2**1000)


normal_float = st.floats(-1e10, 1e10).filter(lambda v: v == 0 or abs(v) > 1e-100)


@given(normal_float, normal_float)
def test_two_prod_is_exact(a, b):
    # exact away from underflow, which never occurs for coefficient-sized values
    p, e = poly_mod._two_prod(np.array([a]), np.array([b]))
    assert Fraction(float(p[0])) + Fraction(float(e[0])) == Fraction(a) * Fraction(b)


def test_double_double_horner_against_mpmath(rng):
    mpmath.mp.dps = 50
    roots = separated_disk_sample(rng, 40)
    p = poly_from_roots(roots)
    z = np.array(separated_disk_sample(rng, 20))
    val, slope = poly_mod._dd_value_and_slope(p.coeffs, p.lo, z)
    cm = [mpmath.mpc(float(h.real), float(h.imag)) + mpmath.mpc(float(l.real), float(l.imag))
          for h, l in zip(p.coeffs, p.lo)]
    for k, zk in enumerate(z):
        want = mpmath.polyval(cm[::-1], mpmath.mpc(zk), derivative=True)
        scale = float(sum(abs(c) * abs(zk) ** j for j, c in enumerate(cm)))
        assert abs(val[k] - complex(want[0])) <= 2.3e-16 * abs(complex(want[0])) + 1e-28 * scale
        assert abs(slope[k] - complex(want[1])) <= 2.3e-16 * abs(complex(want[1])) + 1e-26 * scale


def test_derivative_keeps_low_order_parts(rng):
    roots = [complex(v) for v in rng.normal(size=12) + 1j * rng.normal(size=12)]
    d = derivative(poly_from_roots(roots))
    for k, ((er, ei), hi, lo) in enumerate(zip(_exact_coeffs(roots)[1:], d.coeffs, d.lo), start=1):
        for exact, h, l in ((er * k, hi.real, lo.real), (ei * k, hi.imag, lo.imag)):
            assert abs(exact - Fraction(h) - Fraction(l)) <= abs(exact) * Fraction(1, 2**100) + Fraction(1, 2**1000)


def test_lo_validation():
    with pytest.raises(InvalidInputError):
        Polynomial([1, 2], lo=[0.0])
    assert np.array_equal(Polynomial([1, 2]).lo, [0, 0])
