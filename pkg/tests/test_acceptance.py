"""Acceptance checks at their stated tolerances and scales.

Each test records one PASS/FAIL line (see conftest) before asserting, so the
summary shows every criterion even when some fail.
"""
import cmath
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from conftest import ACCEPTANCE_RESULTS
from sendovlab import extremal as ex
from sendovlab.cli import main
from sendovlab.geometry import (
    RootConfiguration,
    check_distance_bounds,
    circle_intersections,
    cos_beta0_closed_form,
    distance_profile,
    half_plane_side,
)
from sendovlab.harness import SUITES, GeneratorSpec, run_suite
from sendovlab.polynomial import derivative, evaluate, find_roots, poly_from_roots

BIG = 10_000
SEED = 42


def record(label, ok, detail):
    ACCEPTANCE_RESULTS[label] = (bool(ok), detail)
    print(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
    assert ok, f"{label}: {detail}"


@pytest.fixture(scope="module")
def gh_report():
    t0 = time.perf_counter()
    rep = run_suite("gh", GeneratorSpec(seed=SEED, deg_min=3, deg_max=15), count=BIG)
    return rep, time.perf_counter() - t0


@pytest.fixture(scope="module")
def chain_report():
    return run_suite("chain", GeneratorSpec(seed=SEED, deg_min=3, deg_max=15), count=BIG)


@pytest.fixture(scope="module")
def scan_report():
    return run_suite("theorem-scan", GeneratorSpec(seed=SEED), count=BIG, lam_policy="theorem-window")


def test_closed_form_extremum_matches_grid_oracle():
    t0 = time.perf_counter()
    worst_v = worst_x = 0.0
    cells = 0
    for a, r in ex.sweep_grid():
        x_hat, v = ex.grid_maximize_g(a, r)
        x0 = (2 * r + a * a + r * r) / (2 * a * (1 + r))
        worst_v = max(worst_v, abs(v - (r + 2) / a))
        worst_x = max(worst_x, abs(x_hat - x0))
        cells += 1
    dt = time.perf_counter() - t0
    ok = cells == 171 and worst_v <= 1e-8 and worst_x <= 1e-6 and dt < 5.0
    record("closed-form extremum vs grid oracle", ok,
           f"{cells} cells, max|value err|={worst_v:.2e}, max|x err|={worst_x:.2e}, {dt:.2f}s")


def test_exact_identity_certification():
    t0 = time.perf_counter()
    rep = run_suite("identities", GeneratorSpec(seed=SEED), count=1000)
    dt = time.perf_counter() - t0
    quartic = [r for r in rep.records if r["residual_lr"] == "0" and r["residual_factor"] == "0"]
    phi0 = [r for r in rep.records if "phi0_residual" in r]
    phi0_ok = all(r["phi0_residual"] == "0" for r in phi0)
    sizes_ok = all(abs(Fraction(r[k])) <= 10 for r in rep.records for k in ("a", "r", "phi"))
    ok = len(quartic) == 1000 and len(phi0) == 100 and phi0_ok and sizes_ok and dt < 10.0
    record("exact quartic identities and stationary-root membership", ok,
           f"{len(quartic)}/1000 quartic zero, {sum(r['phi0_residual'] == '0' for r in phi0)}/{len(phi0)} "
           f"stationary-root zero, {dt:.2f}s")


def test_F_lower_bound_on_restricted_interval():
    worst_below = -math.inf
    worst_gap = 0.0
    for a, r in ex.sweep_grid():
        _, f_min = ex.grid_minimize_f(a, r)
        bound = -(r + 2) / a
        worst_below = max(worst_below, bound - f_min)
        worst_gap = max(worst_gap, abs(f_min - bound))
    ok = worst_below <= 1e-10 and worst_gap <= 1e-8
    record("F lower bound on [-1, -r/a]", ok,
           f"max(bound - min F)={worst_below:.2e}, max|min F - bound|={worst_gap:.2e}")


def test_g1_endpoint_signs():
    right = [ex.g1(a, r, 1.0) for a, r in ex.sweep_grid()]
    left = [ex.g1(a, r, r / a) for a, r in ex.sweep_grid()]
    ok = max(right) < 0 and min(left) > 0
    record("g1 endpoint signs", ok, f"max g1(1)={max(right):.3e}, min g1(r/a)={min(left):.3e}")


def test_geometry_consistency():
    rng = np.random.default_rng(SEED)
    worst_unit = worst_eq = 0.0
    for _ in range(BIG):
        m = 2.0 * (1.0 - rng.random())  # (0, 2]
        z0 = m * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        for z in circle_intersections(z0):
            worst_unit = max(worst_unit, abs(abs(z) - 1))
            worst_eq = max(worst_eq, abs(half_plane_side(z, z0)))
    worst_branch = worst_f = 0.0
    n = 0
    while n < BIG:
        a = rng.random()
        r = a * rng.random()
        alpha = rng.uniform(0, math.pi)
        if a == 0.0:
            continue
        n += 1
        closed = cos_beta0_closed_form(a, r, alpha)
        up, lo = circle_intersections(a + r * cmath.exp(1j * alpha))
        worst_branch = max(worst_branch, abs(closed - min(up.real, lo.real)))
        worst_f = max(worst_f, abs(closed - 0.5 * (a + r * ex.F(a, r, math.cos(alpha)))))
    ok = max(worst_unit, worst_eq, worst_branch, worst_f) <= 1e-12
    record("bisector geometry consistency", ok,
           f"unit {worst_unit:.1e}, equidistance {worst_eq:.1e}, "
           f"min branch {worst_branch:.1e}, F route {worst_f:.1e}")


def test_half_plane_suite(gh_report):
    rep, dt = gh_report
    bad = rep.counters["VIOLATED"] + rep.counters["NUMERICAL_FAILURE"]
    ok = rep.counters["HOLDS"] + rep.counters["VACUOUS"] == BIG and bad == 0 and dt < 60.0
    record("critical point in both closed half-planes", ok,
           f"{rep.counters}, min side margin {rep.summary['min_side_margin']:.2e}, {dt:.1f}s")


def test_chain_suite(chain_report):
    rep = chain_report
    worst = rep.summary["min_chain_margin"]
    bad = rep.counters["VIOLATED"] + rep.counters["NUMERICAL_FAILURE"]
    ok = bad == 0 and worst >= -1e-9 and len(rep.records) == BIG
    record("real-part chain bound on the z0 side", ok, f"{rep.counters}, min margin {worst:.3e}")


def test_theorem_scan_honesty(scan_report):
    rep = scan_report
    hist = rep.histograms["rho1_margin"]
    counted = sum(hist["counts"]) + hist["underflow"] + hist["overflow"]
    ok = rep.counters["VIOLATED"] == 0 and counted == BIG and "sup_rho1" in rep.summary
    record("theorem scan: no violations, vacuousness reported", ok,
           f"{rep.counters}, sup rho1={rep.summary['sup_rho1']:.4f}, "
           f"rho1>=1 in {rep.summary['rho1_attained']}, chain failures {rep.summary['chain_failures']}")


def test_distance_bounds_everywhere(gh_report, chain_report, scan_report):
    violations = 0
    seen = 0
    for rep in (gh_report[0], chain_report, scan_report):
        violations += rep.summary["distance_bound_violations"]
        seen += sum(r.get("distance_bounds_ok") is not None for r in rep.records)
    cfg = RootConfiguration(0.5, [-1])
    crit = find_roots(derivative(cfg.polynomial()))
    quad = check_distance_bounds(distance_profile(cfg, crit), 2, 0.5)
    exact = quad.lower_margin == (0.0,) and quad.upper_margin == (0.0,)
    ok = violations == 0 and seen == 3 * BIG and exact
    record("distance bounds around a", ok,
           f"{violations} violations over {seen} instances; quadratic margins "
           f"{quad.lower_margin[0]}, {quad.upper_margin[0]}")


def test_root_finder_round_trip():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    failures = 0
    residual_ok = True
    for _ in range(1000):
        n = int(rng.integers(2, 51))
        roots = []
        while len(roots) < n:
            z = math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())
            if all(abs(z - w) >= 1e-3 for w in roots):
                roots.append(z)
        p = poly_from_roots(roots)
        got = np.asarray(find_roots(p, 1e-10))
        cost = np.abs(got[:, None] - np.asarray(roots)[None, :])
        i, j = linear_sum_assignment(cost)
        err = float(cost[i, j].max())
        worst = max(worst, err)
        failures += err > 1e-8
        residual_ok &= bool(np.all(np.abs(evaluate(p, got)) <= 1e-10 * p.max_coeff()))
    ok = failures == 0 and residual_ok
    record("root finder round trip", ok,
           f"max multiset error {worst:.2e}, {failures}/1000 above 1e-8, residual contract "
           f"{'met' if residual_ok else 'missed'}")


def test_reproducibility(tmp_path):
    spec = GeneratorSpec(seed=SEED)
    mismatched = []
    for suite in SUITES:
        count = 40 if suite not in ("identities", "extremal-sweep") else None
        a = run_suite(suite, spec, count=count)
        b = run_suite(suite, spec, count=count)
        c = run_suite(suite, spec, count=count, workers=8)
        if not (a.comparison_json() == b.comparison_json() == c.comparison_json()):
            mismatched.append(suite)
    # and once end to end through the CLI and files
    blobs = []
    for k, workers in enumerate(("1", "1", "8")):
        out = tmp_path / f"run{k}.json"
        main(["theorem-scan", "--count", "60", "--seed", "7", "--out", str(out), "--workers", workers])
        data = json.loads(out.read_text())
        data.pop("metadata")
        blobs.append(json.dumps(data, sort_keys=True).encode())
    cli_ok = blobs[0] == blobs[1] == blobs[2]
    ok = not mismatched and cli_ok
    record("reproducible and worker-count independent", ok,
           f"{len(SUITES)} suites x (repeat, 8 workers); mismatches {mismatched or 'none'}; CLI files "
           f"{'identical' if cli_ok else 'differ'}")
