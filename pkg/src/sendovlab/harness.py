"""Instance generation, batch suites and report emission."""
from __future__ import annotations

import csv
import datetime as _dt
import json
import logging
import math
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import extremal as ex
from .errors import ConfigError, ConvergenceError, SendovLabError
from .geometry import RootConfiguration, check_distance_bounds, distance_profile
from .polynomial import derivative, find_roots, min_modulus_on_circle, point_to_json
from .theorem import (
    HOLDS,
    NUMERICAL_FAILURE,
    ROOT_TOL,
    SIDE_TOL,
    STATUSES,
    VACUOUS,
    VIOLATED,
    chain_check,
    grace_heawood_check,
    lambda_window,
    lemma_a_check,
    nonzero_level_points,
    orient_upper,
    theorem_verdict,
)

log = logging.getLogger(__name__)

SUITES = ("identities", "extremal-sweep", "gh", "chain", "lemma-a", "theorem-scan")
GENERATORS = ("uniform-disk", "near-extremal", "explicit")
LAMBDA_POLICIES = ("theorem-window", "fixed")
SERIES = ("G-curve", "F-curve", "bound-vs-lambda", "minmod-vs-lambda", "rho1-hist")

SWEEP_COLUMNS = (
    "a", "r", "phi0", "x0", "g_max_closed", "g_max_oracle", "x_hat", "f_min_oracle", "bound",
)
RHO1_EDGES = [round(-1.0 + 0.05 * k, 10) for k in range(41)]  # rho_1 - 1 in [-1, 1]

EXIT_OK, EXIT_FAILURE, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str = "uniform-disk"
    deg_min: int = 3
    deg_max: int = 15
    a_lo: float = 0.05
    a_hi: float = 0.95
    perturbation: float = 0.02
    seed: int = 42
    input_path: Optional[str] = None

    def __post_init__(self):
        if self.kind not in GENERATORS:
            raise ConfigError(f"unknown generator {self.kind!r}")
        if self.deg_min < 2 or self.deg_max < self.deg_min:
            raise ConfigError(f"bad degree range [{self.deg_min}, {self.deg_max}]")
        if not (0.0 < self.a_lo <= self.a_hi < 1.0):
            raise ConfigError(f"a-range [{self.a_lo}, {self.a_hi}] must lie in (0, 1)")
        if self.perturbation < 0:
            raise ConfigError("perturbation must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.kind == "explicit" and not self.input_path:
            raise ConfigError("explicit generator needs an input file")


def instance_rng(seed: int, index: int, stream: int = 0) -> np.random.Generator:
    """Independent stream per (seed, index, stream); no shared state between instances."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index, stream])))


def load_explicit(path) -> list[RootConfiguration]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    if isinstance(data, dict) and "instances" in data:
        data = data["instances"]
    if isinstance(data, dict):
        data = [data]
    try:
        return [RootConfiguration.from_json(item) for item in data]
    except SendovLabError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def generate_one(spec: GeneratorSpec, index: int) -> RootConfiguration:
    rng = instance_rng(spec.seed, index)
    n = int(rng.integers(spec.deg_min, spec.deg_max + 1))
    a = float(rng.uniform(spec.a_lo, spec.a_hi))
    m = n - 1
    if spec.kind == "uniform-disk":
        rad = np.sqrt(rng.random(m))
        ang = 2.0 * np.pi * rng.random(m)
    else:
        jr = rng.uniform(-1.0, 1.0, m)
        ja = rng.uniform(-1.0, 1.0, m)
        rad = 1.0 - spec.perturbation * np.abs(jr)
        ang = 2.0 * np.pi * (np.arange(m) + spec.perturbation * ja) / m
    zeros = tuple(complex(v) for v in rad * np.exp(1j * ang))
    # guard against rounding nudging a unit-modulus zero past the disk
    zeros = tuple(z / abs(z) if abs(z) > 1.0 else z for z in zeros)
    return RootConfiguration(a, zeros)


def generate(spec: GeneratorSpec, count: int) -> list[RootConfiguration]:
    if count < 0:
        raise ConfigError("count must be >= 0")
    if spec.kind == "explicit":
        return load_explicit(spec.input_path)[:count]
    return [generate_one(spec, i) for i in range(count)]


def choose_lambda(cfg: RootConfiguration, policy: str, lam, seed: int, index: int) -> float:
    """Pick lam for one instance.

    ``theorem-window`` draws uniformly from [1 - (1 - |p(0)|)^(1/n), sin(pi/n)]
    intersected with (0, a); when that set is empty it falls back to
    min(0.9 a, sin(pi/n)) / 2.
    """
    if policy == "fixed":
        if lam is None:
            raise ConfigError("lambda policy 'fixed' needs --lambda")
        return float(lam)
    if policy != "theorem-window":
        raise ConfigError(f"unknown lambda policy {policy!r}")
    p0 = cfg.a * math.prod(abs(z) for z in cfg.zeros)
    lo, hi = lambda_window(p0, cfg.n)
    top = min(hi, cfg.a)
    lo = max(lo, 0.0)
    if lo < top and top > 0.0:
        u = float(instance_rng(seed, index, 1).random())
        lam_v = lo + u * (top - lo)
        if lam_v > 0.0:
            return lam_v
    return min(0.9 * cfg.a, math.sin(math.pi / cfg.n)) / 2.0


# -- per-task evaluation ----------------------------------------------------


def _pt(z):
    return None if z is None else point_to_json(z)


def _random_fraction(rng, bound=10, max_den=1000):
    den = int(rng.integers(1, max_den + 1))
    num = int(rng.integers(-bound * den, bound * den + 1))
    return Fraction(num, den)


def _task_identities(ctx, index):
    rng = instance_rng(ctx["seed"], index, 2)
    a, r, phi = (_random_fraction(rng) for _ in range(3))
    res1, res2 = ex.quartic_identity_check(a, r, phi)
    exp1, exp2 = ex.expansion_identity_check(a, r, phi)
    rec = {
        "index": index,
        "kind": "quartic",
        "a": str(a), "r": str(r), "phi": str(phi),
        "residual_lr": str(res1), "residual_factor": str(res2),
        "residual_expansions": [str(exp1), str(exp2)],
    }
    ok = res1 == 0 and res2 == 0 and exp1 == 0 and exp2 == 0
    if index < ctx["phi0_checks"]:
        # 0 < r < a < 1, drawn as ratios of small integers
        den = int(rng.integers(2, 1000))
        an = int(rng.integers(2, den))
        rn = int(rng.integers(1, an))
        ar, rr = Fraction(an, den), Fraction(rn, den)
        phi0_res = ex.phi0_factor_residual(ar, rr)
        rec.update(phi0_a=str(ar), phi0_r=str(rr), phi0_residual=str(phi0_res))
        ok = ok and phi0_res == 0
    rec["status"] = HOLDS if ok else VIOLATED
    return rec


def sweep_cell(a: float, r: float) -> dict:
    cf = ex.closed_form_extremum(a, r)
    x_hat, g_oracle = ex.grid_maximize_g(a, r)
    xf, f_min = ex.grid_minimize_f(a, r)
    bound = ex.theorem_bound(a, r)
    band = ((a - r) ** 2, a * a - r * r)
    in_band = [v for v in ex.quartic_real_roots(a, r) if band[0] - 1e-12 <= v <= band[1] + 1e-12]
    checks = {
        "g_value_ok": abs(g_oracle - cf.g_max_value) <= 1e-8,
        "x_hat_ok": abs(x_hat - cf.x0) <= 1e-6,
        "f_lower_ok": f_min >= cf.f_lower - 1e-10,
        "f_attained_ok": abs(f_min - cf.f_lower) <= 1e-8,
        "g1_right_neg": ex.g1(a, r, 1.0) < 0.0,
        "g1_left_pos": ex.g1(a, r, r / a) > 0.0,
        "chain_ok": 0.5 * (a + r * f_min) >= bound - 1e-10,
        "phi0_unique_ok": len(in_band) == 1 and abs(in_band[0] - cf.phi0) <= 1e-10,
    }
    rec = {
        "a": a, "r": r, "phi0": cf.phi0, "x0": cf.x0,
        "g_max_closed": cf.g_max_value, "g_max_oracle": g_oracle, "x_hat": x_hat,
        "f_min_oracle": f_min, "x_f_min": xf, "bound": bound,
        # exploratory only: F over all of [-1, 1]; reported, never asserted
        "f_min_full_scan": float(np.min(ex.F(a, r, np.linspace(-1.0, 1.0, 4097)))),
    }
    rec.update(checks)
    rec["status"] = HOLDS if all(checks.values()) else VIOLATED
    return rec


def _task_sweep(ctx, index):
    a, r = ctx["cells"][index]
    rec = sweep_cell(a, r)
    rec["index"] = index
    return rec


def _config_for(ctx, index) -> RootConfiguration:
    if ctx["explicit"] is not None:
        return RootConfiguration.from_json(ctx["explicit"][index])
    return generate_one(GeneratorSpec(**ctx["spec"]), index)


def _task_gh(ctx, index):
    cfg = _config_for(ctx, index)
    tol = ctx["tol"]
    rec = {"index": index, "n": cfg.n, "a": cfg.a}
    try:
        p = cfg.polynomial()
        crit = find_roots(derivative(p), ROOT_TOL)
        level = nonzero_level_points(p, ROOT_TOL)
    except ConvergenceError as exc:
        rec.update(status=NUMERICAL_FAILURE, note=str(exc), zeros=[_pt(z) for z in cfg.zeros])
        return rec
    prof = distance_profile(cfg, crit)
    rec["distance_bounds_ok"] = check_distance_bounds(prof, cfg.n, cfg.a, tol=tol).ok
    rec["rho1"] = prof.rho1
    rec["n_z0"] = len(level)
    if not level:
        rec["status"] = VACUOUS
        return rec
    if ctx["suite"] == "gh":
        worst = math.inf
        failures = []
        for z0 in level:
            g = grace_heawood_check(p, z0, tol, crit)
            margin = min(max(g.sides), -min(g.sides))
            worst = min(worst, margin)
            if not g.ok:
                failures.append(_pt(z0))
        rec["min_side_margin"] = worst
        rec["status"] = VIOLATED if failures else HOLDS
        if failures:
            rec["failed_z0"] = failures
    else:
        worst = math.inf
        worst_rec = None
        for z0 in level:
            q, qcfg, qz0, flipped = orient_upper(p, cfg, z0)
            c = chain_check(q, qcfg, qz0, tol, [z.conjugate() for z in crit] if flipped else crit)
            m = -math.inf if c.best_re is None else c.best_re - c.bound_r
            if m < worst:
                worst, worst_rec = m, c
        rec.update(
            min_chain_margin=worst,
            worst_z0=_pt(worst_rec.z0),
            worst_r=worst_rec.r,
            worst_bound=worst_rec.bound_r,
            worst_best_re=worst_rec.best_re,
        )
        rec["status"] = HOLDS if worst >= -tol else VIOLATED
    if rec["status"] == VIOLATED:
        rec["zeros"] = [_pt(z) for z in cfg.zeros]
    return rec


def _task_lemma_a(ctx, index):
    cfg = _config_for(ctx, index)
    lam = choose_lambda(cfg, ctx["lam_policy"], ctx["lam"], ctx["seed"], index)
    rec = {"index": index, "n": cfg.n, "a": cfg.a, "lambda": lam}
    try:
        p = cfg.polynomial()
        prof = distance_profile(cfg, find_roots(derivative(p), ROOT_TOL))
        la = lemma_a_check(p, cfg.a, lam, prof)
    except ConvergenceError as exc:
        rec.update(status=NUMERICAL_FAILURE, note=str(exc))
        return rec
    except SendovLabError as exc:
        raise ConfigError(f"instance {index}: {exc}") from exc
    rec.update(
        rho1=prof.rho1,
        rho1_ok=la.rho1_ok,
        min_mod=la.min_mod,
        rhs=la.rhs,
        margin=la.margin,
        status=la.status,
    )
    if la.status == VIOLATED:
        rec["zeros"] = [_pt(z) for z in cfg.zeros]
    return rec


def _task_theorem(ctx, index):
    cfg = _config_for(ctx, index)
    lam = choose_lambda(cfg, ctx["lam_policy"], ctx["lam"], ctx["seed"], index)
    v = theorem_verdict(cfg, lam, ctx["tol"])
    rec = {"index": index, "n": cfg.n}
    rec.update(v.to_json())
    if v.status in (VIOLATED, NUMERICAL_FAILURE):
        rec["zeros"] = [_pt(z) for z in cfg.zeros]
    return rec


_TASKS = {
    "identities": _task_identities,
    "extremal-sweep": _task_sweep,
    "gh": _task_gh,
    "chain": _task_gh,
    "lemma-a": _task_lemma_a,
    "theorem-scan": _task_theorem,
}


def _run_task(args):
    ctx, index = args
    return _TASKS[ctx["suite"]](ctx, index)


# -- reports ----------------------------------------------------------------


def _clean(v):
    """JSON-safe copy: NaN/inf become None, tuples become lists."""
    if isinstance(v, float):
        return v if math.isfinite(v) else None
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, (np.floating,)):
        return _clean(float(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


@dataclass
class RunReport:
    suite: str
    config: dict
    counters: dict
    summary: dict
    histograms: dict
    records: list
    metadata: dict = field(default_factory=dict)

    def comparable(self) -> dict:
        """Everything except run metadata (timing, timestamps, worker count)."""
        d = asdict(self)
        d.pop("metadata")
        return _clean(d)

    def comparison_json(self) -> str:
        return json.dumps(self.comparable(), sort_keys=True, separators=(",", ":"))

    def to_json(self) -> dict:
        d = self.comparable()
        d["metadata"] = _clean(self.metadata)
        return d

    @property
    def exit_code(self) -> int:
        if self.counters.get(VIOLATED, 0):
            return EXIT_FAILURE
        if self.counters.get(NUMERICAL_FAILURE, 0):
            return EXIT_NUMERICAL
        return EXIT_OK


def _histogram(values, edges):
    vals = np.asarray([v for v in values if v is not None and math.isfinite(v)], dtype=float)
    counts, _ = np.histogram(vals, bins=edges)
    return {
        "edges": list(edges),
        "counts": counts.tolist(),
        "underflow": int(np.sum(vals < edges[0])),
        "overflow": int(np.sum(vals > edges[-1])),
    }


def _summarize(suite, records):
    summary: dict = {}
    hists: dict = {}
    if suite in ("gh", "chain", "lemma-a", "theorem-scan"):
        rho1 = [r["rho1"] for r in records if r.get("rho1") is not None]
        if rho1:
            summary["sup_rho1"] = max(rho1)
            summary["rho1_attained"] = sum(v >= 1.0 for v in rho1)
        hists["rho1_margin"] = _histogram([v - 1.0 for v in rho1], RHO1_EDGES)
    if suite in ("gh", "chain", "theorem-scan"):
        summary["distance_bound_violations"] = sum(r.get("distance_bounds_ok") is False for r in records)
    if suite == "gh":
        m = [r["min_side_margin"] for r in records if "min_side_margin" in r]
        summary["min_side_margin"] = min(m) if m else None
    if suite == "chain":
        m = [r["min_chain_margin"] for r in records if "min_chain_margin" in r]
        summary["min_chain_margin"] = min(m) if m else None
    if suite == "theorem-scan":
        summary["chain_failures"] = sum(r.get("chain_ok") is False for r in records)
        summary["non_unique_z0"] = sum(bool(r.get("non_unique")) for r in records)
        for flag in ("lam_lower", "lam_upper", "lam_below_a", "rho1"):
            summary[f"precondition_{flag}_true"] = sum(
                bool(r["preconds"].get(flag)) for r in records if r.get("preconds")
            )
        lam_margins = [r["preconds"]["lam_lower_margin"] for r in records if r.get("preconds")]
        hists["lam_lower_margin"] = _histogram(lam_margins, [round(0.02 * k, 10) for k in range(51)])
    if suite == "lemma-a":
        m = [r["margin"] for r in records if "margin" in r]
        summary["min_margin"] = min(m) if m else None
    if suite == "extremal-sweep" and records:
        summary["max_g_error"] = max(abs(r["g_max_oracle"] - r["g_max_closed"]) for r in records)
        summary["max_x_error"] = max(abs(r["x_hat"] - r["x0"]) for r in records)
        summary["max_f_error"] = max(abs(r["f_min_oracle"] + r["g_max_closed"]) for r in records)
    if suite == "identities":
        summary["quartic_points"] = len(records)
        summary["phi0_points"] = sum("phi0_residual" in r for r in records)
    return summary, hists


def run_suite(
    name: str,
    spec: GeneratorSpec,
    count: Optional[int] = None,
    lam_policy: str = "theorem-window",
    lam: Optional[float] = None,
    out=None,
    csv_out: bool = False,
    tol: float = SIDE_TOL,
    workers: int = 1,
    plots=(),
) -> RunReport:
    """Run one suite and optionally write its JSON report, CSV view and plot data."""
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if lam_policy not in LAMBDA_POLICIES:
        raise ConfigError(f"unknown lambda policy {lam_policy!r}")
    if lam_policy == "fixed" and lam is None:
        raise ConfigError("lambda policy 'fixed' needs a lambda value")
    if workers < 1:
        raise ConfigError("workers must be >= 1")

    ctx = {
        "suite": name,
        "seed": spec.seed,
        "spec": asdict(spec),
        "lam_policy": lam_policy,
        "lam": lam,
        "tol": tol,
        "explicit": None,
    }
    if name == "extremal-sweep":
        cells = list(ex.sweep_grid())
        ctx["cells"] = cells
        count = len(cells) if count is None else min(count, len(cells))
    elif name == "identities":
        count = 1000 if count is None else count
        ctx["phi0_checks"] = count // 10
    elif spec.kind == "explicit":
        cfgs = load_explicit(spec.input_path)
        count = len(cfgs) if count is None else min(count, len(cfgs))
        ctx["explicit"] = [c.to_json() for c in cfgs[:count]]
    else:
        count = 1000 if count is None else count
    if count < 0:
        raise ConfigError("count must be >= 0")

    started = _dt.datetime.now(_dt.timezone.utc).isoformat()
    t0 = time.perf_counter()
    tasks = [(ctx, i) for i in range(count)]
    if workers == 1 or count < 2:
        records = [_run_task(t) for t in tasks]
    else:
        chunk = max(1, count // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_task, tasks, chunksize=chunk))
    elapsed = time.perf_counter() - t0

    counters = {s: 0 for s in STATUSES}
    for r in records:
        counters[r["status"]] += 1
    summary, hists = _summarize(name, records)
    config = {
        "suite": name,
        "count": count,
        "generator": asdict(spec),
        "lambda_policy": lam_policy,
        "lambda": lam,
        "tol": tol,
    }
    report = RunReport(
        suite=name,
        config=config,
        counters=counters,
        summary=summary,
        histograms=hists,
        records=records,
        metadata={"started_at": started, "elapsed_s": elapsed, "workers": workers},
    )
    log.info("%s: %d instances in %.2fs, counters %s", name, count, elapsed, counters)
    if out is not None:
        write_outputs(report, Path(out), csv_out=csv_out, plots=plots)
    elif plots:
        for series in plots:
            emit_plot_data(report, series, Path(f"plot-{_slug(series)}.txt"))
    return report


def write_outputs(report: RunReport, out: Path, csv_out=False, plots=()):
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(report.to_json(), sort_keys=True, indent=1) + "\n")
        if csv_out:
            write_csv(report, out.with_suffix(".csv"))
        bad = [r for r in report.records if r["status"] in (VIOLATED, NUMERICAL_FAILURE)]
        if bad:
            dump = {"suite": report.suite, "config": report.config, "instances": bad}
            out.with_suffix(".counterexamples.json").write_text(
                json.dumps(_clean(dump), sort_keys=True, indent=1) + "\n"
            )
    except OSError as exc:
        raise ConfigError(f"cannot write report to {out}: {exc}") from exc
    for series in plots:
        emit_plot_data(report, series, out.with_name(f"{out.stem}.{_slug(series)}.txt"))


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".15g")
    return "" if v is None else str(v)


def write_csv(report: RunReport, path: Path):
    if report.suite == "extremal-sweep":
        cols = list(SWEEP_COLUMNS)
    else:
        cols = sorted({k for r in report.records for k, v in r.items() if not isinstance(v, (list, dict))})
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for r in report.records:
            w.writerow([_fmt(r.get(c)) for c in cols])


# -- plot data --------------------------------------------------------------


def _slug(series: str) -> str:
    return re.sub(r"[^A-Za-z0-9.=-]+", "_", series.strip())


def parse_series(what: str):
    parts = what.split()
    if not parts:
        raise ConfigError("empty plot series name")
    name, params = parts[0], {}
    for tok in parts[1:]:
        key, sep, val = tok.partition("=")
        if not sep:
            raise ConfigError(f"plot parameter {tok!r} is not key=value")
        try:
            params[key] = float(val)
        except ValueError:
            raise ConfigError(f"plot parameter {tok!r} is not numeric") from None
    if name not in SERIES:
        raise ConfigError(f"unknown plot series {name!r}; choose from {', '.join(SERIES)}")
    return name, params


def plot_series(report: RunReport, what: str):
    """Compute the (x, y) rows for a named series without writing anything."""
    name, params = parse_series(what)
    if not report.records:
        raise ConfigError("report is empty; no plot data to emit")
    first = report.records[0]

    def param(key):
        if key in params:
            return params[key]
        if key in first and isinstance(first[key], (int, float)):
            return float(first[key])
        raise ConfigError(f"series {name} needs {key}=...")

    if name == "G-curve":
        a, r = param("a"), param("r")
        xs = np.linspace(r / a, 1.0, 1024)
        return list(zip(xs.tolist(), np.asarray(ex.G(a, r, xs)).tolist()))
    if name == "F-curve":
        a, r = param("a"), param("r")
        xs = np.linspace(-1.0, -r / a, 1024)
        return list(zip(xs.tolist(), np.asarray(ex.F(a, r, xs)).tolist()))
    if name == "bound-vs-lambda":
        a = param("a")
        lams = [k / 1000 for k in range(1001)]
        return [(lam, ex.theorem_bound(a, lam)) for lam in lams]
    if name == "minmod-vs-lambda":
        index = int(params.get("index", 0))
        gen = report.config.get("generator")
        if not gen:
            raise ConfigError("minmod-vs-lambda needs a report from an instance suite")
        if gen.get("kind") == "explicit":
            cfg = load_explicit(gen["input_path"])[index]
        else:
            cfg = generate_one(GeneratorSpec(**gen), index)
        p = cfg.polynomial()
        top = math.sin(math.pi / cfg.n)
        lams = np.linspace(top / 200, top, 200)
        return [(float(l), min_modulus_on_circle(p, complex(cfg.a), float(l))[0]) for l in lams]
    # rho1-hist
    h = report.histograms.get("rho1_margin")
    if not h:
        raise ConfigError("report has no rho1 histogram")
    edges = h["edges"]
    return [(0.5 * (edges[i] + edges[i + 1]) + 1.0, float(c)) for i, c in enumerate(h["counts"])]


def emit_plot_data(report: RunReport, what: str, out) -> Path:
    """Write a plain ``x,y`` text series; nothing is written on error."""
    rows = plot_series(report, what)
    out = Path(out)
    lines = ["x,y"] + [f"{x:.15g},{y:.15g}" for x, y in rows]
    try:
        out.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise ConfigError(f"cannot write plot data to {out}: {exc}") from exc
    return out
