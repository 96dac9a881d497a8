"""boundary-lab command line: scenario runs that write CSV/JSON artifacts.

Exit codes: 0 pass, 1 verdict failure, 2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .boundary_sets import (
    AtomList,
    AtomMeasure,
    CantorMeasure,
    complement_samples,
    measure_upper_bound,
    set_from_json,
    test_points,
)
from .comb import CombDomain, PolyArc, gamma_polyline, split_check_stable
from .complex_core import unwrap_argument
from .errors import BoundaryLabError, ConfigError, DegenerateRaster
from .functions import (
    TRANSFORM_BOUND,
    TRANSFORM_LOWER,
    AnalyticFunction,
    Blaschke,
    Product,
    SingularInner,
    Transformed,
    blaschke_condition,
    corollary1_pipeline,
    function_from_json,
    lusin_function,
)
from .radial import (
    CONVERGED,
    default_schedule,
    partial_product_l2_gap,
    probe,
    summarize,
)

COMMANDS = ("lusin", "riesz", "transform", "corollary1", "comb")


@dataclass
class RunConfig:
    scenario: str
    raw: dict
    out: Path
    seed: int = 0
    threads: int = 1
    k_min: int = 3
    k_max: int = 45
    conv_tol: float = 1e-6
    osc_tol: float = 1.0
    window: int = 12
    n_test: int = 64
    n_complement: int = 100
    n_theta: int = 2000
    converged_fraction: float = 0.95
    extra: dict = field(default_factory=dict)

    @property
    def schedule(self) -> np.ndarray:
        return default_schedule(self.k_min, self.k_max)

    def probe_kwargs(self) -> dict:
        return dict(schedule=self.schedule, conv_tol=self.conv_tol, osc_tol=self.osc_tol,
                    window=self.window, threads=self.threads)


def load_config(scenario: str, path, out, seed=None, threads=None) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    p = raw.get("probe", {})
    cfg = RunConfig(scenario=scenario, raw=raw, out=Path(out))
    for key in ("k_min", "k_max", "window", "n_test", "n_complement", "n_theta", "seed"):
        if key in p:
            setattr(cfg, key, int(p[key]))
    for key in ("conv_tol", "osc_tol", "converged_fraction"):
        if key in p:
            setattr(cfg, key, float(p[key]))
    if seed is not None:
        cfg.seed = seed
    if threads is None:
        threads = int(os.environ.get("BOUNDARY_LAB_THREADS", "1") or 1)
    cfg.threads = max(1, threads)
    if not (cfg.conv_tol > 0 and cfg.osc_tol > 0):
        raise ConfigError("tolerances must be positive")
    if not cfg.conv_tol < cfg.osc_tol:
        raise ConfigError("conv_tol must be smaller than osc_tol")
    if not 1 <= cfg.k_min < cfg.k_max <= 52:
        raise ConfigError("schedule exponents must satisfy 1 <= k_min < k_max <= 52")
    if not 1 <= cfg.window <= cfg.k_max - cfg.k_min + 1:
        raise ConfigError("window must fit inside the schedule")
    return cfg


# -- artifact writers ----------------------------------------------------------


def _fmt(x: float) -> str:
    return "%.17g" % x


def write_traces(path: Path, traces):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["theta", "eps", "re", "im", "modulus", "arg_unwrapped"])
        for tr in traces:
            try:
                args = unwrap_argument(tr.values)
            except BoundaryLabError:
                args = [math.nan] * len(tr)
            for eps, v, a in zip(tr.eps_schedule, tr.values, args):
                w.writerow([_fmt(tr.theta), _fmt(eps), _fmt(v.real), _fmt(v.imag), _fmt(abs(v)), _fmt(a)])


def read_traces(path) -> list[dict]:
    with open(path, newline="") as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]


def write_json(path: Path, doc):
    path.write_text(json.dumps(doc, indent=2) + "\n")


# -- scenarios -----------------------------------------------------------------


def _probe_sets(cfg: RunConfig, g: AnalyticFunction, E):
    e_pts = [p.theta for p in test_points(E, cfg.n_test)]
    c_pts = [p.theta for p in complement_samples(E, cfg.n_complement, cfg.seed)]
    e_res = probe(g, e_pts, **cfg.probe_kwargs())
    c_res = probe(g, c_pts, **cfg.probe_kwargs())
    return e_res, c_res


def _verdict_docs(label, results):
    docs = []
    for tr, v in results:
        d = {"set": label}
        d.update(v.to_json(tr.theta))
        docs.append(d)
    return docs


def _oscillation_report(cfg, E, e_res, c_res) -> dict:
    e_sum = summarize([v for _, v in e_res], cfg.conv_tol)
    c_sum = summarize([v for _, v in c_res], cfg.conv_tol)
    all_osc = e_sum.oscillating == e_sum.total
    conv_ok = c_sum.converged >= cfg.converged_fraction * c_sum.total
    return {
        "boundary_set": E.to_json(),
        "measure_upper_bound": measure_upper_bound(E),
        "E": e_sum.to_json(),
        "complement": c_sum.to_json(),
        "all_E_oscillating": all_osc,
        "complement_converged_fraction": c_sum.converged_fraction,
        "required_converged_fraction": cfg.converged_fraction,
        "pass": bool(all_osc and conv_ok),
    }


def _write_probe_artifacts(cfg, summary, e_res, c_res):
    cfg.out.mkdir(parents=True, exist_ok=True)
    write_traces(cfg.out / "traces_E.csv", [tr for tr, _ in e_res])
    write_traces(cfg.out / "traces_complement.csv", [tr for tr, _ in c_res])
    write_json(cfg.out / "verdicts.json", _verdict_docs("E", e_res) + _verdict_docs("complement", c_res))
    write_json(cfg.out / "summary.json", summary)


def cmd_lusin(cfg: RunConfig) -> int:
    if "boundary_set" not in cfg.raw:
        raise ConfigError("config needs a boundary_set")
    E = _parse(set_from_json, cfg.raw["boundary_set"])
    if isinstance(E, AtomList) and not E.points:
        raise ConfigError("empty boundary set")
    g = lusin_function(E)
    e_res, c_res = _probe_sets(cfg, g, E)
    summary = _oscillation_report(cfg, E, e_res, c_res)
    _write_probe_artifacts(cfg, summary, e_res, c_res)
    return 0 if summary["pass"] else 1


def _support(rep: AnalyticFunction):
    if isinstance(rep, SingularInner):
        return rep.measure.support()
    if isinstance(rep, Product):
        measures = [f.measure for f in rep.factors if isinstance(f, SingularInner)]
        if measures and all(isinstance(m, AtomMeasure) for m in measures):
            return AtomList(tuple(p for m in measures for p in m.points))
        if len(measures) == 1 and isinstance(measures[0], CantorMeasure):
            return measures[0].support()
    raise ConfigError("cannot infer the boundary set; give boundary_set explicitly")


def _transform_run(cfg: RunConfig, g: Transformed) -> tuple[int, dict]:
    E = _parse(set_from_json, cfg.raw["boundary_set"]) if "boundary_set" in cfg.raw else _support(g.inner)
    e_res, c_res = _probe_sets(cfg, g, E)
    summary = _oscillation_report(cfg, E, e_res, c_res)
    mods = np.concatenate([np.abs(tr.values) for tr, _ in e_res + c_res])
    inside = bool(np.all((mods > TRANSFORM_LOWER) & (mods < TRANSFORM_BOUND)))
    summary["modulus_window"] = {
        "lower": TRANSFORM_LOWER,
        "upper": TRANSFORM_BOUND,
        "min": float(mods.min()),
        "max": float(mods.max()),
        "inside": inside,
    }
    summary["pass"] = bool(summary["pass"] and inside)
    _write_probe_artifacts(cfg, summary, e_res, c_res)
    return (0 if summary["pass"] else 1), summary


def _zero_free(doc, what: str) -> AnalyticFunction:
    rep = _parse(function_from_json, doc)
    if isinstance(rep, Transformed):
        rep = rep.inner
    if not rep.has_explicit_log:
        raise ConfigError(
            f"{what} is not zero-free by construction (it has Blaschke factors); "
            "use the corollary1 command with the zeros listed separately"
        )
    return rep


def cmd_transform(cfg: RunConfig) -> int:
    if "function" not in cfg.raw:
        raise ConfigError("config needs a function spec")
    f = _zero_free(cfg.raw["function"], "function")
    code, _ = _transform_run(cfg, Transformed(f))
    return code


def _zeros(cfg: RunConfig) -> tuple[complex, ...]:
    if "zeros" not in cfg.raw:
        raise ConfigError("config needs a zeros list")
    try:
        zeros = tuple(complex(float(re), float(im)) for re, im in cfg.raw["zeros"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad zeros list: {exc}") from exc
    if any(not abs(a) < 1.0 for a in zeros):
        raise ConfigError("Blaschke zeros must satisfy |a| < 1")
    return zeros


def cmd_corollary1(cfg: RunConfig) -> int:
    zeros = _zeros(cfg)
    if "f1" not in cfg.raw:
        raise ConfigError("config needs an f1 spec")
    f1 = _zero_free(cfg.raw["f1"], "f1")
    g = corollary1_pipeline(zeros, f1)
    code, _ = _transform_run(cfg, g)

    rng = np.random.default_rng(cfg.seed)
    theta = rng.uniform(0.0, 2.0 * math.pi, 100)
    eps = rng.uniform(0.01, 1.0, 100)
    B = Blaschke(zeros)
    whole = g.original().values(theta, eps)
    factorwise = B.values(theta, eps) * f1.values(theta, eps)
    err = float(np.max(np.abs(whole - factorwise)))
    ok = err <= 1e-12
    write_json(cfg.out / "factorization.json", {"points": 100, "max_abs_error": err, "pass": ok})
    return code if ok else 1


def cmd_riesz(cfg: RunConfig) -> int:
    zeros = _zeros(cfg)
    r = cfg.raw.get("riesz", {})
    eps_oracle = float(r.get("eps", 1e-6))
    gap_grid = int(r.get("gap_grid", 4096))
    threshold = float(r.get("median_threshold", 0.9))
    gap_tol = float(r.get("gap_tol", 1e-9))
    ladder = [n for n in r.get("ladder", [1, 2, 4, 8, 16]) if n <= len(zeros)]
    ladder = sorted(set(ladder) | {len(zeros)})
    if gap_grid < 64 or cfg.n_theta < 1:
        raise ConfigError("gap_grid must be >= 64 and n_theta >= 1")

    B = Blaschke(zeros)
    thetas = 2.0 * math.pi * np.arange(cfg.n_theta) / cfg.n_theta
    results = probe(B, thetas, **cfg.probe_kwargs())
    summ = summarize([v for _, v in results], cfg.conv_tol)
    gaps = [partial_product_l2_gap(zeros, n, eps_oracle, gap_grid) for n in ladder]
    monotone = all(b <= a + gap_tol for a, b in zip(gaps, gaps[1:]))
    oracle = np.abs(B.values(thetas, eps_oracle))
    mods = [abs(v.limit) for _, v in results if v.kind == CONVERGED]
    counts, edges = np.histogram(mods, bins=20, range=(0.0, 1.0))
    median_ok = summ.median_modulus is not None and summ.median_modulus >= threshold

    cfg.out.mkdir(parents=True, exist_ok=True)
    write_traces(cfg.out / "traces.csv", [tr for tr, _ in results])
    write_json(cfg.out / "verdicts.json", _verdict_docs("grid", results))
    with open(cfg.out / "histogram.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bin_lo", "bin_hi", "count"])
        for lo, hi, c in zip(edges, edges[1:], counts):
            w.writerow([_fmt(lo), _fmt(hi), int(c)])
    with open(cfg.out / "gaps.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "gap"])
        for n, gp in zip(ladder, gaps):
            w.writerow([n, _fmt(gp)])
    summary = {
        "zeros": len(zeros),
        "blaschke_sum": blaschke_condition(zeros),
        "grid": summ.to_json(),
        "converged_fraction": summ.converged_fraction,
        "median_threshold": threshold,
        "oracle_eps": eps_oracle,
        "oracle_median_modulus": float(np.median(oracle)),
        "gap_ladder": ladder,
        "gaps": gaps,
        "gaps_nonincreasing": monotone,
        "pass": bool(median_ok and monotone),
    }
    write_json(cfg.out / "summary.json", summary)
    return 0 if summary["pass"] else 1


def cmd_comb(cfg: RunConfig) -> int:
    c = cfg.raw.get("comb", cfg.raw)
    try:
        n_slits = int(c["n_slits"])
        k_max = int(c["k_max"])
        grid = int(c.get("grid", 1024))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"comb config needs n_slits, k_max, grid: {exc}") from exc
    if n_slits < 2 or not 1 <= k_max <= n_slits - 1 or grid < 8:
        raise ConfigError("need n_slits >= 2, 1 <= k_max <= n_slits - 1, grid >= 8")
    domain = CombDomain(n_slits)
    gamma = _parse(gamma_polyline, k_max, domain)
    gamma1 = PolyArc((gamma.vertices[0], (1.0, gamma.vertices[0][1])))
    cfg.out.mkdir(parents=True, exist_ok=True)
    try:
        report = split_check_stable(domain, gamma, gamma1, grid)
        doc = report.to_json()
    except DegenerateRaster as exc:
        doc = {"grid": grid, "stable": False, "pass": False, "error": str(exc)}
    doc["domain"] = domain.to_json()
    doc["k_max"] = k_max
    write_json(cfg.out / "split.json", doc)
    write_json(cfg.out / "summary.json", {"pass": doc["pass"], "stable": doc["stable"]})
    return 0 if doc["pass"] else 1


def _parse(fn, *args):
    try:
        return fn(*args)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


HANDLERS = {
    "lusin": cmd_lusin,
    "riesz": cmd_riesz,
    "transform": cmd_transform,
    "corollary1": cmd_corollary1,
    "comb": cmd_comb,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="boundary-lab",
        description="Radial-limit and boundary-uniqueness demonstrations for bounded analytic functions.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=None, help="defaults to $BOUNDARY_LAB_THREADS or 1")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = load_config(args.command, args.config, args.out, args.seed, args.threads)
        return HANDLERS[args.command](cfg)
    except BoundaryLabError as exc:
        print(f"boundary-lab: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
