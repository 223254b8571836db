"""Command line entry point.

Usage::

    optsearch plan   scenario.json --T 10 --out run/
    optsearch sweep  scenario.json --times 10,50,200 --out run/
    optsearch verify scenario.json [--times 1,5,10,50,200] [--quantum Q]

Exit codes: 0 success, 1 config error, 2 infeasible budget, 3 property
failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from .bayes import posterior
from .config import load_config
from .errors import ConfigError, InfeasibleBudgetError
from .grid import sup_norm, write_field_csv
from .metrics import detection_probability
from .oracles import greedy_allocate, oracle_report
from .planner import allocate
from .verify import DEFAULT_TIMES, Check, run_checks

log = logging.getLogger("optsearch")

EXIT_OK, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_PROPERTY = 0, 1, 2, 3


def _dump(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n", encoding="utf-8")


def _fmt(v) -> str:
    return "nan" if v is None else format(float(v), ".17g")


def _float_list(text: str, what: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"{what}: expected comma-separated numbers, got {text!r}") from None
    if not vals or not all(math.isfinite(v) for v in vals):
        raise ConfigError(f"{what}: expected finite numbers")
    return vals


def _grid_arg(text):
    if text is None:
        return None
    vals = _float_list(text, "--grid")
    if len(vals) != 2 or any(v != int(v) or v < 2 for v in vals):
        raise ConfigError("--grid: expected NX,NY with integers >= 2")
    return (int(vals[0]), int(vals[1]))


def _domain_arg(text):
    if text is None:
        return None
    vals = _float_list(text, "--domain")
    if len(vals) != 4:
        raise ConfigError("--domain: expected x0,x1,y0,y1")
    return tuple(vals)


def _times_arg(text, default=None):
    if text is None:
        return list(default) if default else None
    times = _float_list(text, "--times")
    if any(t <= 0 for t in times):
        raise ConfigError("--times: times must be positive")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ConfigError("--times: times must be strictly increasing")
    return times


def _scenario(args):
    cfg = load_config(args.config)
    return cfg.build(grid=_grid_arg(args.grid), domain=_domain_arg(args.domain))


def cmd_plan(args) -> int:
    if args.T is None or not args.T > 0:
        raise ConfigError("T must be positive")
    sc = _scenario(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    plan = allocate(sc, args.T)
    post = posterior(sc, plan)
    P = detection_probability(sc, plan.allocation)
    write_field_csv(plan.allocation, out / "plan.csv")
    _dump({
        "T": plan.T,
        "E": plan.E,
        "lambda_star": plan.lambda_star,
        "plateau_area": plan.plateau.area,
        "detection_probability": P,
        "truncation_mass": sc.truncation_mass,
        "blind_cells": int(sc.blind_cells.sum()),
    }, out / "plan.json")
    write_field_csv(post.field, out / "posterior.csv")
    _dump({
        "T": plan.T,
        "normalizer": post.normalizer,
        "plateau_value": post.plateau_value,
        "plateau_area": plan.plateau.area,
        "sup_posterior": sup_norm(post.field),
    }, out / "posterior.json")
    report = oracle_report(plan, post, P)
    if report is not None:
        _dump(report, out / "oracle_report.json")
    print(f"T={plan.T:g} E={plan.E:.6g} lambda*={plan.lambda_star:.6g} P={P:.6f} -> {out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    times = _times_arg(args.times)
    if not times:
        raise ConfigError("--times is required for sweep")
    sc = _scenario(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for T in times:
        plan = allocate(sc, T)
        post = posterior(sc, plan)
        rows.append({
            "T": T,
            "E": plan.E,
            "lambda_star": plan.lambda_star,
            "P": detection_probability(sc, plan.allocation),
            "plateau_area": plan.plateau.area,
            "plateau_value": post.plateau_value,
        })
    cols = ["T", "E", "lambda_star", "P", "plateau_area", "plateau_value"]
    lines = [",".join(cols)] + [",".join(_fmt(r[c]) for c in cols) for r in rows]
    (out / "sweep.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    def strictly(key, sign):
        vals = [r[key] for r in rows]
        if any(v is None for v in vals):
            return None
        return all(sign * (b - a) > 0 for a, b in zip(vals, vals[1:]))

    flags = {
        "P_increasing": strictly("P", 1),
        "lambda_star_decreasing": strictly("lambda_star", -1),
        "plateau_area_increasing": strictly("plateau_area", 1),
        "plateau_value_decreasing": strictly("plateau_value", -1),
    }
    _dump({"rows": rows, "monotonicity": flags}, out / "sweep.json")
    for r in rows:
        print(f"T={r['T']:g} P={r['P']:.6f} lambda*={r['lambda_star']:.6g} area={r['plateau_area']:.4f}")
    return EXIT_OK


def cmd_verify(args) -> int:
    sc = _scenario(args)
    times = _times_arg(args.times, DEFAULT_TIMES)
    checks = run_checks(sc, times)
    if args.quantum is not None:
        checks.append(_greedy_check(sc, times, args.quantum))
    width = max(len(c.name) for c in checks)
    for c in checks:
        tag = "PASS" if c.passed else "FAIL"
        expect = "" if c.expect else " (expected violated)"
        print(f"{tag}  {c.name:<{width}}  {c.detail}{expect}")
    failures = [c.to_dict() for c in checks if not c.passed]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _dump({"checks": [c.to_dict() for c in checks], "failures": failures}, out / "verify.json")
    if failures:
        print(json.dumps({"failures": failures}, sort_keys=True))
        return EXIT_PROPERTY
    return EXIT_OK


def _greedy_check(sc, times, quantum) -> Check:
    if sc.domain.nx * sc.domain.ny > 64 * 64:
        return Check("greedy_oracle", True, False, "needs a grid of at most 64x64 (use --grid)")
    plan = allocate(sc, times[0])
    greedy = greedy_allocate(sc, plan.E, quantum)
    err = float(abs(greedy.values - plan.allocation.values).max())
    tol = 3 * quantum / sc.domain.cell_area
    return Check("greedy_oracle", True, err <= tol, f"max dev {err:.3g} (tol {tol:.3g})")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="optsearch", description="Uniformly optimal search plans.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="scenario JSON file")
        p.add_argument("--grid", help="NX,NY cell counts")
        p.add_argument("--domain", help="x0,x1,y0,y1 bounding box")
        p.add_argument("--out", default="out", help="output directory")

    p = sub.add_parser("plan", help="optimal plan and posterior at one time")
    common(p)
    p.add_argument("--T", type=float, required=True, help="search time")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("sweep", help="plan summaries over several times")
    common(p)
    p.add_argument("--times", required=True, help="t1,t2,... strictly increasing")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the property suite")
    common(p)
    p.set_defaults(out=None)
    p.add_argument("--times", help="time ladder (default 1,5,10,50,200)")
    p.add_argument("--quantum", type=float, help="also compare with the greedy oracle")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    raise SystemExit(main())
