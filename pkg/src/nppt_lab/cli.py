"""Command-line front end: ``nppt-lab {classify,werner-scan,family-scan,compare,plot}``.

Exit codes: 0 success, 2 bad arguments, 3 I/O, 4 sampler exhaustion,
5 plot input, 10 flagged gap (compare only).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

from . import __version__
from .linalg import DimensionError
from .plot import render_svg
from .states import (
    CONSTRAINTS,
    SamplerExhausted,
    WernerParams,
    classify_werner,
    family_is_nppt,
    family_is_valid_state,
    family_pt,
    family_sample,
    family_two_positive,
    werner_pt,
)
from .witness import GAP_TOL, SeesawConfig, compare

EXIT_OK, EXIT_ARGS, EXIT_IO, EXIT_SAMPLER, EXIT_PLOT, EXIT_FLAG = 0, 2, 3, 4, 5, 10

CSV_COLUMNS = [
    "d", "n", "alpha", "seed", "restarts", "seesaw_min", "extremal_min",
    "analytic_ref", "gap", "flag", "converged_restarts", "wall_ms",
]

DEFAULTS = {
    "d": 3,
    "alpha": None,
    "n": [1],
    "alpha_start": 0.1,
    "alpha_stop": 0.9,
    "alpha_step": 0.1,
    "samples": 100,
    "constraints": "valid,nppt,two_positive",
    "z_scale": 1.0,
    "restarts": 50,
    "max_iterations": 500,
    "tol": 1e-10,
    "seed": 0,
    "out": None,
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def fmt(x: float) -> str:
    """17 significant digits: every binary64 value round-trips."""
    return format(float(x), ".17g")


def alpha_grid(start: float, stop: float, step: float) -> list[float]:
    if not step > 0:
        raise CliError(EXIT_ARGS, "alpha step must be positive")
    if start > stop:
        return []
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 12) for k in range(count)]


def _merge(args: argparse.Namespace, keys) -> dict:
    """Command-line flags override the JSON config file, which overrides defaults."""
    conf = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                conf = json.load(fh)
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise CliError(EXIT_ARGS, f"bad config file: {exc}") from exc
    merged = {}
    for key in keys:
        val = getattr(args, key, None)
        if val is None:
            val = conf.get(key, conf.get(key.replace("_", "-"), DEFAULTS.get(key)))
        merged[key] = val
    return merged


def _seesaw_cfg(o: dict) -> SeesawConfig:
    try:
        return SeesawConfig(
            restarts=int(o["restarts"]),
            max_iterations=int(o["max_iterations"]),
            tol=float(o["tol"]),
            seed=int(o["seed"]),
        )
    except (TypeError, ValueError) as exc:
        raise CliError(EXIT_ARGS, str(exc)) from exc


def _werner(d, alpha) -> WernerParams:
    try:
        return WernerParams(int(d), float(alpha))
    except (TypeError, ValueError) as exc:
        raise CliError(EXIT_ARGS, str(exc)) from exc


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from exc


def cmd_classify(args) -> int:
    o = _merge(args, ["d", "alpha"])
    if o["alpha"] is None:
        raise CliError(EXIT_ARGS, "--alpha is required")
    p = _werner(o["d"], o["alpha"])
    region = classify_werner(p)
    print(f"{region.value} (1/d={1 / p.d:.4f}, 1/2=0.5)")
    return EXIT_OK


def werner_scan_csv(o: dict, threads: int | None = None) -> str:
    d = int(o["d"])
    ns = o["n"] if isinstance(o["n"], list) else [o["n"]]
    ns = [int(n) for n in ns]
    cfg = _seesaw_cfg(o)
    grid = alpha_grid(float(o["alpha_start"]), float(o["alpha_stop"]), float(o["alpha_step"]))
    params = [_werner(d, a) for a in grid]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for p in params:
        for n in ns:
            try:
                rep = compare(werner_pt(p), n, cfg, label=p.alpha, threads=threads)
            except (DimensionError, ValueError) as exc:
                raise CliError(EXIT_ARGS, str(exc)) from exc
            ref = fmt(1 - 2 * p.alpha) if n == 1 and p.alpha >= 0 else ""
            writer.writerow([
                d, n, fmt(p.alpha), cfg.seed, cfg.restarts, fmt(rep.seesaw_min),
                fmt(rep.extremal_min), ref, fmt(rep.gap), str(rep.flag).lower(),
                rep.converged_restarts, fmt(rep.wall_ms),
            ])
    return buf.getvalue()


def cmd_werner_scan(args) -> int:
    o = _merge(args, ["d", "n", "alpha_start", "alpha_stop", "alpha_step",
                      "restarts", "max_iterations", "tol", "seed", "out"])
    _write(o["out"], werner_scan_csv(o))
    return EXIT_OK


def _constraints(value) -> list[str]:
    if isinstance(value, str):
        items = [c.strip() for c in value.split(",") if c.strip()]
    else:
        items = list(value)
    items = [c.replace("-", "_") for c in items]
    bad = set(items) - CONSTRAINTS
    if bad:
        raise CliError(EXIT_ARGS, f"unknown constraints: {sorted(bad)}")
    return sorted(set(items))


def family_scan_report(o: dict, threads: int | None = None) -> dict:
    start = time.perf_counter()
    d, samples = int(o["d"]), int(o["samples"])
    if d < 2 or samples < 0:
        raise CliError(EXIT_ARGS, "need d >= 2 and samples >= 0")
    cons = _constraints(o["constraints"])
    cfg = _seesaw_cfg(o)
    members = []
    for k in range(samples):
        try:
            fp = family_sample([cfg.seed, k], cons, d=d, z_scale=float(o["z_scale"]))
        except SamplerExhausted as exc:
            raise CliError(EXIT_SAMPLER, str(exc)) from exc
        rep = compare(family_pt(fp), 1, cfg, threads=threads)
        members.append({
            "index": k,
            "family": fp.to_json(),
            "valid": family_is_valid_state(fp)[0],
            "nppt": family_is_nppt(fp),
            "two_positive": family_two_positive(fp),
            "seesaw_min": rep.seesaw_min,
            "extremal_min": rep.extremal_min,
            "gap": rep.gap,
            "flag": rep.flag,
        })
    gaps = [m["gap"] for m in members]
    worst = min(range(len(gaps)), key=gaps.__getitem__) if gaps else None
    summary = {
        "count": len(members),
        "valid": sum(m["valid"] for m in members),
        "nppt": sum(m["nppt"] for m in members),
        "two_positive": sum(m["two_positive"] for m in members),
        "flagged": sum(m["flag"] for m in members),
        "most_negative_gap": gaps[worst] if gaps else None,
        "most_negative_gap_index": worst,
    }
    return {
        "schema": 1,
        "d": d,
        "samples": samples,
        "constraints": cons,
        "z_scale": float(o["z_scale"]),
        "seed": cfg.seed,
        "restarts": cfg.restarts,
        "members": members,
        "summary": summary,
        "wall_ms": round((time.perf_counter() - start) * 1e3, 3),
    }


def cmd_family_scan(args) -> int:
    o = _merge(args, ["d", "samples", "constraints", "z_scale", "restarts",
                      "max_iterations", "tol", "seed", "out"])
    report = family_scan_report(o)
    _write(o["out"], json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def compare_report(o: dict, threads: int | None = None):
    if o["alpha"] is None:
        raise CliError(EXIT_ARGS, "--alpha is required")
    p = _werner(o["d"], o["alpha"])
    n = o["n"][0] if isinstance(o["n"], list) else o["n"]
    try:
        return compare(werner_pt(p), int(n), _seesaw_cfg(o), label=p.alpha, threads=threads)
    except (DimensionError, ValueError) as exc:
        raise CliError(EXIT_ARGS, str(exc)) from exc


def cmd_compare(args) -> int:
    o = _merge(args, ["d", "alpha", "n", "restarts", "max_iterations", "tol", "seed", "out"])
    rep = compare_report(o)
    _write(o["out"], json.dumps(rep.to_json(), indent=2) + "\n")
    verdict = "distillable witness found" if rep.distillable_witness else "no violation found"
    print(
        f"seesaw_min={rep.seesaw_min:.12g} extremal_min={rep.extremal_min:.12g} "
        f"gap={rep.gap:.3g} flag={str(rep.flag).lower()} ({verdict})",
        file=sys.stderr,
    )
    if rep.flag:
        print(f"FLAGGED: seesaw minimum lies {-rep.gap:.3g} below the extremal-set minimum "
              f"(threshold {GAP_TOL:g})", file=sys.stderr)
        return EXIT_FLAG
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        with open(args.csv, newline="") as fh:
            rows = list(csv.DictReader(fh))
            header = rows and list(rows[0].keys())
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {args.csv}: {exc}") from exc
    if not rows:
        raise CliError(EXIT_PLOT, "CSV has no data rows")
    for col in [args.x, *args.y]:
        if col not in header:
            raise CliError(EXIT_PLOT, f"column {col!r} not in CSV header {header}")
    series = {}
    try:
        xs = [float(r[args.x]) for r in rows]
        for col in args.y:
            series[col] = [(x, float(r[col])) for x, r in zip(xs, rows) if r[col] != ""]
    except ValueError as exc:
        raise CliError(EXIT_PLOT, f"non-numeric value: {exc}") from exc
    _write(args.out, render_svg(args.x, xs, series))
    return EXIT_OK


def _add_seesaw_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--restarts", type=int)
    p.add_argument("--max-iterations", dest="max_iterations", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--config", help="JSON config file; flags override its values")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nppt-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="Werner region for (d, alpha)")
    p.add_argument("--d", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--config")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("werner-scan", help="seesaw vs extremal minima over an alpha grid (CSV)")
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--alpha-start", dest="alpha_start", type=float)
    p.add_argument("--alpha-stop", dest="alpha_stop", type=float)
    p.add_argument("--alpha-step", dest="alpha_step", type=float)
    _add_seesaw_flags(p)
    p.set_defaults(func=cmd_werner_scan)

    p = sub.add_parser("family-scan", help="sample the invariant family (JSON)")
    p.add_argument("--d", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--constraints", help="comma list of valid,nppt,two_positive")
    p.add_argument("--z-scale", dest="z_scale", type=float)
    _add_seesaw_flags(p)
    p.set_defaults(func=cmd_family_scan)

    p = sub.add_parser("compare", help="one Werner comparison report (JSON); exit 10 if flagged")
    p.add_argument("--d", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--n", type=int, nargs=1)
    _add_seesaw_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot", help="SVG line plot of CSV columns")
    p.add_argument("--csv", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True, nargs="+")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
