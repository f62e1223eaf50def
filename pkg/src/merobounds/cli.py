"""Command-line front end: sweeps, verification, conjecture searches, reports.

Grids are inclusive ``start:stop:count`` ranges (or single values); every
command can also read a JSON config file with the RunConfig schema, with
explicit flags taking precedence. Tables go to CSV (RFC-4180 quoting,
round-trip float serialization) or JSON. Exit codes: 0 success, 1 invariant
failure or bound violation, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .family import FROM_W, FROM_W1, ClassParams, conjectured_bound, extremal_coeffs, nonsharp_bound
from .search import SearchReport, search_max_coeff, witness_payload
from .series import MAX_CONFIG_ORDER
from .verify import VerifySettings, run_verification

TABLE_FORMATS = ("csv", "json")

EXTREMAL_HEADER = ["p", "lambda", "n", "extremal_coeff", "conjectured_bound", "ratio"]
BOUNDS_HEADER = ["p", "lambda", "n", "conjectured", "nonsharp", "slack"]
SEARCH_HEADER = ["p", "lambda", "n", "parameterization", "best_abs_coeff",
                 "witness_gammas", "bound", "ratio", "sup_u", "margin",
                 "pole_count", "status", "evals", "seed", "violation"]


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    p_grid: list[float]
    lambda_grid: list[float]
    n_values: list[int]
    order: int = 32
    seed: int | None = None
    restarts: int = 64
    budget: int = 10_000
    out: str | None = None
    format: str = "csv"
    workers: int = 1
    parameterization: str = FROM_W1
    # config-file-only knobs (no dedicated flags)
    param_count: int = 6
    tol_scale: float = 1.0


def parse_float_grid(text: str) -> list[float]:
    parts = str(text).split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) == 3:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise UsageError(f"grid count must be positive, got {count}")
        if count == 1:
            return [start]
        return [float(v) for v in np.linspace(start, stop, count)]
    raise UsageError(f"expected VALUE or START:STOP:COUNT, got {text!r}")


def parse_int_range(text: str) -> list[int]:
    parts = str(text).split(":")
    if len(parts) == 1:
        return [int(parts[0])]
    if len(parts) == 2:
        lo, hi = int(parts[0]), int(parts[1])
        if hi < lo:
            raise UsageError(f"empty integer range {text!r}")
        return list(range(lo, hi + 1))
    raise UsageError(f"expected N or LO:HI, got {text!r}")


_COMMAND_DEFAULTS = {
    "extremal": {"p": "0.1:0.9:5", "lam": "0.2:1.0:5", "n": "1:8"},
    "bounds-table": {"p": "0.1:0.9:5", "lam": "0.2:1.0:5", "n": "3:8"},
    "verify": {"p": "0.1:0.9:5", "lam": "0.2:1.0:5", "n": "1:20",
               "restarts": 16, "budget": 4000, "seed": 0},
    "search": {"p": "0.1:0.5:5", "lam": "0.5:1.0:2", "n": "3:5"},
    "report": {"p": "0.1:0.9:5", "lam": "0.2:1.0:5", "n": "3:8", "out": "report"},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="merobounds",
        description="Coefficient-bound exploration for univalent functions with one pole.")
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "extremal": "tabulate boundary-member coefficients against the conjectured bound",
        "bounds-table": "tabulate conjectured vs non-sharp bounds and their slack",
        "verify": "run every named invariant suite and emit a JSON report",
        "search": "stress-test the bound by seeded multi-start search",
        "report": "write the bound tables plus rendered figures to a directory",
    }
    for name, desc in descriptions.items():
        p = sub.add_parser(name, help=desc)
        p.add_argument("--p", help="pole grid, VALUE or START:STOP:COUNT")
        p.add_argument("--lambda", dest="lam", help="level grid, VALUE or START:STOP:COUNT")
        p.add_argument("--n", help="coefficient indices, N or LO:HI")
        p.add_argument("--order", type=int, help=f"truncation order (4..{MAX_CONFIG_ORDER})")
        p.add_argument("--seed", type=int, help="base RNG seed (required for search)")
        p.add_argument("--restarts", type=int, help="search restarts per cell")
        p.add_argument("--budget", type=int, help="objective evaluations per cell")
        p.add_argument("--out", help="output path (directory for report)")
        p.add_argument("--format", choices=TABLE_FORMATS, help="table format")
        p.add_argument("--config", help="JSON config file (RunConfig schema)")
        p.add_argument("--workers", type=int, help="worker pool size")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    file_cfg: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            file_cfg = json.load(fh)

    defaults = _COMMAND_DEFAULTS[args.command]

    def pick(flag, key, fallback):
        value = getattr(args, flag, None)
        if value is not None:
            return value
        if key in file_cfg:
            return file_cfg[key]
        return fallback

    p_raw = pick("p", "p_grid", defaults.get("p"))
    lam_raw = pick("lam", "lambda_grid", defaults.get("lam"))
    n_raw = pick("n", "n_values", defaults.get("n"))
    cfg = RunConfig(
        command=args.command,
        p_grid=[float(v) for v in p_raw] if isinstance(p_raw, list) else parse_float_grid(p_raw),
        lambda_grid=[float(v) for v in lam_raw] if isinstance(lam_raw, list) else parse_float_grid(lam_raw),
        n_values=[int(v) for v in n_raw] if isinstance(n_raw, list) else parse_int_range(n_raw),
        order=int(pick("order", "order", 32)),
        seed=pick("seed", "seed", defaults.get("seed")),
        restarts=int(pick("restarts", "restarts", defaults.get("restarts", 64))),
        budget=int(pick("budget", "budget", defaults.get("budget", 10_000))),
        out=pick("out", "out", defaults.get("out")),
        format=pick("format", "format", "csv"),
        workers=int(pick("workers", "workers", os.cpu_count() or 1)),
        parameterization=file_cfg.get("parameterization", FROM_W1),
        param_count=int(file_cfg.get("param_count", 6)),
        tol_scale=float(file_cfg.get("tol_scale", 1.0)),
    )
    if cfg.seed is not None:
        cfg.seed = int(cfg.seed)
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> None:
    for p in cfg.p_grid:
        if not 0.0 < p < 1.0:
            raise UsageError(f"pole location {p} outside (0,1)")
    for lam in cfg.lambda_grid:
        if not 0.0 < lam <= 1.0:
            raise UsageError(f"level {lam} outside (0,1]")
    if not cfg.n_values:
        raise UsageError("empty coefficient range")
    if min(cfg.n_values) < 1:
        raise UsageError("coefficient indices start at 1")
    if not 4 <= cfg.order <= MAX_CONFIG_ORDER:
        raise UsageError(f"order must lie in [4, {MAX_CONFIG_ORDER}], got {cfg.order}")
    if cfg.format not in TABLE_FORMATS:
        raise UsageError(f"format must be one of {TABLE_FORMATS}")
    if cfg.restarts < 1 or cfg.budget < 1 or cfg.workers < 1 or cfg.param_count < 1:
        raise UsageError("restarts, budget, workers and param_count must be positive")
    if cfg.parameterization not in (FROM_W, FROM_W1):
        raise UsageError(f"unknown parameterization {cfg.parameterization!r}")
    if cfg.command == "search":
        if cfg.seed is None:
            raise UsageError("search requires --seed for reproducibility")
        if min(cfg.n_values) < 2:
            raise UsageError("search needs n >= 2")
        if max(cfg.n_values) + 1 >= cfg.order:
            raise UsageError(
                f"order {cfg.order} cannot hold coefficient {max(cfg.n_values)}")


# -- serialization -----------------------------------------------------------

def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)  # shortest round-trip, <= 17 significant digits
    if isinstance(value, (list, tuple)):
        return json.dumps(value)
    return str(value)


def write_table(rows: list[dict], header: list[str], fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps(rows, indent=2) + "\n"
        if out is None:
            sys.stdout.write(text)
        else:
            Path(out).write_text(text, encoding="utf-8")
        return
    if out is None:
        writer = csv.writer(sys.stdout, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(row[k]) for k in header])
        return
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(row[k]) for k in header])


# -- commands ----------------------------------------------------------------

def extremal_rows(cfg: RunConfig) -> list[dict]:
    rows = []
    for p in cfg.p_grid:
        for lam in cfg.lambda_grid:
            cp = ClassParams(p=p, lam=lam)
            for n in cfg.n_values:
                coeff = extremal_coeffs(cp, n)
                bound = conjectured_bound(cp, n)
                rows.append({"p": p, "lambda": lam, "n": n, "extremal_coeff": coeff,
                             "conjectured_bound": bound, "ratio": coeff / bound})
    return rows


def bounds_table_rows(cfg: RunConfig) -> list[dict]:
    rows = []
    for p in cfg.p_grid:
        for lam in cfg.lambda_grid:
            cp = ClassParams(p=p, lam=lam)
            for n in cfg.n_values:
                if n < 3:
                    continue  # the non-sharp bound starts at n = 3
                conj = conjectured_bound(cp, n)
                ns = nonsharp_bound(cp, n)
                rows.append({"p": p, "lambda": lam, "n": n, "conjectured": conj,
                             "nonsharp": ns, "slack": ns - conj})
    return rows


def _search_cell(payload: tuple) -> SearchReport:
    p, lam, n, param_count, restarts, budget, seed, parameterization, order = payload
    return search_max_coeff(ClassParams(p=p, lam=lam), n, param_count=param_count,
                            restarts=restarts, budget=budget, seed=seed,
                            parameterization=parameterization, order=order)


def run_search(cfg: RunConfig) -> list[SearchReport]:
    """One report per (p, lambda, n) cell, in grid order regardless of workers.

    Cell i gets the seed base seed + i*restarts so restart streams never
    collide across cells.
    """
    cells = []
    idx = 0
    for p in cfg.p_grid:
        for lam in cfg.lambda_grid:
            for n in cfg.n_values:
                cells.append((p, lam, n, cfg.param_count, cfg.restarts, cfg.budget,
                              cfg.seed + idx * cfg.restarts, cfg.parameterization,
                              cfg.order))
                idx += 1
    workers = min(cfg.workers, len(cells))
    if workers <= 1:
        return [_search_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_search_cell, cells))


def search_row(r: SearchReport) -> dict:
    return {
        "p": r.cp.p,
        "lambda": r.cp.lam,
        "n": r.n,
        "parameterization": r.parameterization,
        "best_abs_coeff": r.best_abs_coeff,
        "witness_gammas": [[float(g.real), float(g.imag)] for g in r.witness.gammas],
        "bound": r.bound,
        "ratio": r.ratio,
        "sup_u": r.membership.sup_u,
        "margin": r.membership.margin,
        "pole_count": r.membership.pole_count,
        "status": r.membership.status,
        "evals": r.evals,
        "seed": r.seed,
        "violation": r.is_violation,
    }


def _witness_path(out: str | None, index: int) -> Path:
    base = Path(out) if out is not None else Path("search")
    return base.with_name(f"{base.stem}.witness-{index}.json")


def cmd_search(cfg: RunConfig) -> int:
    reports = run_search(cfg)
    write_table([search_row(r) for r in reports], SEARCH_HEADER, cfg.format, cfg.out)
    exit_code = 0
    for i, r in enumerate(reports):
        if r.is_violation:
            exit_code = 1
            path = _witness_path(cfg.out, i)
            path.write_text(json.dumps(witness_payload(r), indent=2) + "\n",
                            encoding="utf-8")
            print(f"VIOLATION at p={r.cp.p} lambda={r.cp.lam} n={r.n} "
                  f"ratio={r.ratio!r}; witness written to {path}", file=sys.stderr)
    return exit_code


def verify_settings(cfg: RunConfig) -> VerifySettings:
    return VerifySettings(order=cfg.order, seed=cfg.seed or 0,
                          n_max=max(cfg.n_values),
                          p_grid=tuple(cfg.p_grid), lambda_grid=tuple(cfg.lambda_grid),
                          restarts=cfg.restarts, budget=cfg.budget,
                          param_count=cfg.param_count, tol_scale=cfg.tol_scale)


def cmd_verify(cfg: RunConfig) -> int:
    report = run_verification(verify_settings(cfg))
    for r in report.results:
        state = "PASS" if r.passed else "FAIL"
        print(f"{state}  {r.name}  margin={r.margin:.3e}  ({r.detail})", file=sys.stderr)
    text = json.dumps(report.as_payload(), indent=2) + "\n"
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        Path(cfg.out).write_text(text, encoding="utf-8")
    return 0 if report.passed else 1


def cmd_report(cfg: RunConfig) -> int:
    from .report import render_bound_figures  # matplotlib import deferred to use

    outdir = Path(cfg.out or "report")
    outdir.mkdir(parents=True, exist_ok=True)
    ext_rows = extremal_rows(cfg)
    bnd_rows = bounds_table_rows(cfg)
    write_table(ext_rows, EXTREMAL_HEADER, "csv", str(outdir / "extremal.csv"))
    write_table(bnd_rows, BOUNDS_HEADER, "csv", str(outdir / "bounds_table.csv"))
    figures = render_bound_figures(ext_rows, bnd_rows, outdir)
    for path in [outdir / "extremal.csv", outdir / "bounds_table.csv", *figures]:
        print(path)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (UsageError, ValueError, OSError) as exc:
        parser.error(str(exc))  # exits with status 2

    try:
        if cfg.command == "extremal":
            write_table(extremal_rows(cfg), EXTREMAL_HEADER, cfg.format, cfg.out)
            return 0
        if cfg.command == "bounds-table":
            write_table(bounds_table_rows(cfg), BOUNDS_HEADER, cfg.format, cfg.out)
            return 0
        if cfg.command == "verify":
            return cmd_verify(cfg)
        if cfg.command == "search":
            return cmd_search(cfg)
        if cfg.command == "report":
            return cmd_report(cfg)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 2
    raise AssertionError(f"unhandled command {cfg.command}")


if __name__ == "__main__":
    sys.exit(main())
