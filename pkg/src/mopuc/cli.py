"""Command-line interface: ``mopuc <command> --system FILE [options]``.

Exit codes: 0 when every check passed or was not applicable, 1 when at least
one identity residual failed, 2 on input or validation errors. Measure
indices, k, l and path steps are 1-based on this surface.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import cd as cdk
from .core import Mopuc, NotNormal, box_indices, graded_indices, minus, support
from .measures import ConfigError, MeasureSystem, parse_system
from .recurrence import alpha, beta, coeffs, kappa, rho
from .scalars import TolerancePolicy, format_scalar_text, make_field, parse_scalar_text, scalar_to_json
from .sweep import normality_grid, sweep

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    system: Path
    backend: str = "exact"
    policy: TolerancePolicy = TolerancePolicy()
    fmt: str = "json"
    out: Optional[Path] = None
    seed: int = 0

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        base = TolerancePolicy()
        try:
            policy = TolerancePolicy(
                zero_eps=base.zero_eps if ns.zero_eps is None else ns.zero_eps,
                residual_tol=base.residual_tol if ns.tol is None else ns.tol,
                rcond_min=base.rcond_min if ns.rcond_min is None else ns.rcond_min,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        return cls(Path(ns.system), ns.backend, policy, ns.format, Path(ns.out) if ns.out else None, ns.seed)

    def load(self) -> MeasureSystem:
        try:
            text = self.system.read_text()
        except FileNotFoundError:
            raise UsageError(f"system file not found: {self.system}")
        except OSError as exc:
            raise UsageError(f"cannot read system file {self.system}: {exc}")
        return parse_system(text, make_field(self.backend, self.policy))


@dataclass
class Result:
    """What a command produced: a JSON document, a CSV table and an exit code."""

    doc: dict
    header: list
    rows: list
    code: int = EXIT_OK


# -- argument parsing helpers -----------------------------------------------


def parse_int_list(text: str) -> tuple:
    try:
        vals = tuple(int(t) for t in text.split(",") if t.strip() != "")
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise UsageError("empty integer list")
    return vals


def parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"range must look like A..B, got {text!r}")
    if not sep or a > b:
        raise UsageError(f"range must look like A..B with A <= B, got {text!r}")
    return a, b


def _index_arg(values: tuple, r: int, what: str) -> tuple:
    if len(values) != r:
        raise UsageError(f"{what} {values} has length {len(values)}, system has r={r}")
    if any(v < 0 for v in values):
        raise UsageError(f"{what} {values} has negative entries")
    return values


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, float, str)):
        return str(x)
    return format_scalar_text(x)


def _idx_text(n) -> str:
    return "(" + ",".join(str(v) for v in n) + ")"


def _enc(x):
    return None if x is None else scalar_to_json(x)


# -- commands -----------------------------------------------------------------


def cmd_moments(cfg: RunConfig, system: MeasureSystem, ns) -> Result:
    j = ns.measure
    if not 1 <= j <= system.r:
        raise UsageError(f"--measure {j} out of range 1..{system.r}")
    lo, hi = parse_range(ns.range)
    values = [(p, system.moment(j - 1, p)) for p in range(lo, hi + 1)]
    doc = {"measure": j, "moments": [{"p": p, "value": scalar_to_json(v)} for p, v in values]}
    return Result(doc, ["p", "value"], [[p, _cell(v)] for p, v in values])


def _coeff_row(m: Mopuc, n: tuple) -> dict:
    r = m.r
    row = {"index": list(n), "status": "normal", "alpha": None, "beta": None, "rho": [None] * r, "kappa": [None] * r}
    if not m.is_normal(n):
        row["status"] = "non-normal"
        return row
    lower_ok = all(m.is_normal(minus(n, k)) for k in support(n))
    if lower_ok:
        rec = coeffs(m, n)
        a, b, rh, ka = rec.alpha, rec.beta, list(rec.rho), list(rec.kappa)
    else:
        # rho needs Phi_{n-e_k}; the remaining coefficients only need n itself
        row["status"] = "partial"
        a, b = alpha(m, n), beta(m, n)
        rh = [rho(m, n, k) if n[k] == 0 or m.is_normal(minus(n, k)) else None for k in range(r)]
        ka = [kappa(m, n, k) for k in range(r)]
    row.update(alpha=a, beta=b, rho=rh, kappa=ka, abs_alpha=abs(a), abs_beta=abs(b))
    return row


def cmd_coeffs(cfg: RunConfig, system: MeasureSystem, ns) -> Result:
    m = Mopuc.of(system)
    top = _index_arg(parse_int_list(ns.max_index), m.r, "--max-index")
    rows = [_coeff_row(m, n) for n in box_indices(top)]
    doc_rows = []
    for row in rows:
        doc_rows.append(
            {
                "index": row["index"],
                "status": row["status"],
                "alpha": _enc(row["alpha"]),
                "beta": _enc(row["beta"]),
                "rho": [_enc(x) for x in row["rho"]],
                "kappa": [_enc(x) for x in row["kappa"]],
                "abs_alpha": row.get("abs_alpha"),
                "abs_beta": row.get("abs_beta"),
            }
        )
    header = ["index", "status", "alpha", "beta"]
    header += [f"rho_{k + 1}" for k in range(m.r)] + [f"kappa_{k + 1}" for k in range(m.r)]
    table = [
        [_idx_text(row["index"]), row["status"], _cell(row["alpha"]), _cell(row["beta"])]
        + [_cell(x) for x in row["rho"]]
        + [_cell(x) for x in row["kappa"]]
        for row in rows
    ]
    return Result({"backend": cfg.backend, "rows": doc_rows}, header, table)


def _verify_indices(ns, r: int) -> list:
    chosen = [bool(ns.max_index), ns.max_total is not None, bool(ns.index)]
    if sum(chosen) != 1:
        raise UsageError("verify needs exactly one of --max-index, --max-total, --index")
    if ns.max_index:
        return box_indices(_index_arg(parse_int_list(ns.max_index), r, "--max-index"))
    if ns.max_total is not None:
        if ns.max_total < 0:
            raise UsageError("--max-total must be >= 0")
        return list(graded_indices(r, ns.max_total))
    return [_index_arg(parse_int_list(s), r, "--index") for s in ns.index]


def cmd_verify(cfg: RunConfig, system: MeasureSystem, ns) -> Result:
    m = Mopuc.of(system)
    summary = sweep(m, _verify_indices(ns, m.r))
    doc = {"backend": cfg.backend, **summary.to_json()}
    header = ["identity", "index", "k", "l", "status", "residual", "pass"]
    table = [
        [
            rep.identity,
            _idx_text(rep.index),
            "" if rep.k is None else rep.k + 1,
            "" if rep.l is None else rep.l + 1,
            rep.status,
            "" if rep.residual is None else repr(rep.residual),
            _cell(rep.passed),
        ]
        for rep in summary.reports
    ]
    return Result(doc, header, table, EXIT_OK if summary.ok else EXIT_FAIL)


def _build_path(ns, r: int) -> cdk.LatticePath:
    steps = None
    if ns.steps:
        steps = [s - 1 for s in parse_int_list(ns.steps)]
    target = parse_int_list(ns.target) if ns.target else None
    try:
        return cdk.make_path(ns.path, r, ns.N, target=target, steps=steps, seed=ns.path_seed)
    except cdk.PathError as exc:
        # present directions 1-based, as typed
        raise UsageError(f"bad path: {exc}") from exc


def _parse_points(spec: str, seed: int) -> list:
    kind, _, arg = spec.partition(":")
    if kind == "random":
        count = int(arg) if arg else 8
        if count < 1:
            raise UsageError("random:K needs K >= 1")
        return cdk.sample_points(count, seed)
    if kind == "circle":
        count = int(arg) if arg else 16
        if count < 1:
            raise UsageError("circle:K needs K >= 1")
        return [(w, w) for w in cdk.circle_points(count)]
    if kind == "explicit":
        pts = []
        for pair in arg.split(";"):
            z, sep, zeta = pair.partition(",")
            if not sep:
                raise UsageError(f"explicit points are 'z,zeta;z,zeta;...', got {pair!r}")
            try:
                pts.append((parse_scalar_text(z), parse_scalar_text(zeta)))
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        return pts
    raise UsageError(f"unknown points spec {spec!r}; use random:K, circle:K or explicit:z,zeta;...")


def cmd_cd(cfg: RunConfig, system: MeasureSystem, ns) -> Result:
    m = Mopuc.of(system)
    # a bad step reads more naturally in the 1-based form the user typed
    if ns.path == "explicit" and ns.steps:
        bad = [s for s in parse_int_list(ns.steps) if not 1 <= s <= m.r]
        if bad:
            raise UsageError(f"bad path: step {bad[0]} is not a direction in 1..{m.r}")
    path = _build_path(ns, m.r)
    points = _parse_points(ns.points, cfg.seed)
    head = {"backend": cfg.backend, "steps": [s + 1 for s in path.steps], "endpoint": list(path.endpoint)}
    header = ["z", "zeta", "lhs", "rhs", "residual", "pass"]
    try:
        evals = [cdk.cd_check(m, path, z, zeta) for z, zeta in points]
    except NotNormal as exc:
        doc = {**head, "status": "precondition-failed", "detail": str(exc), "failing_index": list(exc.index), "evaluations": []}
        return Result(doc, header, [])
    doc = {**head, "status": "ok", "evaluations": [e.to_json() for e in evals]}
    ok = all(e.passed for e in evals)
    if ns.bivariate:
        lhs, rhs = cdk.cd_bivariate(m, path)
        res, biv_ok = cdk.bivariate_residual(m.field, lhs, rhs)
        doc["bivariate"] = {"residual": res, "pass": biv_ok}
        ok = ok and biv_ok
    doc["max_residual"] = max((e.residual for e in evals), default=0.0)
    doc["pass"] = ok
    table = [
        [_cell(e.z), _cell(e.zeta), _cell(e.lhs), _cell(e.rhs), repr(e.residual), _cell(e.passed)] for e in evals
    ]
    return Result(doc, header, table, EXIT_OK if ok else EXIT_FAIL)


def cmd_normality_map(cfg: RunConfig, system: MeasureSystem, ns) -> Result:
    m = Mopuc.of(system)
    top = _index_arg(parse_int_list(ns.max_index), m.r, "--max-index")
    cells, table = [], []
    for n, diag in normality_grid(m, max_index=top):
        cell = {"index": list(n), "normal": diag.normal, "status": diag.status}
        if cfg.backend == "exact":
            cell["det"] = _enc(diag.det)
            cell["det_is_zero"] = not diag.normal
            size_cell = _cell(diag.det)
        else:
            cell["abs_det"] = diag.abs_det
            cell["rcond"] = diag.rcond
            size_cell = repr(diag.abs_det)
        cell["hadamard_ratio"] = diag.hadamard_ratio
        cells.append(cell)
        rc = "" if diag.rcond is None else repr(diag.rcond)
        table.append([_idx_text(n), _cell(diag.normal), diag.status, size_cell, rc, repr(diag.hadamard_ratio)])
    header = ["index", "normal", "status", "det" if cfg.backend == "exact" else "abs_det", "rcond", "hadamard_ratio"]
    return Result({"backend": cfg.backend, "cells": cells}, header, table)


COMMANDS: dict[str, Callable] = {
    "moments": cmd_moments,
    "coeffs": cmd_coeffs,
    "verify": cmd_verify,
    "cd": cmd_cd,
    "normality-map": cmd_normality_map,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", required=True, help="measure-system JSON file")
    common.add_argument("--backend", choices=("exact", "float"), default="exact")
    common.add_argument("--tol", type=float, default=None, help="residual tolerance (float backend)")
    common.add_argument("--zero-eps", type=float, default=None, help="absolute zero threshold (float backend)")
    common.add_argument("--rcond-min", type=float, default=None, help="normality threshold on rcond (float backend)")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="mopuc", description="Multiple orthogonal polynomials on the unit circle.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", parents=[common], help="tabulate nu_j^p")
    p.add_argument("--measure", type=int, required=True, help="1-based measure index")
    p.add_argument("--range", required=True, help="A..B, inclusive")

    p = sub.add_parser("coeffs", parents=[common], help="alpha, beta, rho, kappa over a box")
    p.add_argument("--max-index", required=True, help="comma-separated upper corner, e.g. 2,2")

    p = sub.add_parser("verify", parents=[common], help="run every identity check")
    p.add_argument("--max-index", default=None, help="box upper corner, e.g. 3,3")
    p.add_argument("--max-total", type=int, default=None, help="all n with |n| <= this")
    p.add_argument("--index", action="append", default=[], help="single index; repeatable")

    p = sub.add_parser("cd", parents=[common], help="Christoffel-Darboux check along a path")
    p.add_argument("--path", choices=cdk.PATH_KINDS, required=True)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--target", default=None, help="stepline endpoint, e.g. 3,0")
    p.add_argument("--steps", default=None, help="explicit 1-based directions, e.g. 1,2,2")
    p.add_argument("--path-seed", type=int, default=None, help="seed for --path random (defaults to --seed)")
    p.add_argument("--points", default="random:8", help="random:K | circle:K | explicit:z,zeta;...")
    p.add_argument("--bivariate", action="store_true", help="also compare coefficient arrays")

    p = sub.add_parser("normality-map", parents=[common], help="normality over a box")
    p.add_argument("--max-index", required=True)
    return parser


def _glue_negative_values(argv: Sequence[str]) -> list:
    """Let ``--range -3..3`` through argparse, which would read -3..3 as an option."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--range", "--points", "--index"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.header)
    writer.writerows(result.rows)
    return buf.getvalue()


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if ns.command == "cd" and ns.path_seed is None:
        ns.path_seed = ns.seed
    try:
        cfg = RunConfig.from_args(ns)
        system = cfg.load()
        result = COMMANDS[ns.command](cfg, system, ns)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = render(result, cfg.fmt)
    if cfg.out:
        cfg.out.write_text(text)
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            pass
    return result.code


if __name__ == "__main__":
    raise SystemExit(main())
