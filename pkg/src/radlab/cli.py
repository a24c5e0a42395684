"""Command-line front end.

Exit status: 0 when every requested check passes, 1 on a check failure,
2 on a usage or configuration error, 3 on an internal error (overflow,
solver failure).  Output is JSON (default), CSV or plain text; the output
path may also be set through the RADLAB_OUTPUT environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from typing import Any

from .arith import SpfTable, build_spf_table, factorize
from .bounds import BaseConstants, estimate_base_constants, make_epsilon_plan, theorem5_upper
from .errors import (
    BoundOverflow,
    ConstantValidationFailure,
    InvalidArgument,
    OutOfDomain,
    OutOfRange,
    PreconditionViolation,
    SolverFailure,
)
from .products import gc_bruteforce, gc_report
from .scan import abc_quality, fixed_radical_scan, theorem4_witnesses, verify_range

log = logging.getLogger("radlab")

COMMANDS = ("gc", "verify", "constants", "plan", "witness", "scan-ratio", "fixed-radical")
FORMATS = ("json", "csv", "text")
DEFAULT_SIEVE_LIMIT = 2_000_000
DEFAULT_EPSILONS = (0.25, 0.5, 1.0)
OUTPUT_ENV = "RADLAB_OUTPUT"

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    c_min: int = 3
    c_max: int = 2000
    epsilons: tuple[float, ...] = DEFAULT_EPSILONS
    sieve_limit: int = DEFAULT_SIEVE_LIMIT
    workers: int = 1
    output_format: str = "json"
    output_path: str | None = None
    primes: tuple[int, ...] = (2, 3)
    exponent_cap: int = 6
    constant_limit: int = 10**6
    k1: float | None = None
    k2: float | None = None
    k3: float | None = None
    skip_constant_check: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.output_format not in FORMATS:
            raise UsageError(f"unknown format {self.output_format!r}")
        if self.c_min < 1 or self.c_max < self.c_min:
            raise UsageError(f"bad range [{self.c_min}, {self.c_max}]")
        if self.c_max > self.sieve_limit:
            raise UsageError(f"c_max={self.c_max} exceeds sieve limit {self.sieve_limit}")
        if not self.epsilons or any(not 0 < e < 2 for e in self.epsilons):
            raise UsageError(f"epsilons must lie in (0, 2), got {self.epsilons}")
        if self.workers < 1:
            raise UsageError("workers must be >= 1")


@dataclass
class Report:
    ok: bool
    summary: dict[str, Any]
    rows: list[dict[str, Any]] | None = None


def _sig(x: float) -> float:
    # derived floats carry 10 significant digits
    if not math.isfinite(x):
        return x
    return float(f"{x:.10g}")


def _vector_json(v) -> dict[str, int]:
    return {str(p): e for p, e in v.items()}


def _constants(cfg: RunConfig) -> BaseConstants:
    kw = {k: v for k, v in (("k1", cfg.k1), ("k2", cfg.k2), ("k3", cfg.k3)) if v is not None}
    if cfg.skip_constant_check:
        return BaseConstants(**kw)
    return estimate_base_constants(cfg.constant_limit, **kw)


def _table(cfg: RunConfig, need: int) -> SpfTable:
    if need > cfg.sieve_limit:
        raise UsageError(f"need sieve up to {need}, limit is {cfg.sieve_limit}")
    return build_spf_table(max(need, 100))


def _gc_record(c: int, table: SpfTable) -> dict[str, Any]:
    rep = gc_report(c, table)
    agree = gc_bruteforce(c, table) == rep.gc
    return {
        "c": c,
        "numPartitions": rep.num_partitions,
        "gc": _vector_json(rep.gc),
        "geoMean": _sig(rep.geo_mean),
        "logGeoMean": _sig(rep.log_geo_mean),
        "ratio": _sig(rep.ratio),
        "enginesAgree": agree,
    }


def cmd_gc(cfg: RunConfig) -> Report:
    table = _table(cfg, cfg.c_max)
    if cfg.c_min < 3:
        raise UsageError("G_c needs c >= 3")
    records = [_gc_record(c, table) for c in range(cfg.c_min, cfg.c_max + 1)]
    ok = all(r["enginesAgree"] for r in records)
    if len(records) == 1:
        return Report(ok, records[0])
    return Report(ok, {"cMin": cfg.c_min, "cMax": cfg.c_max, "ok": ok}, records)


def cmd_verify(cfg: RunConfig) -> Report:
    if cfg.c_min < 3:
        raise UsageError("verification needs c >= 3")
    constants = _constants(cfg)
    table = _table(cfg, cfg.c_max)
    res = verify_range(cfg.c_min, cfg.c_max, table, constants, cfg.epsilons, workers=cfg.workers)
    summary = {
        "cMin": res.c_min,
        "cMax": res.c_max,
        "epsilons": list(cfg.epsilons),
        "passed": res.passed,
        "checksRun": dict(res.checks_run),
        "numFailures": len(res.failures),
        "numFindings": len(res.findings),
        "minRatio": _sig(res.min_ratio),
        "minRatioC": res.min_ratio_c,
        "maxRatio": _sig(res.max_ratio),
        "maxRatioC": res.max_ratio_c,
    }
    rows = [{"c": c, "kind": k, "status": "failure", "details": d} for c, k, d in res.failures]
    rows += [{"c": c, "kind": k, "status": "finding", "details": d} for c, k, d in res.findings]
    return Report(res.passed, summary, rows)


def _constants_record(k: BaseConstants) -> dict[str, Any]:
    return {
        "k1": k.k1, "k2": k.k2, "k3": k.k3,
        "k4": _sig(k.k4), "k5": _sig(k.k5), "k6": _sig(k.k6),
        "validatedLimit": k.validated_limit,
    }


def cmd_constants(cfg: RunConfig) -> Report:
    return Report(True, _constants_record(_constants(cfg)))


def _plan_record(plan) -> dict[str, Any]:
    return {
        "epsilon": plan.epsilon,
        "nEps": _sig(plan.n_eps),
        "mEps": _sig(plan.m_eps),
        "piN": plan.pi_n,
        "piM": plan.pi_m,
        "logKEps": _sig(plan.log_k_eps),
        "kEps": _sig(plan.k_eps),
    }


def cmd_plan(cfg: RunConfig) -> Report:
    constants = _constants(cfg)
    rows = [_plan_record(make_epsilon_plan(e, constants)) for e in cfg.epsilons]
    if len(rows) == 1:
        return Report(True, {**rows[0], "k4": _sig(constants.k4)})
    return Report(True, {"k4": _sig(constants.k4)}, rows)


def cmd_witness(cfg: RunConfig) -> Report:
    if cfg.c_min < 3:
        raise UsageError("witnesses need c >= 3")
    constants = _constants(cfg)
    table = _table(cfg, cfg.c_max)
    plan = make_epsilon_plan(cfg.epsilons[0], constants)
    rows, ok = [], True
    for c in range(cfg.c_min, cfg.c_max + 1):
        rep = theorem4_witnesses(c, table, plan)
        ok = ok and bool(rep.witnesses)
        for w in rep.witnesses:
            part = w.partition
            rows.append({
                "c": c, "a": part.a, "b": part.b,
                "radical": w.radical,
                "logRadical": _sig(w.log_radical),
                "geoMeanLog": _sig(rep.geo_mean_log),
                "thmLowerLog": _sig(rep.thm_lower_log),
                "abcLowerLog": _sig(rep.abc_lower_log),
                "abcQuality": _sig(abc_quality(part, table)),
            })
    summary = {"cMin": cfg.c_min, "cMax": cfg.c_max, "epsilon": plan.epsilon,
               "numWitnesses": len(rows), "ok": ok}
    return Report(ok, summary, rows)


def cmd_scan_ratio(cfg: RunConfig) -> Report:
    if cfg.c_min < 3:
        raise UsageError("ratios need c >= 3")
    constants = _constants(cfg)
    table = _table(cfg, cfg.c_max)
    plan = make_epsilon_plan(cfg.epsilons[0], constants)
    rows, ok = [], True
    for c in range(cfg.c_min, cfg.c_max + 1):
        f = factorize(c, table)
        rep = gc_report(c, table)
        lo = plan.log_k_eps - plan.epsilon * math.log(f.radical())
        hi = theorem5_upper(f, constants) - math.log(f.radical()) - 2.0 * math.log(c)
        inside = lo < rep.log_ratio < hi
        ok = ok and inside
        rows.append({"c": c, "ratio": _sig(rep.ratio), "logRatio": _sig(rep.log_ratio), "inBracket": inside})
    best = min(rows, key=lambda r: r["logRatio"])
    worst = max(rows, key=lambda r: r["logRatio"])
    summary = {"cMin": cfg.c_min, "cMax": cfg.c_max, "epsilon": plan.epsilon,
               "minRatio": best["ratio"], "minRatioC": best["c"],
               "maxRatio": worst["ratio"], "maxRatioC": worst["c"], "ok": ok}
    return Report(ok, summary, rows)


def cmd_fixed_radical(cfg: RunConfig) -> Report:
    constants = _constants(cfg)
    need = math.prod(p**cfg.exponent_cap for p in cfg.primes)
    table = _table(cfg, need)
    plan = make_epsilon_plan(cfg.epsilons[0], constants)
    res = fixed_radical_scan(cfg.primes, cfg.exponent_cap, table, plan, constants)
    rows = [{"exponents": "-".join(map(str, xs)), "c": c, "ratio": _sig(r)} for xs, c, r in res.points]
    summary = {
        "primes": list(res.primes),
        "exponentCap": res.exponent_cap,
        "epsilon": plan.epsilon,
        "numPoints": len(res.points),
        "minRatio": _sig(res.min_ratio),
        "maxRatio": _sig(res.max_ratio),
        "lowerBracket": _sig(math.exp(res.log_lower)),
        "upperBracket": _sig(math.exp(res.log_upper)),
        "holds": res.holds,
    }
    return Report(res.holds, summary, rows)


HANDLERS = {
    "gc": cmd_gc,
    "verify": cmd_verify,
    "constants": cmd_constants,
    "plan": cmd_plan,
    "witness": cmd_witness,
    "scan-ratio": cmd_scan_ratio,
    "fixed-radical": cmd_fixed_radical,
}


def _csv_cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, dict):
        return ";".join(f"{k}:{x}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        return ";".join(str(x) for x in v)
    if v is None:
        return ""
    return repr(v) if isinstance(v, float) else str(v)


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        body = dict(report.summary)
        if report.rows is not None:
            body["rows"] = report.rows
        return json.dumps(body, indent=2) + "\n"
    if fmt == "csv":
        records = report.rows if report.rows else [report.summary]
        keys: list[str] = []
        for r in records:
            keys += [k for k in r if k not in keys]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for r in records:
            w.writerow([_csv_cell(r.get(k)) for k in keys])
        return buf.getvalue()
    lines = [f"{k}: {_csv_cell(v)}" for k, v in report.summary.items()]
    for r in report.rows or []:
        lines.append("  " + "  ".join(f"{k}={_csv_cell(v)}" for k, v in r.items()))
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig, stream=None) -> int:
    """Execute one command and write its report; returns the exit status."""
    stream = stream if stream is not None else sys.stdout
    path = cfg.output_path or os.environ.get(OUTPUT_ENV)
    try:
        cfg.validate()
        report = HANDLERS[cfg.command](cfg)
        status = EXIT_OK if report.ok else EXIT_CHECK
    except ConstantValidationFailure as exc:
        report = Report(False, {"error": "constant-validation-failure", "constant": exc.constant,
                                "witness": exc.witness, "message": str(exc)})
        status = EXIT_CHECK
    except (UsageError, InvalidArgument, OutOfRange, OutOfDomain, PreconditionViolation) as exc:
        print(f"radlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BoundOverflow, SolverFailure) as exc:
        print(f"radlab: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    text = render(report, cfg.output_format)
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        stream.write(text)
    return status


def _float_list(s: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in s.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {s!r}") from None


def _int_list(s: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in s.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=FORMATS, default="json")
    common.add_argument("--output", dest="output_path", default=None,
                        help=f"write the report here (or set {OUTPUT_ENV})")
    common.add_argument("--sieve-limit", type=int, default=DEFAULT_SIEVE_LIMIT)
    common.add_argument("--epsilon", type=_float_list, default=None,
                        help="comma-separated epsilons in (0, 2)")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--constant-limit", type=int, default=10**6,
                        help="validate k1, k2, k3 on [2, this]")
    common.add_argument("--k1", type=float)
    common.add_argument("--k2", type=float)
    common.add_argument("--k3", type=float)
    common.add_argument("--skip-constant-check", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="radlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name in ("gc", "witness"):
            p.add_argument("--c", type=int, help="single c (overrides the range)")
        if name in ("gc", "verify", "witness", "scan-ratio"):
            p.add_argument("--c-min", type=int, default=3)
            p.add_argument("--c-max", type=int, default=2000)
        if name == "fixed-radical":
            p.add_argument("--primes", type=_int_list, default=(2, 3))
            p.add_argument("--cap", dest="exponent_cap", type=int, default=6)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    c_min, c_max = getattr(ns, "c_min", 3), getattr(ns, "c_max", 3)
    if getattr(ns, "c", None) is not None:
        c_min = c_max = ns.c
    return RunConfig(
        command=ns.command,
        c_min=c_min,
        c_max=c_max,
        epsilons=ns.epsilon or (DEFAULT_EPSILONS if ns.command in ("verify", "plan") else (0.5,)),
        sieve_limit=ns.sieve_limit,
        workers=ns.workers,
        output_format=ns.output_format,
        output_path=ns.output_path,
        primes=getattr(ns, "primes", (2, 3)),
        exponent_cap=getattr(ns, "exponent_cap", 6),
        constant_limit=ns.constant_limit,
        k1=ns.k1,
        k2=ns.k2,
        k3=ns.k3,
        skip_constant_check=ns.skip_constant_check,
    )


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
