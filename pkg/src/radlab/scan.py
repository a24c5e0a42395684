"""Range verification, witness partitions and the fixed-radical experiment."""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .arith import Factorization, SpfTable, build_spf_table, factorize, radical_of
from .bounds import (
    BOUND_TOLERANCE,
    BaseConstants,
    EpsilonPlan,
    classify_factors,
    f_factor,
    make_epsilon_plan,
    phi_square_identity,
    step_lower_bound,
    theorem2_check,
    theorem3_check,
    theorem5_check,
)
from .ec import ec_lemma3, ec_lemma4, ec_vector
from .errors import IdentityMismatch, InvalidArgument, OutOfRange
from .products import (
    CoprimePartition,
    all_partitions_product,
    corollary_product,
    enumerate_coprime_partitions,
    gc_bruteforce,
    gc_report,
    gc_theorem1,
)

log = logging.getLogger(__name__)

__all__ = [
    "CHECK_KINDS",
    "ScanResult",
    "Witness",
    "WitnessReport",
    "FixedRadicalResult",
    "check_c",
    "verify_range",
    "theorem4_witnesses",
    "abc_quality",
    "fixed_radical_scan",
]

CHECK_KINDS = (
    "theorem1",
    "partition_count",
    "all_partitions",
    "corollary",
    "ec_oracle",
    "lemma1",
    "lemma2",
    "lemma3",
    "lemma4",
    "phi_square",
    "theorem2",
    "theorem3",
    "theorem5",
    "step_bound",
    "class_counts",
    "witness",
    "strength",
)


@dataclass
class ScanResult:
    c_min: int
    c_max: int
    checks_run: dict[str, int] = field(default_factory=dict)
    failures: list[tuple[int, str, str]] = field(default_factory=list)
    findings: list[tuple[int, str, str]] = field(default_factory=list)
    min_ratio: float = math.inf
    min_ratio_c: int = 0
    max_ratio: float = -math.inf
    max_ratio_c: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def merge(self, other: ScanResult) -> None:
        """Fold in a result covering a later, disjoint c range."""
        counts = Counter(self.checks_run)
        counts.update(other.checks_run)
        self.checks_run = {k: counts[k] for k in CHECK_KINDS if counts[k]}
        self.failures.extend(other.failures)
        self.findings.extend(other.findings)
        if other.min_ratio < self.min_ratio:
            self.min_ratio, self.min_ratio_c = other.min_ratio, other.min_ratio_c
        if other.max_ratio > self.max_ratio:
            self.max_ratio, self.max_ratio_c = other.max_ratio, other.max_ratio_c
        self.c_min = min(self.c_min, other.c_min)
        self.c_max = max(self.c_max, other.c_max)


class Witness(NamedTuple):
    partition: CoprimePartition
    radical: int
    log_radical: float


@dataclass(frozen=True)
class WitnessReport:
    """Partitions whose radical is at least the geometric mean of all radicals of c."""

    c: int
    epsilon: float
    witnesses: list[Witness]
    geo_mean_log: float
    thm_lower_log: float
    abc_lower_log: float


@dataclass(frozen=True)
class FixedRadicalResult:
    primes: tuple[int, ...]
    exponent_cap: int
    points: list[tuple[tuple[int, ...], int, float]]
    min_ratio: float
    max_ratio: float
    log_lower: float
    log_upper: float
    violations: list[tuple[tuple[int, ...], float]]

    @property
    def holds(self) -> bool:
        return not self.violations


def _partition_radicals(c: int, table: SpfTable) -> list[tuple[CoprimePartition, int]]:
    rc = factorize(c, table).radical()
    return [(p, rc * factorize(p.a, table).radical() * factorize(p.b, table).radical())
            for p in enumerate_coprime_partitions(c)]


def _radical_reaches_mean(rad: int, rad_log: float, geo_log: float, gc_int, half: int) -> bool:
    gap = rad_log - geo_log
    if abs(gap) > 1e-9:
        return gap > 0
    # too close for floats: R^(phi/2) >= G_c exactly
    return rad**half >= gc_int()


def theorem4_witnesses(c: int, table: SpfTable, plan: EpsilonPlan) -> WitnessReport:
    report = gc_report(c, table)
    f = factorize(c, table)
    half = f.phi() // 2
    gc_cache = []

    def gc_int():
        if not gc_cache:
            gc_cache.append(report.gc.to_int())
        return gc_cache[0]

    witnesses = []
    for part, rad in _partition_radicals(c, table):
        rad_log = math.log(rad)
        if _radical_reaches_mean(rad, rad_log, report.log_geo_mean, gc_int, half):
            witnesses.append(Witness(part, rad, rad_log))
    thm_lower = plan.log_k_eps + (1.0 - plan.epsilon) * math.log(f.radical()) + 2.0 * math.log(c)
    return WitnessReport(
        c=c,
        epsilon=plan.epsilon,
        witnesses=witnesses,
        geo_mean_log=report.log_geo_mean,
        thm_lower_log=thm_lower,
        abc_lower_log=math.log(c) / (1.0 + plan.epsilon),
    )


def abc_quality(p: CoprimePartition, table: SpfTable | None = None) -> float:
    """log c / log R(abc); above 1 marks an exceptional triple."""
    if table is not None and p.c <= table.limit:
        # a, b, c pairwise coprime
        rad = radical_of(p.a, table) * radical_of(p.b, table) * radical_of(p.c, table)
    else:
        rad = radical_of(p.a * p.b * p.c)
    return math.log(p.c) / math.log(rad)


class _Tally:
    def __init__(self, c: int, result: ScanResult):
        self.c = c
        self.result = result
        self.counts = Counter()

    def __call__(self, kind: str, ok: bool, details="") -> None:
        self.counts[kind] += 1
        if not ok:
            self.result.failures.append((self.c, kind, details if isinstance(details, str) else details()))

    def finding(self, kind: str, details: str) -> None:
        self.result.findings.append((self.c, kind, details))


def _lemma_scan(f: Factorization, check: _Tally) -> None:
    c = f.n
    xs = np.arange(1, c, dtype=np.int64)
    values = ec_vector(f, xs)
    coprime = np.gcd(np.arange(1, c + 1, dtype=np.int64), c) == 1
    prefix = np.cumsum(coprime)
    oracle = prefix[c // xs - 1]
    bad = np.flatnonzero(values != oracle)
    check("ec_oracle", bad.size == 0, lambda: f"E_c(x) != count at x={xs[bad[:5]].tolist()}")
    phi = f.phi()
    slack = 2 ** (f.omega() - 1)
    scaled = values * xs
    env = (scaled > phi - slack * xs) & (values > 0) & (scaled < phi + slack * xs)
    bad = np.flatnonzero(~env)
    check("lemma1", bad.size == 0, lambda: f"envelope broken at x={xs[bad[:5]].tolist()}")
    tail = xs * slack >= phi
    bad = np.flatnonzero(tail & (values < 1))
    check("lemma2", bad.size == 0, lambda: f"E_c(x) < 1 at x={xs[bad[:5]].tolist()}")


def check_c(c: int, table: SpfTable, constants: BaseConstants, plans: list[EpsilonPlan],
            tolerance: float = BOUND_TOLERANCE) -> ScanResult:
    """Run every identity and bound check for a single c."""
    result = ScanResult(c, c)
    check = _Tally(c, result)
    f = factorize(c, table)

    brute = gc_bruteforce(c, table)
    closed = gc_theorem1(c, table)
    check("theorem1", brute == closed, lambda: f"exponents differ {brute.diff(closed)}")
    parts = enumerate_coprime_partitions(c)
    check("partition_count", 2 * len(parts) == f.phi(), f"{len(parts)} partitions, phi={f.phi()}")
    a = all_partitions_product(c, table, "closed")
    b = all_partitions_product(c, table, "brute")
    check("all_partitions", a == b, lambda: f"exponents differ {a.diff(b)}")
    lhs, rhs = corollary_product(c, table)
    check("corollary", lhs == rhs, lambda: f"exponents differ {lhs.diff(rhs)}")

    _lemma_scan(f, check)
    for i, (q, alpha) in enumerate(f.factors):
        kind, fn = ("lemma3", ec_lemma3) if alpha >= 2 else ("lemma4", ec_lemma4)
        try:
            fn(f, i)
            check(kind, True)
        except IdentityMismatch as exc:
            check(kind, False, str(exc))
    left, right = phi_square_identity(f)
    check("phi_square", left == right, f"{left} != {right}")

    report = gc_report(c, table)
    t2 = theorem2_check(f, report, constants, tolerance)
    check("theorem2", t2.satisfied, f"margin {t2.margin:.3g}")
    t5 = theorem5_check(f, report, constants, tolerance)
    check("theorem5", t5.satisfied, f"margin {t5.margin:.3g}")
    log_f = {q: f_factor(q, alpha, f) for q, alpha in f.factors}
    log_r, log_c = math.log(f.radical()), math.log(c)

    for plan in plans:
        eps = plan.epsilon
        t3 = theorem3_check(f, plan, report, tolerance)
        check("theorem3", t3.satisfied, f"eps={eps} margin {t3.margin:.3g}")
        for q, alpha in f.factors:
            floor = step_lower_bound(q, alpha, eps)
            check("step_bound", log_f[q] > floor, f"eps={eps} q={q} logF={log_f[q]:.6g} floor={floor:.6g}")
        cc = classify_factors(f, plan)
        ok = cc.total == f.omega() and cc.w1 <= plan.pi_n and cc.w3 <= plan.pi_m
        check("class_counts", ok, f"eps={eps} {cc}")
        if cc.w1 == plan.pi_n and plan.pi_n:
            check.finding("class_counts", f"eps={eps}: w1 = pi(N) = {cc.w1}")
        if cc.w3 == plan.pi_m and plan.pi_m:
            check.finding("class_counts", f"eps={eps}: w3 = pi(M) = {cc.w3}")
        strength = (1.0 - eps) * log_r + 2.0 * log_c > log_c / (1.0 + eps)
        check("strength", strength, f"eps={eps}")

    wit = theorem4_witnesses(c, table, plans[0]) if plans else None
    if wit is not None:
        ok = bool(wit.witnesses) and all(w.log_radical >= wit.geo_mean_log - 1e-12 for w in wit.witnesses)
        ok = ok and wit.geo_mean_log > wit.thm_lower_log
        check("witness", ok, f"{len(wit.witnesses)} witnesses")

    result.checks_run = {k: check.counts[k] for k in CHECK_KINDS if check.counts[k]}
    result.min_ratio = result.max_ratio = report.ratio
    result.min_ratio_c = result.max_ratio_c = c
    return result


def _scan_block(c_lo: int, c_hi: int, table: SpfTable, constants: BaseConstants,
                plans: list[EpsilonPlan], tolerance: float) -> ScanResult:
    out = ScanResult(c_lo, c_hi)
    for c in range(c_lo, c_hi + 1):
        out.merge(check_c(c, table, constants, plans, tolerance))
    out.c_min, out.c_max = c_lo, c_hi
    return out


_worker_table: SpfTable | None = None


def _init_worker(limit: int) -> None:
    global _worker_table
    _worker_table = build_spf_table(limit)


def _worker_block(args) -> ScanResult:
    c_lo, c_hi, constants, plans, tolerance = args
    return _scan_block(c_lo, c_hi, _worker_table, constants, plans, tolerance)


def _blocks(c_min: int, c_max: int, n: int) -> list[tuple[int, int]]:
    # Equal-work split: per-c cost grows roughly linearly in c.
    edges = [c_min]
    total = (c_max * c_max - c_min * c_min) or 1
    for k in range(1, n):
        edges.append(max(edges[-1] + 1, math.isqrt(c_min * c_min + total * k // n)))
    edges.append(c_max + 1)
    return [(lo, hi - 1) for lo, hi in zip(edges, edges[1:]) if lo < hi]


def verify_range(c_min: int, c_max: int, table: SpfTable, constants: BaseConstants,
                 epsilons=(0.25, 0.5, 1.0), workers: int = 1,
                 tolerance: float = BOUND_TOLERANCE) -> ScanResult:
    """Check every c in [c_min, c_max]; output does not depend on ``workers``."""
    if not 3 <= c_min <= c_max:
        raise InvalidArgument(f"need 3 <= c_min <= c_max, got [{c_min}, {c_max}]")
    if c_max > table.limit:
        raise OutOfRange(f"c_max={c_max} exceeds sieve limit {table.limit}")
    plans = [make_epsilon_plan(e, constants) for e in epsilons]
    if workers <= 1 or c_max - c_min < 2 * workers:
        return _scan_block(c_min, c_max, table, constants, plans, tolerance)
    blocks = _blocks(c_min, c_max, 4 * workers)
    jobs = [(lo, hi, constants, plans, tolerance) for lo, hi in blocks]
    result = ScanResult(c_min, c_min)
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(c_max,)) as pool:
        for part in pool.map(_worker_block, jobs):
            result.merge(part)
    log.debug("scanned [%d, %d] on %d workers", c_min, c_max, workers)
    return result


def fixed_radical_scan(primes, exponent_cap: int, table: SpfTable, plan: EpsilonPlan,
                       constants: BaseConstants | None = None) -> FixedRadicalResult:
    """Ratio G^(2/phi) / (R c^2) over c = prod q_i^x_i with 1 <= x_i <= cap.

    Every grid point is checked against k_eps R^-eps <= ratio <= k5 k6^(3^omega).
    """
    constants = constants or plan.constants
    primes = tuple(sorted(int(p) for p in primes))
    if len(set(primes)) != len(primes) or not primes or any(not table.is_prime(p) for p in primes):
        raise InvalidArgument(f"need distinct primes, got {primes}")
    if exponent_cap < 1:
        raise InvalidArgument("exponent cap must be >= 1")
    grid = list(itertools.product(range(1, exponent_cap + 1), repeat=len(primes)))
    for xs in grid:
        c = math.prod(q**x for q, x in zip(primes, xs))
        if c > table.limit:
            raise OutOfRange(f"exponents {xs} give c={c} beyond sieve limit {table.limit}")
    rad = math.prod(primes)
    log_lower = plan.log_k_eps - plan.epsilon * math.log(rad)
    log_upper = constants.log_k5 + float(3 ** len(primes)) * constants.log_k6
    points, violations = [], []
    for xs in grid:
        c = math.prod(q**x for q, x in zip(primes, xs))
        if c < 3:
            continue
        rep = gc_report(c, table)
        points.append((xs, c, rep.ratio))
        if not log_lower <= rep.log_ratio <= log_upper:
            violations.append((xs, rep.ratio))
    ratios = [r for _, _, r in points]
    return FixedRadicalResult(
        primes=primes,
        exponent_cap=exponent_cap,
        points=points,
        min_ratio=min(ratios, default=math.nan),
        max_ratio=max(ratios, default=math.nan),
        log_lower=log_lower,
        log_upper=log_upper,
        violations=violations,
    )
