"""End-to-end acceptance checks, one test per criterion.

Each test prints a PASS/FAIL line; the same lines are collected into the
"acceptance criteria" section of the pytest terminal summary.
"""

import math
import os
import time
from fractions import Fraction

import numpy as np
import pytest

from radlab.arith import build_spf_table, factorize
from radlab.bounds import (
    BaseConstants,
    estimate_base_constants,
    m_equation,
    make_epsilon_plan,
    n_equation,
    solve_m_epsilon,
    solve_n_epsilon,
    theorem2_check,
    theorem3_check,
    theorem5_check,
)
from radlab.ec import ec, ec_bounds, ec_lemma3, ec_lemma4
from radlab.products import (
    all_partitions_product,
    corollary_product,
    gc_bruteforce,
    gc_report,
    gc_theorem1,
)
from radlab.scan import fixed_radical_scan, theorem4_witnesses, verify_range

from oracles import gc_bigint

EPSILONS = (0.25, 0.5, 1.0)


@pytest.fixture(scope="module")
def tab():
    return build_spf_table(10_000)


@pytest.fixture(scope="module")
def full_constants():
    return estimate_base_constants(10**6)


def _cpus():
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def test_01_closed_form_matches_partition_walk(tab, criterion):
    with criterion(1, "closed-form G_c equals partition product, 3 <= c <= 2000") as cr:
        t0 = time.perf_counter()
        bad = [c for c in range(3, 2001) if gc_theorem1(c, tab) != gc_bruteforce(c, tab)]
        elapsed = time.perf_counter() - t0
        cr.detail = f"{len(bad)} mismatches, {elapsed:.2f}s single-threaded (limit 120s)"
        assert not bad, bad[:10]
        assert elapsed <= 120.0


def test_01_parallel_speedup(full_constants, criterion):
    with criterion(1, "near-linear speedup to 8 workers") as cr:
        n = _cpus()
        if n < 8:
            cr.detail = f"only {n} CPU(s) available"
            pytest.skip(f"speedup needs 8 CPUs, found {n}")
        table = build_spf_table(2000)
        t0 = time.perf_counter()
        one = verify_range(3, 2000, table, full_constants, workers=1)
        t1 = time.perf_counter()
        eight = verify_range(3, 2000, table, full_constants, workers=8)
        t8 = time.perf_counter() - t1
        speedup = (t1 - t0) / t8
        cr.detail = f"speedup {speedup:.2f}x on 8 workers"
        assert one == eight
        assert speedup >= 4.0


def test_02_spot_values(tab, criterion):
    with criterion(2, "G_10 = 6300, G_9 = 7560, geometric means") as cr:
        g10, g9 = gc_report(10, tab), gc_report(9, tab)
        assert g10.gc.to_int() == 6300 == gc_bigint(10)
        assert g9.gc.to_int() == 7560 == gc_bigint(9)
        assert g10.gc.as_dict() == {2: 2, 3: 2, 5: 2, 7: 1}
        assert g9.gc.as_dict() == {2: 3, 3: 3, 5: 1, 7: 1}
        # oracles: sqrt(6300) and 7560^(1/3) from the exact integers
        m10, m9 = math.sqrt(6300), 7560 ** (1 / 3)
        assert abs(m10 - 79.3725) / m10 < 1e-6
        cr.detail = f"geo means {g10.geo_mean:.7f}, {g9.geo_mean:.7f}"
        assert abs(g10.geo_mean - m10) / m10 < 1e-6
        assert abs(g9.geo_mean - m9) / m9 < 1e-6


def test_03_ec_oracle(tab, criterion):
    with criterion(3, "E_c(x) equals coprime count, 2 <= c <= 1000, 1 <= x < c") as cr:
        mismatches = 0
        pairs = 0
        for c in range(2, 1001):
            f = factorize(c, tab)
            prefix = [0]
            for n in range(1, c + 1):
                prefix.append(prefix[-1] + (math.gcd(n, c) == 1))
            for x in range(1, c):
                pairs += 1
                mismatches += ec(f, x) != prefix[c // x]
        cr.detail = f"{mismatches} mismatches over {pairs} pairs"
        assert mismatches == 0


def test_04_envelope_and_identities(tab, criterion):
    with criterion(4, "envelope and floor for c <= 1000; prime-power identities for c <= 5000") as cr:
        bad_env = bad_floor = 0
        for c in range(2, 1001):
            f = factorize(c, tab)
            for x in range(1, c):
                b = ec_bounds(f, x)
                bad_env += not b.strict
                bad_floor += not b.lemma2_holds
        n3 = n4 = 0
        for c in range(2, 5001):
            f = factorize(c, tab)
            for i, (q, a) in enumerate(f.factors):
                # raises on any mismatch
                if a >= 2:
                    assert ec_lemma3(f, i) == Fraction(ec(f, q))
                    n3 += 1
                else:
                    assert ec_lemma4(f, i) == Fraction(ec(f, q))
                    n4 += 1
        cr.detail = f"envelope failures {bad_env}, floor failures {bad_floor}, identities {n3}+{n4}"
        assert bad_env == 0 and bad_floor == 0


def test_05_product_identities(tab, criterion):
    with criterion(5, "all-partitions identity 2..2000, divisor-product identity 3..300") as cr:
        bad_all = [c for c in range(2, 2001)
                   if all_partitions_product(c, tab) != all_partitions_product(c, tab, method="brute")]
        bad_cor = []
        for c in range(3, 301):
            lhs, rhs = corollary_product(c, tab)
            if lhs != rhs:
                bad_cor.append(c)
        four = [s.to_int() for s in corollary_product(4, tab)]
        six = [s.to_int() for s in corollary_product(6, tab)]
        cr.detail = f"mismatches {len(bad_all)} and {len(bad_cor)}; c=4 {four}, c=6 {six}"
        assert not bad_all and not bad_cor
        assert four == [12, 12] and six == [360, 360]


def test_06_constants(full_constants, criterion):
    with criterion(6, "k1=0.2, k2=1.39, k3=2.0 on [2, 10^6]; derived constants") as cr:
        k = full_constants
        assert k.validated_limit == 10**6
        r4 = abs(k.k4 - 4 * math.exp(-2 * k.k3 + 2 * k.k1 - 4 * k.k2)) / k.k4
        r5 = abs(k.k5 - math.exp(2 * k.k3)) / k.k5
        r6 = abs(k.k6 - math.exp(2 * k.k2)) / k.k6
        cr.detail = f"k4={k.k4:.6g} k5={k.k5:.6g} k6={k.k6:.6g}, max rel err {max(r4, r5, r6):.1e}"
        assert max(r4, r5, r6) <= 1e-12


def test_07_bound_chain(tab, full_constants, criterion):
    with criterion(7, "lower < log geometric mean < upper, 3 <= c <= 2000, eps in {0.25, 0.5, 1}") as cr:
        plans = [make_epsilon_plan(e, full_constants) for e in EPSILONS]
        failures = []
        margins = {"lower": math.inf, "upper": math.inf, "eps": math.inf}
        for c in range(3, 2001):
            f, rep = factorize(c, tab), gc_report(c, tab)
            t2 = theorem2_check(f, rep, full_constants)
            t5 = theorem5_check(f, rep, full_constants)
            margins["lower"] = min(margins["lower"], t2.margin)
            margins["upper"] = min(margins["upper"], t5.margin)
            if not (t2.satisfied and t5.satisfied):
                failures.append(c)
            for p in plans:
                t3 = theorem3_check(f, p, rep)
                margins["eps"] = min(margins["eps"], t3.margin)
                if not t3.satisfied:
                    failures.append((c, p.epsilon))
        cr.detail = "min log margins " + ", ".join(f"{k} {v:.3g}" for k, v in margins.items())
        assert not failures, failures[:10]
        assert min(margins.values()) > 1e-9


def test_08_root_solver(criterion):
    with criterion(8, "eps=0.5 thresholds in (29, 30)") as cr:
        n, m = solve_n_epsilon(0.5), solve_m_epsilon(0.5)
        cr.detail = f"N={n:.6f} (res {n_equation(n, 0.5):.1e}), M={m:.6f} (res {m_equation(m, 0.5):.1e})"
        for root, eq in ((n, n_equation), (m, m_equation)):
            assert 29 < root < 30
            assert eq(29.0, 0.5) < 0 < eq(30.0, 0.5)
            assert abs(eq(root, 0.5)) < 1e-6


def test_09_witnesses(tab, full_constants, criterion):
    with criterion(9, "a partition reaches the geometric mean for every 3 <= c <= 2000") as cr:
        plan = make_epsilon_plan(0.5, full_constants)
        empty = [c for c in range(3, 2001) if not theorem4_witnesses(c, tab, plan).witnesses]
        ten = {(w.partition.a, w.partition.b) for w in theorem4_witnesses(10, tab, plan).witnesses}
        cr.detail = f"{len(empty)} empty sets, c=10 -> {sorted(ten)}"
        assert not empty and ten == {(3, 7)}


def test_10_fixed_radical(full_constants, criterion):
    with criterion(10, "primes {2,3}, cap 6, eps=0.5: every ratio inside the bracket") as cr:
        plan = make_epsilon_plan(0.5, full_constants)
        table = build_spf_table(6**6)
        first = fixed_radical_scan((2, 3), 6, table, plan)
        second = fixed_radical_scan((2, 3), 6, build_spf_table(6**6), make_epsilon_plan(0.5, full_constants))
        lo, hi = math.exp(first.log_lower), math.exp(first.log_upper)
        cr.detail = (f"{len(first.points)} points, ratio in [{first.min_ratio:.6g}, {first.max_ratio:.6g}]"
                     f" within [{lo:.3g}, {hi:.3g}]")
        assert len(first.points) == 36 and first.holds
        assert lo <= first.min_ratio <= first.max_ratio <= hi
        assert first == second
        assert np.isfinite(first.min_ratio)
