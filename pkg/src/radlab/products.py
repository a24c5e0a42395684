"""Exact radical products over partitions of c.

G_c is the product of R(a b c) over coprime a + b = c, a < b.  It is built
two independent ways: by walking every partition, and from the closed form
R(c)^(phi(c)/2) * prod p^E_c(p) over primes p < c coprime to c.  Products are
kept as prime -> exponent maps, so nothing here overflows.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .arith import Factorization, SpfTable, factorize
from .ec import ec, ec_vector
from .errors import IdentityMismatch, InvalidArgument, OutOfDomain, OutOfRange

__all__ = [
    "ExponentVector",
    "CoprimePartition",
    "GcReport",
    "enumerate_coprime_partitions",
    "gc_bruteforce",
    "gc_theorem1",
    "all_partitions_product",
    "corollary_product",
    "partition_count",
    "gc_report",
]


class ExponentVector:
    """A positive integer held as its prime -> exponent map.

    Zero exponents are never stored.  Two vectors are equal iff every
    exponent matches.
    """

    __slots__ = ("_e",)

    def __init__(self, entries: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        e = {}
        for p, k in items:
            p, k = int(p), int(k)
            if k < 0:
                raise InvalidArgument(f"negative exponent {k} for prime {p}")
            if k:
                e[p] = e.get(p, 0) + k
        self._e = dict(sorted(e.items()))

    @classmethod
    def from_int(cls, n: int, table: SpfTable) -> ExponentVector:
        return cls(factorize(n, table).factors)

    def __getitem__(self, p: int) -> int:
        return self._e.get(p, 0)

    def __iter__(self):
        return iter(self._e)

    def __len__(self):
        return len(self._e)

    def items(self):
        return self._e.items()

    def as_dict(self) -> dict[int, int]:
        return dict(self._e)

    def __eq__(self, other):
        if not isinstance(other, ExponentVector):
            return NotImplemented
        return self._e == other._e

    def __hash__(self):
        return hash(tuple(self._e.items()))

    def __mul__(self, other: ExponentVector) -> ExponentVector:
        merged = Counter(self._e)
        merged.update(other._e)
        return ExponentVector(merged)

    def __pow__(self, k: int) -> ExponentVector:
        if k < 0:
            raise InvalidArgument("negative powers are not representable")
        return ExponentVector({p: e * k for p, e in self._e.items()})

    def log_value(self) -> float:
        return math.fsum(e * math.log(p) for p, e in self._e.items())

    def to_int(self) -> int:
        return math.prod(p**e for p, e in self._e.items())

    def diff(self, other: ExponentVector) -> dict[int, tuple[int, int]]:
        """Primes where the two vectors disagree, with both exponents."""
        keys = set(self._e) | set(other._e)
        return {p: (self[p], other[p]) for p in sorted(keys) if self[p] != other[p]}

    def __repr__(self):
        body = ", ".join(f"{p}: {e}" for p, e in self._e.items())
        return f"ExponentVector({{{body}}})"


@dataclass(frozen=True, order=True)
class CoprimePartition:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a + self.b != self.c or self.a >= self.b or math.gcd(self.a, self.b) != 1:
            raise InvalidArgument(f"({self.a}, {self.b}, {self.c}) is not a coprime partition")


def _check_c(c: int, table: SpfTable | None = None, least: int = 3):
    if c < least:
        raise OutOfDomain(f"c must be >= {least}, got {c}")
    if table is not None and c > table.limit:
        raise OutOfRange(f"c={c} exceeds sieve limit {table.limit}")


def _distinct_primes(n: int, lookup) -> list[int]:
    out = []
    while n > 1:
        p = lookup[n]
        out.append(p)
        n //= p
        while n % p == 0:
            n //= p
    return out


def enumerate_coprime_partitions(c: int) -> list[CoprimePartition]:
    _check_c(c)
    return [CoprimePartition(a, c - a, c) for a in range(1, (c - 1) // 2 + 1) if math.gcd(a, c) == 1]


def partition_count(d: int, table: SpfTable) -> int:
    """phi(d)/2 for d >= 3; the single row 1 + 1 = 2 counts once and d = 1 has none."""
    if d == 1:
        return 0
    if d == 2:
        return 1
    return factorize(d, table).phi() // 2


def gc_bruteforce(c: int, table: SpfTable) -> ExponentVector:
    """G_c by multiplying R(a b c) over every coprime partition."""
    _check_c(c, table)
    lookup = table._lookup
    counts: Counter = Counter()
    rows = 0
    for a in range(1, (c - 1) // 2 + 1):
        if math.gcd(a, c) != 1:
            continue
        rows += 1
        # a, b, c are pairwise coprime here, so their prime sets are disjoint
        counts.update(_distinct_primes(a, lookup))
        counts.update(_distinct_primes(c - a, lookup))
    for q in _distinct_primes(c, lookup):
        counts[q] += rows
    return ExponentVector(counts)


def gc_theorem1(c: int, table: SpfTable) -> ExponentVector:
    """G_c from R(c)^(phi(c)/2) times p^E_c(p) over primes p < c with p not dividing c."""
    _check_c(c, table)
    f = factorize(c, table)
    half = f.phi() // 2
    entries = {q: half for q in f.primes}
    primes = table.primes_below(c)
    if f.primes:
        keep = primes % f.primes[0] != 0
        for q in f.primes[1:]:
            keep &= primes % q != 0
        primes = primes[keep]
    exps = ec_vector(f, primes)
    nz = exps != 0
    entries.update(zip(primes[nz].tolist(), exps[nz].tolist()))
    return ExponentVector(entries)


def all_partitions_product(c: int, table: SpfTable, method: str = "closed") -> ExponentVector:
    """Product of R(x y c) over every x + y = c with x <= y, coprime or not.

    ``method="closed"`` gives R(c)^[c/2] * prod p^[c/p] over primes p < c
    not dividing c; ``method="brute"`` walks x = 1 .. [c/2].
    """
    _check_c(c, table, least=2)
    lookup = table._lookup
    cprimes = _distinct_primes(c, lookup)
    if method == "closed":
        entries = {q: c // 2 for q in cprimes}
        for p in table.primes_below(c).tolist():
            if c % p:
                entries[p] = c // p
        return ExponentVector(entries)
    if method == "brute":
        counts: Counter = Counter()
        for x in range(1, c // 2 + 1):
            counts.update(set(_distinct_primes(x, lookup)) | set(_distinct_primes(c - x, lookup)) | set(cprimes))
        return ExponentVector(counts)
    raise InvalidArgument(f"unknown method {method!r}")


def _g_small(d: int, table: SpfTable) -> ExponentVector:
    if d == 1:
        return ExponentVector()
    if d == 2:
        return ExponentVector({2: 1})
    return gc_bruteforce(d, table)


def _theta_exponent(q: int, divisors: list[int], table: SpfTable) -> int:
    total = 0
    for d in divisors:
        if d % q == 0:
            total += partition_count(d, table)
        else:
            total += ec(factorize(d, table), q)
    return total


def corollary_product(c: int, table: SpfTable, check: bool = False) -> tuple[ExponentVector, ExponentVector]:
    """Both sides of prod_{d | c} G_d = prod q^Theta(q) * prod p^[c/p].

    ``lhs`` multiplies partition-walk G_d over all divisors, with G_1 = 1 and
    G_2 = R(1*1*2) = 2.  ``rhs`` builds Theta(q) from partition counts and
    E_d(q).  With ``check=True`` a disagreement raises IdentityMismatch.
    """
    _check_c(c, table)
    f = factorize(c, table)
    divisors = f.divisors()
    lhs = ExponentVector()
    for d in divisors:
        lhs = lhs * _g_small(d, table)
    entries = {q: _theta_exponent(q, divisors, table) for q in f.primes}
    for p in table.primes_below(c).tolist():
        if c % p:
            entries[p] = c // p
    rhs = ExponentVector(entries)
    if check and lhs != rhs:
        raise IdentityMismatch(f"divisor product identity fails at c={c}: {lhs.diff(rhs)}")
    return lhs, rhs


@dataclass(frozen=True)
class GcReport:
    c: int
    num_partitions: int
    gc: ExponentVector
    log_geo_mean: float
    ratio: float
    log_ratio: float

    @property
    def geo_mean(self) -> float:
        return math.exp(self.log_geo_mean)


def gc_report(c: int, table: SpfTable) -> GcReport:
    _check_c(c, table)
    f = factorize(c, table)
    phi = f.phi()
    gc = gc_theorem1(c, table)
    lg = 2.0 * gc.log_value() / phi
    log_ratio = lg - math.log(f.radical()) - 2.0 * math.log(c)
    return GcReport(c=c, num_partitions=phi // 2, gc=gc, log_geo_mean=lg, ratio=math.exp(log_ratio), log_ratio=log_ratio)
