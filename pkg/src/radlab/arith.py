"""Sieve-backed integer arithmetic.

Smallest-prime-factor tables, factorization, radical, totient, squarefree
divisors with their Moebius signs, coprime counting, and the prime sums
theta(x) = sum log p, sum (log p)/p and pi(x).
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import NamedTuple

import numpy as np

from .errors import InvalidArgument, OutOfRange

__all__ = [
    "Factorization",
    "SpfTable",
    "SquarefreeDivisor",
    "build_spf_table",
    "factorize",
    "radical",
    "euler_phi",
    "squarefree_divisors",
    "coprime_count",
    "chebyshev_theta",
    "mertens_logsum",
    "prime_count",
    "radical_of",
]


@dataclass(frozen=True)
class Factorization:
    """An integer ``n`` with its (prime, exponent) pairs in increasing prime order."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise InvalidArgument(f"malformed factor list {self.factors!r}")
            last = p
            prod *= p**e
        if prod != self.n:
            raise InvalidArgument(f"factors {self.factors!r} do not multiply to {self.n}")

    @classmethod
    def from_pairs(cls, pairs) -> Factorization:
        pairs = tuple(sorted((int(p), int(e)) for p, e in pairs))
        return cls(math.prod(p**e for p, e in pairs), pairs)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def omega(self) -> int:
        return len(self.factors)

    def radical(self) -> int:
        return math.prod(self.primes)

    def phi(self) -> int:
        return math.prod(p ** (e - 1) * (p - 1) for p, e in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def divisors(self) -> list[int]:
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)


class SpfTable:
    """Smallest-prime-factor table for ``2 <= n <= limit``.

    The table is immutable once built and may be shared between threads or
    pickled to worker processes.
    """

    __slots__ = ("limit", "spf", "primes", "_lookup", "_theta", "_mertens", "_log_primes")

    def __init__(self, limit: int, spf: np.ndarray):
        self.limit = int(limit)
        spf.setflags(write=False)
        self.spf = spf
        idx = np.arange(spf.size)
        primes = np.flatnonzero((spf == idx) & (idx >= 2)).astype(np.int64)
        primes.setflags(write=False)
        self.primes = primes
        self._lookup = array("l", spf.astype(np.int64).tobytes())
        self._theta = None
        self._mertens = None
        self._log_primes = None

    def __getstate__(self):
        return {"limit": self.limit, "spf": self.spf}

    def __setstate__(self, state):
        self.__init__(state["limit"], np.array(state["spf"]))

    def __repr__(self):
        return f"SpfTable(limit={self.limit})"

    def __getitem__(self, n: int) -> int:
        if n < 2 or n > self.limit:
            raise OutOfRange(f"{n} outside sieve range [2, {self.limit}]")
        return self._lookup[n]

    def is_prime(self, n: int) -> bool:
        return 2 <= n <= self.limit and self._lookup[n] == n

    def primes_below(self, x: int) -> np.ndarray:
        """Primes p < x; requires x <= limit + 1."""
        if x > self.limit + 1:
            raise OutOfRange(f"primes below {x} need a sieve past {self.limit}")
        return self.primes[: np.searchsorted(self.primes, x, side="left")]

    @property
    def log_primes(self) -> np.ndarray:
        if self._log_primes is None:
            self._log_primes = np.log(self.primes.astype(np.float64))
        return self._log_primes

    def _prefix_sums(self):
        # Kahan-compensated running sums, indexed by prime count.
        theta = [0.0]
        mert = [0.0]
        s = comp = 0.0
        m = mcomp = 0.0
        for p, lp in zip(self.primes.tolist(), self.log_primes.tolist()):
            y = lp - comp
            t = s + y
            comp = (t - s) - y
            s = t
            theta.append(s)
            y = lp / p - mcomp
            t = m + y
            mcomp = (t - m) - y
            m = t
            mert.append(m)
        self._theta = theta
        self._mertens = mert

    @property
    def theta_prefix(self) -> list[float]:
        """``theta_prefix[k]`` is the sum of log p over the first k primes."""
        if self._theta is None:
            self._prefix_sums()
        return self._theta

    @property
    def mertens_prefix(self) -> list[float]:
        if self._mertens is None:
            self._prefix_sums()
        return self._mertens


class SquarefreeDivisor(NamedTuple):
    d: int
    sign: int


def _spf_array(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.arange(limit + 1, dtype=np.int64)
    unset = spf == 0
    spf[unset] = idx[unset]
    return spf


def build_spf_table(limit: int) -> SpfTable:
    if limit < 2:
        raise InvalidArgument(f"sieve limit must be >= 2, got {limit}")
    return SpfTable(limit, _spf_array(int(limit)))


@lru_cache(maxsize=4)
def _cached_table(limit: int) -> SpfTable:
    return build_spf_table(limit)


def _table_for(x: float, table: SpfTable | None) -> SpfTable:
    need = max(2, math.floor(x))
    if table is not None and table.limit >= need:
        return table
    return _cached_table(need)


def factorize(n: int, table: SpfTable) -> Factorization:
    if n < 1:
        raise InvalidArgument(f"cannot factorize {n}")
    if n > table.limit:
        raise OutOfRange(f"{n} exceeds sieve limit {table.limit}")
    lookup = table._lookup
    factors = []
    m = n
    while m > 1:
        p = lookup[m]
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        factors.append((p, e))
    return Factorization(n, tuple(factors))


def radical(f: Factorization) -> int:
    return f.radical()


def euler_phi(f: Factorization) -> int:
    return f.phi()


def squarefree_divisors(f: Factorization) -> list[SquarefreeDivisor]:
    """All squarefree divisors of R(n) with sign (-1)^(number of prime factors)."""
    out = [SquarefreeDivisor(1, 1)]
    for p in f.primes:
        out += [SquarefreeDivisor(d * p, -s) for d, s in out]
    return out


def _as_fraction(t) -> Fraction:
    if isinstance(t, int):
        return Fraction(t)
    if isinstance(t, Rational):
        return Fraction(t.numerator, t.denominator)
    if isinstance(t, float):
        if not math.isfinite(t):
            raise InvalidArgument(f"non-finite argument {t!r}")
        return Fraction(t)
    raise InvalidArgument(f"expected a rational number, got {type(t).__name__}")


def coprime_count(t, f: Factorization) -> int:
    """Number of 1 <= n <= t with gcd(n, f.n) = 1, by inclusion-exclusion.

    ``t`` is an int or any exact rational; floors are taken exactly.
    """
    t = _as_fraction(t)
    if t < 0:
        raise InvalidArgument(f"t must be nonnegative, got {t}")
    num, den = t.numerator, t.denominator
    return sum(s * (num // (den * d)) for d, s in squarefree_divisors(f))


def _prime_index(x: float, table: SpfTable) -> int:
    # Number of primes <= x.
    return int(np.searchsorted(table.primes, math.floor(x), side="right"))


def chebyshev_theta(x: float, table: SpfTable | None = None) -> float:
    """theta(x): sum of log p over primes p <= x."""
    if x < 2:
        return 0.0
    tab = _table_for(x, table)
    return tab.theta_prefix[_prime_index(x, tab)]


def mertens_logsum(x: float, table: SpfTable | None = None) -> float:
    """Sum of (log p)/p over primes p <= x."""
    if x < 2:
        return 0.0
    tab = _table_for(x, table)
    return tab.mertens_prefix[_prime_index(x, tab)]


_SEGMENT = 1 << 22
_DENSE_LIMIT = 10**7


def _segmented_prime_count(n: int) -> int:
    root = math.isqrt(n)
    base = _cached_table(max(root, 2)).primes
    base = base[base <= root]
    count = len(base)
    lo = root + 1
    while lo <= n:
        hi = min(lo + _SEGMENT, n + 1)
        mark = np.ones(hi - lo, dtype=bool)
        for p in base.tolist():
            start = max(p * p, (lo + p - 1) // p * p)
            if start >= hi:
                continue
            mark[start - lo :: p] = False
        count += int(mark.sum())
        lo = hi
    return count


def prime_count(x: float, table: SpfTable | None = None) -> int:
    """pi(x).  Beyond the table (or 10^7 without one) a segmented sieve counts."""
    if x < 2:
        return 0
    n = math.floor(x)
    if table is not None and table.limit >= n:
        return _prime_index(x, table)
    if n > _DENSE_LIMIT:
        return _segmented_prime_count(n)
    return _prime_index(x, _cached_table(n))



def radical_of(n: int, table: SpfTable | None = None) -> int:
    """R(n) for any n >= 1; trial division when n is beyond the table."""
    if n < 1:
        raise InvalidArgument(f"radical needs n >= 1, got {n}")
    if table is not None and n <= table.limit:
        return factorize(n, table).radical()
    r = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            r *= p
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    return r * n if n > 1 else r
