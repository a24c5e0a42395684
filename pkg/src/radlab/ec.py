"""The alternating floor sum E_c(x) and its bounds.

E_c(x) = sum over squarefree d | R(c) of mu(d) * floor(c / (x d)), which is
the number of n <= c/x with gcd(n, c) = 1.  Every bound here is compared in
exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import Factorization, _as_fraction, squarefree_divisors
from .errors import IdentityMismatch, InvalidArgument, OutOfDomain, PreconditionViolation

__all__ = ["EcBounds", "ec", "ec_vector", "ec_bounds", "ec_lemma3", "ec_lemma4"]


def ec(c: Factorization, x) -> int:
    """E_c(x) for a positive int or rational ``x``."""
    divs = squarefree_divisors(c)
    n = c.n
    if isinstance(x, int):
        if x <= 0:
            raise InvalidArgument(f"x must be positive, got {x}")
        return sum(s * (n // (x * d)) for d, s in divs)
    x = _as_fraction(x)
    if x <= 0:
        raise InvalidArgument(f"x must be positive, got {x}")
    # floor(c / (x d)) with x = u/v is floor(c v / (u d))
    num = n * x.denominator
    u = x.numerator
    return sum(s * (num // (u * d)) for d, s in divs)


def ec_vector(c: Factorization, xs) -> np.ndarray:
    """E_c(x) for an array of positive integers ``xs`` (int64 arithmetic)."""
    xs = np.asarray(xs, dtype=np.int64)
    if xs.size and xs.min() <= 0:
        raise InvalidArgument("x values must be positive")
    out = np.zeros(xs.shape, dtype=np.int64)
    for d, s in squarefree_divisors(c):
        q = c.n // (xs * d)
        if s > 0:
            out += q
        else:
            out -= q
    return out


@dataclass(frozen=True)
class EcBounds:
    """E_c(x) together with the envelope max(0, phi/x - 2^(w-1)) < E < phi/x + 2^(w-1).

    ``lemma2_lower`` is the piecewise floor: phi/x - 2^(w-1) while
    x < phi / 2^(w-1), and 1 from there up to c.
    """

    lower: Fraction
    upper: Fraction
    value: int
    lemma2_lower: Fraction
    lemma2_branch: str

    @property
    def strict(self) -> bool:
        return self.lower < self.value < self.upper

    @property
    def lemma2_holds(self) -> bool:
        if self.lemma2_branch == "one":
            return self.value >= 1
        return self.value > self.lemma2_lower


def ec_bounds(c: Factorization, x) -> EcBounds:
    x = _as_fraction(x)
    if c.omega() < 1:
        raise OutOfDomain("the envelope needs c with at least one prime factor")
    if x <= 0:
        raise InvalidArgument(f"x must be positive, got {x}")
    if x >= c.n:
        raise OutOfDomain(f"x={x} must be below c={c.n}")
    phi = c.phi()
    slack = 2 ** (c.omega() - 1)
    main = Fraction(phi) / x
    value = ec(c, x)
    threshold = Fraction(phi, slack)
    if x < threshold:
        l2, branch = main - slack, "main"
    else:
        l2, branch = Fraction(1), "one"
    return EcBounds(
        lower=max(Fraction(0), main - slack),
        upper=main + slack,
        value=value,
        lemma2_lower=l2,
        lemma2_branch=branch,
    )


def _prime_at(c: Factorization, i: int) -> tuple[int, int]:
    if not 0 <= i < c.omega():
        raise InvalidArgument(f"prime index {i} out of range for {c.n}")
    return c.factors[i]


def ec_lemma3(c: Factorization, i: int) -> Fraction:
    """phi(c)/q for the i-th prime q of c with exponent >= 2; checked against E_c(q)."""
    q, alpha = _prime_at(c, i)
    if alpha < 2:
        raise PreconditionViolation(f"{q} divides {c.n} only once")
    value = Fraction(c.phi(), q)
    got = ec(c, q)
    if got != value:
        raise IdentityMismatch(f"E_{c.n}({q}) = {got} but phi(c)/q = {value}")
    return value


def ec_lemma4(c: Factorization, i: int) -> Fraction:
    """phi(c)/(q-1) - E_{c/q}(q) for a prime q exactly dividing c; checked against E_c(q)."""
    q, alpha = _prime_at(c, i)
    if alpha != 1:
        raise PreconditionViolation(f"{q}^{alpha} divides {c.n}; exponent must be 1")
    cbar = Factorization(c.n // q, tuple(f for f in c.factors if f[0] != q))
    value = Fraction(c.phi(), q - 1) - ec(cbar, q)
    got = ec(c, q)
    if got != value:
        raise IdentityMismatch(f"E_{c.n}({q}) = {got} but the reduction gives {value}")
    return value
