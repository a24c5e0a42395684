"""Absolute constants and the lower/upper bound chain for the geometric mean.

Everything is evaluated in log space.  The base constants k1, k2, k3 are
explicit defaults that are checked against theta(x) and the Mertens sum on
a finite range before use; k4, k5, k6 and k_eps are derived from them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import bisect

from .arith import Factorization, SpfTable, _cached_table, prime_count
from .ec import ec
from .errors import ConstantValidationFailure, InvalidArgument, BoundOverflow, SolverFailure
from .products import GcReport

__all__ = [
    "DEFAULT_K1",
    "DEFAULT_K2",
    "DEFAULT_K3",
    "BOUND_TOLERANCE",
    "BaseConstants",
    "EpsilonPlan",
    "ClassCounts",
    "BoundCheck",
    "estimate_base_constants",
    "n_equation",
    "m_equation",
    "solve_n_epsilon",
    "solve_m_epsilon",
    "make_epsilon_plan",
    "f_factor",
    "step_lower_bound",
    "classify_factors",
    "theorem2_lower",
    "theorem2_check",
    "theorem3_check",
    "theorem5_upper",
    "theorem5_check",
    "phi_square_identity",
]

DEFAULT_K1 = 0.2
DEFAULT_K2 = 1.39
DEFAULT_K3 = 2.0
BOUND_TOLERANCE = 1e-9
ROOT_CAP = 1e9


@dataclass(frozen=True)
class BaseConstants:
    """k1, k2, k3 with the constants derived from them.

    k4 = 4 exp(-2 k3 + 2 k1 - 4 k2), k5 = exp(2 k3), k6 = exp(2 k2).
    ``validated_limit`` is the x range [2, limit] on which k1 x < theta(x) < k2 x
    and |sum (log p)/p - log x| < k3 were confirmed; 0 means unchecked.
    """

    k1: float = DEFAULT_K1
    k2: float = DEFAULT_K2
    k3: float = DEFAULT_K3
    validated_limit: int = 0
    k4: float = field(init=False)
    k5: float = field(init=False)
    k6: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "k4", 4.0 * math.exp(-2.0 * self.k3 + 2.0 * self.k1 - 4.0 * self.k2))
        object.__setattr__(self, "k5", math.exp(2.0 * self.k3))
        object.__setattr__(self, "k6", math.exp(2.0 * self.k2))

    @property
    def log_k4(self) -> float:
        return math.log(4.0) - 2.0 * self.k3 + 2.0 * self.k1 - 4.0 * self.k2

    @property
    def log_k5(self) -> float:
        return 2.0 * self.k3

    @property
    def log_k6(self) -> float:
        return 2.0 * self.k2


def estimate_base_constants(
    limit: int = 10**6,
    k1: float = DEFAULT_K1,
    k2: float = DEFAULT_K2,
    k3: float = DEFAULT_K3,
    table: SpfTable | None = None,
) -> BaseConstants:
    """Check the prime-sum inequalities for k1, k2, k3 on all real x in [2, limit].

    theta and the Mertens sum are constant between consecutive primes while
    x and log x grow, so the extremes over [p_k, p_{k+1}) sit at p_k and at
    the left limit x -> p_{k+1}.  Both are checked for every prime <= limit
    (the last interval is closed at ``limit``).  Raises
    ConstantValidationFailure naming the first offending x.
    """
    if limit < 100:
        raise InvalidArgument(f"validation limit must be >= 100, got {limit}")
    tab = table if table is not None and table.limit >= limit else _cached_table(limit)
    n = int(np.searchsorted(tab.primes, limit, side="right"))
    primes = tab.primes[:n].astype(np.float64)
    theta = np.asarray(tab.theta_prefix[1 : n + 1])
    mert = np.asarray(tab.mertens_prefix[1 : n + 1])
    right = np.append(primes[1:], float(limit))

    def fail(name, value, mask, points):
        x = float(points[np.argmax(mask)])
        raise ConstantValidationFailure(f"{name}={value} fails at x={x:g}", constant=name, witness=x)

    bad = k1 * right >= theta
    if bad.any():
        fail("k1", k1, bad, right)
    bad = theta >= k2 * primes
    if bad.any():
        fail("k2", k2, bad, primes)
    bad = np.abs(mert - np.log(primes)) >= k3
    if bad.any():
        fail("k3", k3, bad, primes)
    bad = np.abs(mert - np.log(right)) >= k3
    if bad.any():
        fail("k3", k3, bad, right)
    return BaseConstants(k1=k1, k2=k2, k3=k3, validated_limit=int(limit))


def n_equation(x: float, epsilon: float) -> float:
    """x - 1 - 2 x^(1/x + (2 - eps)/2); its root is the alpha >= 2 threshold."""
    return x - 1.0 - 2.0 * x ** (1.0 / x + (2.0 - epsilon) / 2.0)


def m_equation(x: float, epsilon: float) -> float:
    """x - 1 - 2 x^(1/(x-1) + (2 - eps)/2); its root is the alpha = 1 threshold."""
    return x - 1.0 - 2.0 * x ** (1.0 / (x - 1.0) + (2.0 - epsilon) / 2.0)


def _log_gap(x: float, epsilon: float, shift: float) -> float:
    # log(x - 1) - log(2 x^e) has the sign of the equation and does not overflow
    e = 1.0 / (x - shift) + (2.0 - epsilon) / 2.0
    return math.log(x - 1.0) - math.log(2.0) - e * math.log(x)


def _check_epsilon(epsilon: float):
    if not 0.0 < epsilon < 2.0:
        raise InvalidArgument(f"epsilon must lie in (0, 2), got {epsilon}")


def _solve(epsilon: float, shift: float, cap: float) -> float:
    # On [2, inf) the log gap is strictly increasing for both equations, so
    # the first upward sign change is also the largest root.
    _check_epsilon(epsilon)
    g = lambda x: _log_gap(x, epsilon, shift)  # noqa: E731
    lo = 2.0
    if g(lo) >= 0:
        return lo
    hi = 4.0
    while g(hi) <= 0:
        lo, hi = hi, 2.0 * hi
        if hi > cap:
            raise SolverFailure(f"no sign change below cap {cap:g} for epsilon={epsilon}")
    return bisect(g, lo, hi, xtol=1e-300, rtol=1e-12, maxiter=500)


def solve_n_epsilon(epsilon: float, cap: float = ROOT_CAP) -> float:
    return _solve(epsilon, 0.0, cap)


def solve_m_epsilon(epsilon: float, cap: float = ROOT_CAP) -> float:
    return _solve(epsilon, 1.0, cap)


@dataclass(frozen=True)
class EpsilonPlan:
    """epsilon with its thresholds N, M, the prime counts below them, and k_eps.

    k_eps = k4 / 2^(5 pi(N) + 6 pi(M)); ``log_k_eps`` stays finite when
    ``k_eps`` itself underflows.
    """

    epsilon: float
    n_eps: float
    m_eps: float
    pi_n: int
    pi_m: int
    log_k_eps: float
    k_eps: float
    constants: BaseConstants


def make_epsilon_plan(epsilon: float, constants: BaseConstants | None = None) -> EpsilonPlan:
    constants = constants or BaseConstants()
    n_eps = solve_n_epsilon(epsilon)
    m_eps = solve_m_epsilon(epsilon)
    pi_n = prime_count(n_eps)
    pi_m = prime_count(m_eps)
    log_k = constants.log_k4 - (5 * pi_n + 6 * pi_m) * math.log(2.0)
    return EpsilonPlan(
        epsilon=epsilon,
        n_eps=n_eps,
        m_eps=m_eps,
        pi_n=pi_n,
        pi_m=pi_m,
        log_k_eps=log_k,
        k_eps=math.exp(log_k),
        constants=constants,
    )


def _f_exponent(q: int, alpha: int, c: Factorization) -> Fraction:
    return 2 * alpha - 1 - Fraction(2 * ec(c, q), c.phi())


def f_factor(q: int, alpha: int, c: Factorization) -> float:
    """log F(q, alpha) = (2 alpha - 1 - 2 E_c(q)/phi(c)) log q + 2 log((q-1)/2)."""
    if c.n % q or c.exponent(q) != alpha:
        raise InvalidArgument(f"{q}^{alpha} does not exactly divide {c.n}")
    return float(_f_exponent(q, alpha, c)) * math.log(q) + 2.0 * math.log((q - 1) / 2.0)


def step_lower_bound(q: int, alpha: int, epsilon: float) -> float:
    """Log of the per-prime floor: q^(2a+1-eps)/32 for alpha >= 2, q^(3-eps)/64 for alpha = 1."""
    if alpha >= 2:
        return (2 * alpha + 1 - epsilon) * math.log(q) - math.log(32.0)
    return (3 - epsilon) * math.log(q) - math.log(64.0)


@dataclass(frozen=True)
class ClassCounts:
    w1: int
    w2: int
    w3: int
    w4: int

    @property
    def total(self) -> int:
        return self.w1 + self.w2 + self.w3 + self.w4


def classify_factors(c: Factorization, plan: EpsilonPlan) -> ClassCounts:
    """Split the prime powers of c by exponent (>= 2 or 1) and by p <= [N] (resp. [M])."""
    n_floor = math.floor(plan.n_eps)
    m_floor = math.floor(plan.m_eps)
    w = [0, 0, 0, 0]
    for p, alpha in c.factors:
        if alpha >= 2:
            w[0 if p <= n_floor else 1] += 1
        else:
            w[2 if p <= m_floor else 3] += 1
    return ClassCounts(*w)


@dataclass(frozen=True)
class BoundCheck:
    log_lower: float
    log_value: float
    log_upper: float
    satisfied: bool
    margin: float

    @classmethod
    def build(cls, log_lower: float, log_value: float, log_upper: float = math.inf,
              tolerance: float = BOUND_TOLERANCE) -> BoundCheck:
        margin = min(log_value - log_lower, log_upper - log_value)
        ok = log_lower < log_value < log_upper and margin > tolerance
        return cls(log_lower, log_value, log_upper, ok, margin)


def theorem2_lower(c: Factorization, constants: BaseConstants) -> float:
    """log of k4 * prod F(q_i, alpha_i)."""
    if c.n < 3:
        raise InvalidArgument(f"c must be >= 3, got {c.n}")
    return constants.log_k4 + math.fsum(f_factor(q, a, c) for q, a in c.factors)


def theorem2_check(c: Factorization, report: GcReport, constants: BaseConstants,
                   tolerance: float = BOUND_TOLERANCE) -> BoundCheck:
    return BoundCheck.build(theorem2_lower(c, constants), report.log_geo_mean, tolerance=tolerance)


def theorem3_check(c: Factorization, plan: EpsilonPlan, report: GcReport,
                   tolerance: float = BOUND_TOLERANCE) -> BoundCheck:
    """Lower side only: log k_eps + (1 - eps) log R(c) + 2 log c against the log geometric mean."""
    lower = plan.log_k_eps + (1.0 - plan.epsilon) * math.log(c.radical()) + 2.0 * math.log(c.n)
    return BoundCheck.build(lower, report.log_geo_mean, tolerance=tolerance)


def theorem5_upper(c: Factorization, constants: BaseConstants) -> float:
    """log of k5 * k6^(3^omega) * R(c) * c^2."""
    if c.n < 3:
        raise InvalidArgument(f"c must be >= 3, got {c.n}")
    w = c.omega()
    try:
        spread = float(3**w) * constants.log_k6
    except OverflowError:
        raise BoundOverflow(f"3^omega overflows a double for omega={w}") from None
    if not math.isfinite(spread):
        raise BoundOverflow(f"3^omega * log k6 overflows for omega={w}")
    return constants.log_k5 + spread + math.log(c.radical()) + 2.0 * math.log(c.n)


def theorem5_check(c: Factorization, report: GcReport, constants: BaseConstants,
                   tolerance: float = BOUND_TOLERANCE) -> BoundCheck:
    return BoundCheck.build(-math.inf, report.log_geo_mean, theorem5_upper(c, constants), tolerance=tolerance)


def phi_square_identity(c: Factorization) -> tuple[Fraction, Fraction]:
    """(phi(c) / 2^(w-1))^2 and 4 prod q^(2a-2) ((q-1)/2)^2, exactly."""
    w = c.omega()
    left = Fraction(c.phi(), 2 ** (w - 1)) ** 2 if w else Fraction(4)
    right = Fraction(4)
    for q, a in c.factors:
        right *= Fraction(q) ** (2 * a - 2) * Fraction(q - 1, 2) ** 2
    return left, right
