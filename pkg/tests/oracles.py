"""Independent brute-force routes used to freeze and cross-check values.

Nothing here imports from radlab.
"""

import math


def trial_factor(n):
    out = []
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def trial_radical(n):
    return math.prod(p for p, _ in trial_factor(n))


def phi_count(n):
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def coprime_upto(t_floor, c):
    return sum(1 for n in range(1, t_floor + 1) if math.gcd(n, c) == 1)


def is_prime(n):
    return n >= 2 and all(n % p for p in range(2, math.isqrt(n) + 1))


def gc_bigint(c):
    """G_c as a Python integer: the product of R(abc) over coprime a < b."""
    return math.prod(trial_radical(a * (c - a) * c) for a in range(1, (c + 1) // 2) if math.gcd(a, c) == 1 and a < c - a)


def all_rows_bigint(c):
    return math.prod(trial_radical(x * (c - x) * c) for x in range(1, c // 2 + 1))
