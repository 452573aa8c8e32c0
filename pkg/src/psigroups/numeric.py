"""Exact integer and rational helpers.

Python integers are already arbitrary precision and :class:`fractions.Fraction`
is always reduced with a positive denominator, so ``ExactRational`` is simply
``Fraction``.  What lives here is factorization and a couple of formatting
helpers that every other module relies on.
"""

from __future__ import annotations

import decimal
import math
from fractions import Fraction

from psigroups import config
from psigroups.errors import ResourceLimitError

ExactRational = Fraction
Factorization = list[tuple[int, int]]

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the witness set is exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int, bound: int | None = None) -> Factorization:
    """Ascending prime-power decomposition by trial division.

    >>> factorize(60)
    [(2, 2), (3, 1), (5, 1)]
    """
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    bound = config.LIMITS.factor_bound if bound is None else bound
    if n > bound:
        raise ResourceLimitError(f"{n} exceeds the factorization bound {bound}")
    pairs: Factorization = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            pairs.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        pairs.append((n, 1))
    return pairs


def expand(pairs: Factorization) -> int:
    return math.prod(p**e for p, e in pairs)


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def p_part(n: int, p: int) -> int:
    """Largest power of ``p`` dividing ``n``."""
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def pi_part(n: int, primes) -> int:
    return math.prod(p_part(n, p) for p in set(primes))


def is_prime_power(n: int) -> bool:
    return n > 1 and len(factorize(n)) == 1


def multiplicative_order(r: int, p: int) -> int:
    if math.gcd(r, p) != 1:
        raise ValueError(f"{r} is not a unit mod {p}")
    k, x = 1, r % p
    while x != 1 % p:
        x = x * r % p
        k += 1
    return k


def rational(num: int, den: int) -> Fraction:
    """Reduced fraction with positive denominator; rejects a zero denominator."""
    if den == 0:
        raise ValueError("rational with zero denominator")
    return Fraction(num, den)


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def decimal6(q: Fraction) -> str:
    """Six-digit display rendering, round-half-even."""
    ctx = decimal.Context(prec=60, rounding=decimal.ROUND_HALF_EVEN)
    value = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    return str(value.quantize(decimal.Decimal("0.000001"), context=ctx))
