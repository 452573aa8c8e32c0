import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from psigroups import config
from psigroups.errors import ResourceLimitError
from psigroups.numeric import (
    decimal6,
    expand,
    factorize,
    format_fraction,
    is_prime,
    is_prime_power,
    multiplicative_order,
    p_part,
    pi_part,
    prime_divisors,
    rational,
)


def trial_prime(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def test_is_prime_matches_trial_division():
    assert [n for n in range(200) if is_prime(n)] == [n for n in range(200) if trial_prime(n)]


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


@given(st.integers(1, 10**9))
def test_factorize_round_trip(n):
    f = factorize(n)
    assert expand(f) == n
    assert all(is_prime(p) and e >= 1 for p, e in f)
    assert [p for p, _ in f] == sorted({p for p, _ in f})


def test_factorize_examples():
    assert factorize(1) == []
    assert factorize(60) == [(2, 2), (3, 1), (5, 1)]
    assert factorize(1617) == [(3, 1), (7, 2), (11, 1)]
    assert prime_divisors(903) == [3, 7, 43]


def test_factorize_errors():
    with pytest.raises(ValueError):
        factorize(0)
    with pytest.raises(ResourceLimitError):
        factorize(10**6, bound=1000)
    with config.override(factor_bound=100):
        with pytest.raises(ResourceLimitError):
            factorize(101)


def test_parts():
    assert p_part(48, 2) == 16
    assert p_part(48, 5) == 1
    assert pi_part(360, [2, 5]) == 40
    assert is_prime_power(27) and not is_prime_power(1) and not is_prime_power(12)


def test_multiplicative_order():
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(-1, 5) == 2
    with pytest.raises(ValueError):
        multiplicative_order(2, 4)


def test_rational_and_format():
    assert rational(38, 86) == Fraction(19, 43)
    assert rational(3, -6) == Fraction(-1, 2)
    with pytest.raises(ValueError):
        rational(1, 0)
    assert format_fraction(Fraction(19, 43)) == "19/43"
    assert format_fraction(Fraction(1)) == "1"


def test_decimal6():
    assert decimal6(Fraction(19, 43)) == "0.441860"
    assert decimal6(Fraction(27, 43)) == "0.627907"
    assert decimal6(Fraction(1)) == "1.000000"
    # exact ties go to the even digit
    assert decimal6(Fraction(5, 10**7)) == "0.000000"
    assert decimal6(Fraction(15, 10**7)) == "0.000002"
