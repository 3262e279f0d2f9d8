"""Closed-form worst-case test counts and expected planted-set counts.

These are the invariant oracles the test suite and harness assert
against, so everything here uses exact integer or rational arithmetic.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from math import comb

from .errors import ValidationError


def ceil_log2(n: int) -> int:
    """Smallest e with 2**e >= n, for n >= 1."""
    if n < 1:
        raise ValidationError("ceil_log2 requires n >= 1")
    return (n - 1).bit_length()


def sight_max_tests(a0: int, k_min: int, k_max: int) -> int:
    """Worst-case total tests for one deterministic-sampler run."""
    if a0 < 2:
        raise ValidationError("a0 must be at least 2")
    if not 2 <= k_min <= k_max:
        raise ValidationError("need 2 <= k_min <= k_max")
    subsets = sum(comb(k_max, j) for j in range(k_min, k_max + 1))
    return k_max * ceil_log2(a0) + subsets + 1


def sight_max_positive(a0: int, k_max: int) -> int:
    """Worst-case positive tests before the final minimality search."""
    if a0 < 2:
        raise ValidationError("a0 must be at least 2")
    if k_max < 1:
        raise ValidationError("k_max must be positive")
    return k_max * ceil_log2(a0)


def rc_max_tests(
    schedule: Sequence[int], t_max: int, k_min: int, k_max: int
) -> int:
    """Worst-case total tests for one stochastic-sampler run."""
    if not schedule:
        raise ValidationError("schedule must be nonempty")
    if t_max < 1:
        raise ValidationError("t_max must be at least 1")
    a_final = schedule[-1]
    subsets = sum(comb(a_final, k) for k in range(k_min, k_max + 1))
    return 1 + (len(schedule) - 1) * t_max + subsets


def rc_max_positive(schedule_length: int) -> int:
    """Worst-case positive tests for one stochastic-sampler run."""
    if schedule_length < 1:
        raise ValidationError("schedule length must be at least 1")
    return schedule_length + 1


def expected_planted_count(n: int, m: int, k: int, omega_k: int) -> Fraction:
    """Expected number of planted k-sets inside a uniform m-subset.

    Equals C(m,k)/C(n,k) * omega_k, exactly.
    """
    if not 0 <= m <= n:
        raise ValidationError("need 0 <= m <= n")
    if k < 1 or omega_k < 0:
        raise ValidationError("need k >= 1 and omega_k >= 0")
    if k > n:
        raise ValidationError("k cannot exceed the universe size")
    return Fraction(comb(m, k), comb(n, k)) * omega_k


def ratio_monotone_check(
    n: int, m: int, c: int, k: int, omega_k: int, omega_k1: int
) -> bool:
    """Expected (k+1):k planted-count ratio grows strictly with subset size.

    True for every valid input: the ratio at subset size m is strictly
    below the ratio at size m+c whenever both counts are positive.
    """
    if c < 1:
        raise ValidationError("c must be positive")
    if not k + 1 <= m or not m + c <= n:
        raise ValidationError("need k+1 <= m and m+c <= n")
    if omega_k < 1 or omega_k1 < 1:
        raise ValidationError("both set counts must be positive")
    ratio_small = expected_planted_count(n, m, k + 1, omega_k1) / expected_planted_count(
        n, m, k, omega_k
    )
    ratio_large = expected_planted_count(
        n, m + c, k + 1, omega_k1
    ) / expected_planted_count(n, m + c, k, omega_k)
    return ratio_small < ratio_large
