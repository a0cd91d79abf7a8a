"""Shared helpers: cached S_n enumeration and independent brute-force scanners.

The scanners re-derive strategy behavior directly from the definitions
(earlier-larger counts), independent of the package's play/oracle code, so
the cross-checks pin two separate derivations against each other.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations

THETA_GRID = (Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2))


@lru_cache(maxsize=None)
def all_perms(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(permutations(range(1, n + 1)))


def ref_inversions(p) -> int:
    n = len(p)
    return sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])


def ref_weight(p, theta):
    return theta ** ref_inversions(p)


def earlier_larger(p, i) -> int:
    """Number of positions before 1-based i holding a larger value."""
    return sum(1 for j in range(i - 1) if p[j] > p[i - 1])


def first_pick_type2(p, k):
    """First 1-based position > k that is a left-to-right second maximum."""
    for i in range(k + 1, len(p) + 1):
        if earlier_larger(p, i) == 1:
            return i
    return None


def first_pick_type1(p, k):
    """First 1-based position > k that is a left-to-right maximum."""
    for i in range(k + 1, len(p) + 1):
        if earlier_larger(p, i) == 0:
            return i
    return None


def first_pick_two(p, k1, k2):
    for i in range(1, len(p) + 1):
        a = earlier_larger(p, i)
        if (i > k1 and a == 0) or (i > k2 and a == 1):
            return i
    return None


def weighted_sum(n, theta, predicate):
    return sum(ref_weight(p, theta) for p in all_perms(n) if predicate(p))
