"""Permutations, the inversion statistic, prefix patterns, and the prefix operator.

Conventions used throughout the package:

- A permutation is a tuple of the distinct values 1..n in one-line notation.
  Position is 1-based interview order; value is candidate quality with n the
  best candidate and n-1 the second best (the one we want to stop on).
- The prefix pattern of length k is the relabelling of the first k entries by
  relative order, e.g. the length-4 pattern of (1,6,5,2,4,3) is (1,4,3,2).
- Position i is a left-to-right maximum when no earlier value is larger, and
  a left-to-right second maximum when exactly one earlier value is larger.
  Position 1 is a maximum and never a second maximum.

A pattern of length k < n is classified TYPE_I when it ends in its maximum,
TYPE_II when it ends in its second maximum; full-length patterns are
FULL_LENGTH regardless of their last entry; everything else is OTHER.
"""

from __future__ import annotations

from bisect import bisect_left, insort
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence


class PrefixClass(Enum):
    TYPE_I = "type-I"
    TYPE_II = "type-II"
    OTHER = "other"
    FULL_LENGTH = "full-length"


def check_permutation(p: Sequence[int]) -> None:
    """Raise ValueError unless p is a bijection on {1..n} with n >= 1."""
    n = len(p)
    if n < 1:
        raise ValueError("permutation must have length >= 1")
    if sorted(p) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {tuple(p)}")


def inversions(p: Sequence[int]) -> int:
    """Number of pairs i < j with p_i > p_j.

    Equals the minimum number of adjacent transpositions sorting p
    (the Kendall statistic).

    >>> inversions((1, 2, 3))
    0
    >>> inversions((3, 2, 1))
    3
    >>> inversions((1, 6, 5, 2, 4, 3))
    8
    """
    n = len(p)
    return sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])


def pattern_of(values: Sequence[int]) -> tuple[int, ...]:
    """Relabel values by relative order onto 1..k.

    >>> pattern_of((1, 6, 5, 2))
    (1, 4, 3, 2)
    """
    order = sorted(values)
    return tuple(bisect_left(order, v) + 1 for v in values)


def prefix_patterns(p: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Yield the pattern of p|_k for k = 1..n, incrementally.

    Appending value v to a prefix whose new relative rank is r shifts every
    existing pattern entry >= r up by one, so the whole chain costs O(n^2).
    """
    pat: tuple[int, ...] = ()
    seen: list[int] = []
    for v in p:
        r = bisect_left(seen, v) + 1
        insort(seen, v)
        pat = tuple(x if x < r else x + 1 for x in pat) + (r,)
        yield pat


def classify_pattern(pattern: Sequence[int], host_length: int) -> PrefixClass:
    k = len(pattern)
    if k == host_length:
        return PrefixClass.FULL_LENGTH
    last = pattern[-1]
    if last == k:
        return PrefixClass.TYPE_I
    if last == k - 1:
        return PrefixClass.TYPE_II
    return PrefixClass.OTHER


@dataclass(frozen=True)
class Prefix:
    """A relabelled game position: the first k interview ranks plus context."""

    pattern: tuple[int, ...]
    host_length: int
    kind: PrefixClass

    def __post_init__(self) -> None:
        check_permutation(self.pattern)
        if not 1 <= len(self.pattern) <= self.host_length:
            raise ValueError(
                f"pattern length {len(self.pattern)} outside 1..{self.host_length}"
            )
        expected = classify_pattern(self.pattern, self.host_length)
        if self.kind is not expected:
            raise ValueError(
                f"pattern {self.pattern} in a host of length {self.host_length} "
                f"is {expected.value}, not {self.kind.value}"
            )

    @property
    def length(self) -> int:
        return len(self.pattern)


def prefix_pattern(p: Sequence[int], k: int) -> Prefix:
    """The k-th prefix of p as a classified Prefix.

    >>> prefix_pattern((1, 6, 5, 2, 4, 3), 4).pattern
    (1, 4, 3, 2)
    >>> prefix_pattern((1, 6, 5, 2, 4, 3), 6).kind
    <PrefixClass.FULL_LENGTH: 'full-length'>
    """
    n = len(p)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside 1..{n}")
    pat = pattern_of(p[:k])
    return Prefix(pattern=pat, host_length=n, kind=classify_pattern(pat, n))


def apply_prefix_operator(tau: Sequence[int], p: Sequence[int]) -> tuple[int, ...]:
    """Rearrange the first k entries of p so their relative order equals tau.

    Entries beyond k are untouched. Applying the pattern of the original
    prefix afterwards restores p (the operator is a bijection).

    >>> apply_prefix_operator((2, 1), (2, 3, 1))
    (3, 2, 1)
    >>> apply_prefix_operator((1, 2), (2, 3, 1))
    (2, 3, 1)
    """
    k = len(tau)
    if k > len(p):
        raise ValueError(f"operator length {k} exceeds permutation length {len(p)}")
    check_permutation(tau)
    head = sorted(p[:k])
    return tuple(head[r - 1] for r in tau) + tuple(p[k:])


def earlier_larger_counts(p: Sequence[int]) -> tuple[int, ...]:
    """a_i = number of positions j < i with p_j > p_i, for each i.

    The counts determine p (sequential-rank code), sum to inversions(p), and
    classify positions: a_i = 0 is a left-to-right maximum, a_i = 1 a
    left-to-right second maximum.
    """
    out = []
    for i, v in enumerate(p):
        out.append(sum(1 for j in range(i) if p[j] > v))
    return tuple(out)


def is_ltr_maximum(p: Sequence[int], i: int) -> bool:
    """Is 1-based position i a left-to-right maximum of p?"""
    v = p[i - 1]
    return all(p[j] < v for j in range(i - 1))


def is_ltr_second_maximum(p: Sequence[int], i: int) -> bool:
    """Is 1-based position i a left-to-right second maximum of p?"""
    v = p[i - 1]
    return sum(1 for j in range(i - 1) if p[j] > v) == 1
