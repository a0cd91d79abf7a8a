"""Stopping strategies: execution on permutations and exact win probabilities.

Strategy variants (all frozen, hashable):

- Type2Threshold(k): reject the first k candidates, accept the next
  left-to-right second maximum; no pick at all if none appears (if the last
  candidate is the second best it *is* a second maximum there, so no forced
  acceptance is ever needed for the win accounting).
- Type1ThresholdLastAccept(k): reject the first k, accept the next
  left-to-right maximum, and accept the last candidate when nothing fired.
- TwoThreshold(k1, k2): accept the first position that is a left-to-right
  maximum after k1 or a left-to-right second maximum after k2.
- ExplicitStrikeSet: accept at the first position whose prefix pattern is a
  member; no member reached means no pick.

oracle_exact evaluates a strategy by exhaustive weighted enumeration, the
package's independent test oracle. Enumeration is cached per (n, strategy)
as a histogram of inversion counts, so repeated theta evaluations are cheap
and exact in rational mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations as iter_permutations
from typing import Union

from .engine import DEFAULT_TREE_LIMIT, StrikeSet
from .permutations import earlier_larger_counts, pattern_of, prefix_patterns
from .qpoly import p_factorial
from .scalars import Scalar

DEFAULT_ORACLE_LIMIT = 10


@dataclass(frozen=True)
class Type2Threshold:
    k: int


@dataclass(frozen=True)
class Type1ThresholdLastAccept:
    k: int


@dataclass(frozen=True)
class TwoThreshold:
    k1: int
    k2: int


@dataclass(frozen=True)
class ExplicitStrikeSet:
    strike_set: StrikeSet


Strategy = Union[Type2Threshold, Type1ThresholdLastAccept, TwoThreshold, ExplicitStrikeSet]


@dataclass(frozen=True)
class PlayOutcome:
    picked_position: int | None
    picked_value: int | None
    win: bool


def _check_sizes(s: Strategy, n: int) -> None:
    """Cheap strategy/size pairing checks, run on every play."""
    if isinstance(s, Type2Threshold) or isinstance(s, Type1ThresholdLastAccept):
        if not 0 <= s.k <= n - 1:
            raise ValueError(
                f"{type(s).__name__} needs 0 <= k <= n-1, got k={s.k}, n={n}"
            )
    elif isinstance(s, TwoThreshold):
        if not 1 <= s.k1 <= s.k2 <= n - 2:
            raise ValueError(
                f"TwoThreshold needs 1 <= k1 <= k2 <= n-2, got ({s.k1}, {s.k2}), n={n}"
            )
    elif isinstance(s, ExplicitStrikeSet):
        if s.strike_set.host_length != n:
            raise ValueError(
                f"strike set built for n={s.strike_set.host_length}, game has n={n}"
            )
    else:
        raise TypeError(f"unknown strategy {s!r}")


def validate_strategy(s: Strategy, n: int) -> None:
    """Size checks plus, for explicit strike sets, full member validation."""
    _check_sizes(s, n)
    if isinstance(s, ExplicitStrikeSet):
        s.strike_set.validate()


def play(s: Strategy, p: tuple[int, ...]) -> PlayOutcome:
    """Run strategy s on interview order p, left to right."""
    n = len(p)
    _check_sizes(s, n)
    pick: int | None = None

    if isinstance(s, ExplicitStrikeSet):
        members = s.strike_set.patterns
        for i, pat in enumerate(prefix_patterns(p), start=1):
            if pat in members:
                pick = i
                break
    else:
        a = earlier_larger_counts(p)
        if isinstance(s, Type2Threshold):
            for i in range(s.k + 1, n + 1):
                if a[i - 1] == 1:
                    pick = i
                    break
        elif isinstance(s, Type1ThresholdLastAccept):
            for i in range(s.k + 1, n + 1):
                if a[i - 1] == 0:
                    pick = i
                    break
            if pick is None:
                pick = n
        else:
            for i in range(1, n + 1):
                if (i > s.k1 and a[i - 1] == 0) or (i > s.k2 and a[i - 1] == 1):
                    pick = i
                    break

    if pick is None:
        return PlayOutcome(picked_position=None, picked_value=None, win=False)
    value = p[pick - 1]
    return PlayOutcome(picked_position=pick, picked_value=value, win=value == n - 1)


@lru_cache(maxsize=4096)
def _histograms(n: int, s: Strategy) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(win, no-pick) histograms of inversion counts over S_n under s."""
    max_inv = n * (n - 1) // 2
    wins = [0] * (max_inv + 1)
    nopick = [0] * (max_inv + 1)
    for p in iter_permutations(range(1, n + 1)):
        out = play(s, p)
        if out.win or out.picked_position is None:
            c = sum(earlier_larger_counts(p))
            if out.win:
                wins[c] += 1
            else:
                nopick[c] += 1
    return tuple(wins), tuple(nopick)


def _weigh(hist: tuple[int, ...], theta: Scalar) -> Scalar:
    total = 0 * theta
    power = theta ** 0
    for count in hist:
        if count:
            total = total + count * power
        power = power * theta
    return total


def win_weight(n: int, theta: Scalar, s: Strategy) -> Scalar:
    """Total theta^inversions weight of the permutations s wins on."""
    validate_strategy(s, n)
    return _weigh(_histograms(n, s)[0], theta)


def no_pick_weight(n: int, theta: Scalar, s: Strategy) -> Scalar:
    """Total weight of the permutations on which s never picks."""
    validate_strategy(s, n)
    return _weigh(_histograms(n, s)[1], theta)


def oracle_exact(
    n: int, theta: Scalar, s: Strategy, *, limit: int = DEFAULT_ORACLE_LIMIT
) -> Scalar:
    """Win probability of s by exhaustive weighted enumeration of S_n."""
    if not 1 <= n <= limit:
        raise ValueError(f"oracle_exact needs 1 <= n <= {limit}, got n={n}")
    return win_weight(n, theta, s) / p_factorial(n, theta)


def strategy_to_strike_set(
    s: Strategy, n: int, *, limit: int = DEFAULT_TREE_LIMIT
) -> StrikeSet:
    """Materialize the minimal prefix set with the same acceptance behavior.

    Acceptance positions of a parametric strategy depend only on the prefix
    pattern seen so far, so collecting the accepting pattern of every
    permutation (full-length pattern when no pick happens) yields a minimal
    set reproducing play(s, .) exactly on S_n; no-pick permutations map to
    full-length members whose acceptance is equivalent to losing.
    """
    if not 1 <= n <= limit:
        raise ValueError(f"strike-set materialization needs n <= {limit}, got {n}")
    validate_strategy(s, n)
    members: set[tuple[int, ...]] = set()
    for p in iter_permutations(range(1, n + 1)):
        out = play(s, p)
        pick = out.picked_position if out.picked_position is not None else n
        members.add(pattern_of(p[:pick]))
    strike = StrikeSet(frozenset(members), n)
    strike.validate(require_complete=True)
    return strike
