"""Exact optimal-strategy computation.

Two routes to the same answer:

- tree_dp: the full prefix-tree dynamic program. Every prefix pattern sigma
  gets its standard denominator D(sigma) (total weight of sigma-prefixed
  permutations) and win numerator Q(sigma) (weight of those whose current
  candidate is the second best) by one weighted enumeration of S_n; the
  continuation numerators Q_o combine children bottom-up with the
  mediant-style sum (a/b) (+) (c/d) = (a+c)/(b+d), which is just numerator
  and denominator addition at matched denominators. A prefix is positive
  when Q >= Q_o; the accept-on-first-positive walk of the tree produces the
  optimal strike set. Exact but O(n! n) work, so capped at a small n.

- level_recurrence: the four-sequence recurrence on canonical-prefix
  numerators q1/q2 (win now, type I / type II last position) and q1o/q2o
  (best continuation), filled from length n downward. Linear work per level,
  so it scales to large n; in float mode each level is rescaled by its
  maximum (the recurrence is linear and homogeneous level-to-level, so
  positivity per level is unaffected) and the scale factors are kept so
  absolute values can be recovered in log space.

positivity_thresholds scans a level table for the largest strictly negative
length per prefix type; equalities within tolerance are reported as ties
(indifference), and any negative-above-positive pattern is reported as a
violation rather than silently reordered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations as iter_permutations
from typing import Iterable, Literal, NamedTuple

from .permutations import (
    PrefixClass,
    classify_pattern,
    inversions,
    pattern_of,
    prefix_patterns,
)
from .qpoly import log_p_factorial, qpoly_for
from .scalars import REL_TOL, Scalar, compare, is_exact

DEFAULT_TREE_LIMIT = 8

# Marker used in ThresholdReport when every length below n is negative.
ALL_NEGATIVE_BELOW_N = "all-negative-below-N"


class StrikeSetError(ValueError):
    pass


def _pattern_children(pat: tuple[int, ...]) -> list[tuple[int, ...]]:
    k = len(pat)
    return [
        tuple(x if x < r else x + 1 for x in pat) + (r,) for r in range(1, k + 2)
    ]


@dataclass(frozen=True)
class StrikeSet:
    """A set of prefix patterns that trigger acceptance in an n-candidate game."""

    patterns: frozenset[tuple[int, ...]]
    host_length: int

    def members_by_length(self) -> dict[int, set[tuple[int, ...]]]:
        out: dict[int, set[tuple[int, ...]]] = {}
        for pat in self.patterns:
            out.setdefault(len(pat), set()).add(pat)
        return out

    def validate(self, *, require_complete: bool = False) -> None:
        """Check eligibility and minimality; optionally full completeness.

        Eligible: every member ends in its maximum or second maximum, or has
        full length. Minimal: no member's pattern-prefix is another member.
        Complete: every permutation of S_n meets some member (exhaustive
        check; exponential in n).
        """
        n = self.host_length
        for pat in self.patterns:
            if sorted(pat) != list(range(1, len(pat) + 1)):
                raise StrikeSetError(f"not a pattern: {pat}")
            if len(pat) > n:
                raise StrikeSetError(f"pattern {pat} longer than host {n}")
            if classify_pattern(pat, n) is PrefixClass.OTHER:
                raise StrikeSetError(f"ineligible pattern {pat}")
        for pat in self.patterns:
            sub: tuple[int, ...] = ()
            for j in range(len(pat) - 1):
                sub = pattern_of(pat[: j + 1])
                if sub in self.patterns:
                    raise StrikeSetError(f"{sub} is a prefix of member {pat}")
        if require_complete and not self.is_complete():
            raise StrikeSetError("strike set does not cover every permutation")

    def is_complete(self) -> bool:
        """Does every permutation of S_n contain a member as a prefix?"""
        return not self._uncovered_leaves(stop_early=True)

    def completed(self) -> "StrikeSet":
        """Add the full-length patterns of uncovered permutations.

        The additions are exactly the losing leaves the accept-on-tie walk
        admits vacuously, so the completion changes no winning behavior.
        """
        extra = self._uncovered_leaves(stop_early=False)
        return StrikeSet(self.patterns | extra, self.host_length)

    def _uncovered_leaves(self, *, stop_early: bool) -> set[tuple[int, ...]]:
        n = self.host_length
        uncovered: set[tuple[int, ...]] = set()
        stack: list[tuple[int, ...]] = [(1,)]
        while stack:
            pat = stack.pop()
            if pat in self.patterns:
                continue
            if len(pat) == n:
                uncovered.add(pat)
                if stop_early:
                    return uncovered
                continue
            stack.extend(_pattern_children(pat))
        return uncovered


class QPair(NamedTuple):
    q: Scalar
    qo: Scalar


@dataclass(frozen=True)
class TreeSolution:
    n: int
    theta: Scalar
    strike_set: StrikeSet
    win_probability: Scalar
    table: dict[tuple[int, ...], QPair]


def tree_dp(n: int, theta: Scalar, *, limit: int = DEFAULT_TREE_LIMIT) -> TreeSolution:
    """Solve the n-candidate game exactly over the full prefix tree.

    Returns the optimal strike set (positive prefixes reached first by the
    accept-on-tie walk, omitting full-length members that cannot win, as in
    the worked 4-candidate example), the overall win probability, and the
    per-prefix table of (Q, Q_o) ratios.
    """
    if not 1 <= n <= limit:
        raise ValueError(f"tree_dp needs 1 <= n <= {limit} (got n={n}); the "
                         "prefix tree has sum(i!) nodes")
    if float(theta) <= 0.0:
        raise ValueError(f"theta must be positive, got {theta!r}")

    zero = 0 * theta
    max_inv = n * (n - 1) // 2
    weight = [theta ** c for c in range(max_inv + 1)]

    den: dict[tuple[int, ...], Scalar] = {}
    win: dict[tuple[int, ...], Scalar] = {}
    for p in iter_permutations(range(1, n + 1)):
        w = weight[inversions(p)]
        for k, pat in enumerate(prefix_patterns(p), start=1):
            den[pat] = den.get(pat, zero) + w
            if p[k - 1] == n - 1:
                win[pat] = win.get(pat, zero) + w

    qo: dict[tuple[int, ...], Scalar] = {}
    by_length: dict[int, list[tuple[int, ...]]] = {}
    for pat in den:
        by_length.setdefault(len(pat), []).append(pat)
    for pat in by_length[n]:
        qo[pat] = zero
    for k in range(n - 1, 0, -1):
        for pat in by_length[k]:
            total = zero
            for child in _pattern_children(pat):
                total = total + max(win.get(child, zero), qo[child])
            qo[pat] = total

    accepted: set[tuple[int, ...]] = set()
    stack: list[tuple[int, ...]] = [(1,)]
    while stack:
        pat = stack.pop()
        q = win.get(pat, zero)
        if compare(q, qo[pat]) >= 0:
            # Vacuous full-length ties (Q = Q_o = 0) cannot win and are left
            # out of the reported set; completed() restores them.
            if len(pat) < n or compare(q, zero) > 0:
                accepted.add(pat)
        else:
            stack.extend(_pattern_children(pat))

    root = (1,)
    win_probability = max(win.get(root, zero), qo[root]) / den[root]
    table = {
        pat: QPair(win.get(pat, zero) / den[pat], qo[pat] / den[pat]) for pat in den
    }
    return TreeSolution(
        n=n,
        theta=theta,
        strike_set=StrikeSet(frozenset(accepted), n),
        win_probability=win_probability,
        table=table,
    )


# ---------------------------------------------------------------------------
# Level recurrences


@dataclass
class QLevelTable:
    """Per-length numerators over the standard denominator.

    q1/q2 are the win-now numerators of the canonical type I / type II
    prefix of each length; q1o/q2o the best-continuation numerators. In
    float mode entry k has been divided by level_scale[k]; within-level
    comparisons are unaffected. Index 0 is unused padding.

    In limit mode (theta < 1, lengths counted from the end) index k stands
    for distance n - k below the boundary, with index n the boundary itself.
    """

    n: int
    theta: Scalar
    mode: Literal["finite", "limit"]
    q1: list[Scalar]
    q2: list[Scalar]
    q1o: list[Scalar]
    q2o: list[Scalar]
    level_scale: list[Scalar] = field(repr=False)

    def qbar1(self, k: int) -> Scalar:
        return max(self.q1[k], self.q1o[k])

    def qbar2(self, k: int) -> Scalar:
        return max(self.q2[k], self.q2o[k])

    def log_restore(self, k: int) -> float:
        """ln of the factor restoring stored level-k values to true scale."""
        return sum(math.log(float(s)) for s in self.level_scale[k:])

    def win_probability(self) -> Scalar:
        """max(Q, Q_o) of the root prefix over (P_n)!; finite mode only."""
        if self.mode != "finite":
            raise ValueError("win probability is defined for finite mode only")
        top = max(self.q1[1], self.q1o[1])
        if is_exact(self.theta):
            return top / qpoly_for(self.theta).p_factorial(self.n)
        if top <= 0.0:
            return 0.0
        log_value = (
            math.log(float(top))
            + self.log_restore(1)
            - log_p_factorial(self.n, float(self.theta))
        )
        return math.exp(log_value)


def level_recurrence(
    n: int, theta: Scalar, mode: Literal["finite", "limit"] = "finite"
) -> QLevelTable:
    """Fill the four numerator sequences from length n down to 1.

    Finite mode implements the exact level-to-level relations for any
    theta > 0. Limit mode replaces the power sums by their k -> infinity
    limits theta/(1-theta) and theta^2/(1-theta), valid for 0 < theta < 1,
    with index n playing the role of the boundary (distance 0 from the end).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if float(theta) <= 0.0:
        raise ValueError(f"theta must be positive, got {theta!r}")
    if mode not in ("finite", "limit"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "limit" and float(theta) >= 1.0:
        raise ValueError(f"limit mode needs 0 < theta < 1, got {theta!r}")

    exact = is_exact(theta)
    one = theta ** 0
    zero = 0 * theta

    if mode == "limit":
        s1_coeff = theta / (one - theta)
        s2_coeff = theta * theta / (one - theta)
        s1 = lambda k: s1_coeff
        s2 = lambda k: s2_coeff
    else:
        powers = [theta ** e for e in range(max(n, 1))]
        cum = [zero] * (n + 1)  # cum[e] = theta + ... + theta^(e), e >= 1
        for e in range(1, n):
            cum[e] = cum[e - 1] + powers[e]
        s1 = lambda k: cum[k - 1]
        s2 = lambda k: cum[k - 1] - powers[1] if k >= 2 else zero

    q1 = [zero] * (n + 1)
    q2 = [zero] * (n + 1)
    q1o = [zero] * (n + 1)
    q2o = [zero] * (n + 1)
    scale = [one] * (n + 1)

    q2[n] = theta
    for k in range(n, 1, -1):
        b1 = max(q1[k], q1o[k])
        b2 = max(q2[k], q2o[k])
        nxt_q1o = b1 + b2 + q1o[k] * s2(k)
        nxt_q1 = q1[k] * s1(k) + q2[k] / theta
        nxt_q2o = theta * (b1 + b2) + q2o[k] * s2(k)
        nxt_q2 = q2[k] * s2(k)
        if not exact:
            m = max(nxt_q1, nxt_q2, nxt_q1o, nxt_q2o)
            if not math.isfinite(m):
                raise OverflowError(
                    f"level recurrence overflowed at length {k - 1}; "
                    "use exact mode or a smaller n/theta"
                )
            if m > 0.0:
                nxt_q1, nxt_q2 = nxt_q1 / m, nxt_q2 / m
                nxt_q1o, nxt_q2o = nxt_q1o / m, nxt_q2o / m
                scale[k - 1] = m
        q1[k - 1], q2[k - 1] = nxt_q1, nxt_q2
        q1o[k - 1], q2o[k - 1] = nxt_q1o, nxt_q2o

    return QLevelTable(
        n=n, theta=theta, mode=mode, q1=q1, q2=q2, q1o=q1o, q2o=q2o, level_scale=scale
    )


# ---------------------------------------------------------------------------
# Thresholds


@dataclass(frozen=True)
class ThresholdReport:
    """Largest negative length per prefix type, with ties and anomalies.

    k1/k2 are 0 when no length is negative and the string marker
    ALL_NEGATIVE_BELOW_N when every scanned length (1..n-1 for type I,
    2..n-1 for type II) is negative. ties lists (type, length) pairs where
    Q = Q_o within tolerance; violations lists any negative length above a
    positive one (never expected; reported instead of assumed away).
    """

    n: int
    theta: Scalar
    k1: int | str
    k2: int | str
    ties: tuple[tuple[int, int], ...]
    violations: tuple[str, ...] = ()

    def k2_numeric(self) -> int:
        return self.n - 1 if self.k2 == ALL_NEGATIVE_BELOW_N else int(self.k2)

    def k1_numeric(self) -> int:
        return self.n - 1 if self.k1 == ALL_NEGATIVE_BELOW_N else int(self.k1)


def positivity_thresholds(
    n: int, theta: Scalar, *, rel: float = REL_TOL, table: QLevelTable | None = None
) -> ThresholdReport:
    """Scan a finite-mode level table for the per-type positivity thresholds."""
    if table is None:
        table = level_recurrence(n, theta, "finite")
    elif table.mode != "finite":
        raise ValueError("positivity thresholds need a finite-mode table")

    ties: list[tuple[int, int]] = []
    violations: list[str] = []
    results: dict[int, int | str] = {}
    for ptype, first_k, qs, qos in (
        (1, 1, table.q1, table.q1o),
        (2, 2, table.q2, table.q2o),
    ):
        negatives: list[int] = []
        positives: list[int] = []
        for k in range(first_k, n):
            c = compare(qs[k], qos[k], rel=rel)
            if c == 0:
                ties.append((ptype, k))
            elif c < 0:
                negatives.append(k)
            else:
                positives.append(k)
        if negatives and positives and max(negatives) > min(positives):
            violations.append(
                f"type {ptype}: negative length {max(negatives)} above "
                f"positive length {min(positives)}"
            )
        if negatives and not positives and len(negatives) == n - first_k:
            results[ptype] = ALL_NEGATIVE_BELOW_N
        else:
            results[ptype] = max(negatives) if negatives else 0

    return ThresholdReport(
        n=n,
        theta=theta,
        k1=results[1],
        k2=results[2],
        ties=tuple(ties),
        violations=tuple(violations),
    )
