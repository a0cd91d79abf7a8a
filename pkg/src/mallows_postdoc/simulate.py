"""Seeded Monte Carlo estimation of strategy win probabilities.

Parametric strategies never materialize permutations: under the Mallows
model the earlier-larger counts a_i are independent with
P(a_i = v) proportional to theta^v on {0..i-1}, and the play of a threshold
strategy depends on the a-sequence alone,

- trigger tests: a_i = 0 (left-to-right maximum), a_i = 1 (second maximum);
- win tracking after a pick: a later position j exceeds the picked value
  exactly when a_j <= m, where m is the number of values above the picked
  one seen so far (m = 1 after a second-maximum pick, 0 after a maximum
  pick; the pick is the second best iff m ends at 1).

Each (position, trial) consumes one uniform, tested against the CDF bins
the current state needs, which keeps the stream deterministic per seed.
Trials are processed in fixed-size chunks with child seeds spawned from the
master SeedSequence, so the merged estimate does not depend on how chunks
are distributed over workers.

Explicit strike-set strategies fall back to sampling permutations and
calling play(); that path is exact but far slower.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mallows import MallowsModel, sample_mallows
from .scalars import Scalar, is_exact
from .strategies import (
    ExplicitStrikeSet,
    Strategy,
    TwoThreshold,
    Type1ThresholdLastAccept,
    Type2Threshold,
    play,
    validate_strategy,
)

DEFAULT_CHUNK = 1 << 18

# state codes shared by the vectorized kernels
_SCAN, _TRACK0, _TRACK1, _LOST = 0, 1, 2, 3


@dataclass(frozen=True)
class MonteCarloResult:
    estimate: float
    stderr: float
    trials: int
    seed: int


def _cdf_le(i: int, m: int, theta: float) -> float:
    """P(a_i <= m) for a_i on {0..i-1} with weights theta^v."""
    if m < 0:
        return 0.0
    if m >= i - 1:
        return 1.0
    if theta == 1.0:
        return (m + 1) / i
    if theta < 1.0:
        return (1.0 - theta ** (m + 1)) / (1.0 - theta ** i)
    r = 1.0 / theta
    return r ** (i - m - 1) * (1.0 - r ** (m + 1)) / (1.0 - r ** i)


def _chunk_wins_threshold(
    n: int, theta: float, s: Strategy, size: int, rng: np.random.Generator
) -> int:
    """Wins in one chunk for a parametric strategy, via the a-code states."""
    if isinstance(s, Type2Threshold):
        k1, k2, last_accept = None, s.k, False
    elif isinstance(s, Type1ThresholdLastAccept):
        k1, k2, last_accept = s.k, None, True
    else:
        assert isinstance(s, TwoThreshold)
        k1, k2, last_accept = s.k1, s.k2, False

    start = min(x for x in (k1, k2) if x is not None) + 1
    state = np.full(size, _SCAN, dtype=np.int8)
    for i in range(start, n + 1):
        u = rng.random(size)
        f0 = _cdf_le(i, 0, theta)
        f1 = _cdf_le(i, 1, theta)
        is0 = u < f0
        is01 = u < f1
        scan = state == _SCAN
        lost = (state == _TRACK1) & is01
        promote = (state == _TRACK0) & is0
        trig1 = scan & is0 if (k1 is not None and i > k1) else False
        trig2 = scan & ~is0 & is01 if (k2 is not None and i > k2) else False
        state[lost] = _LOST
        state[promote] = _TRACK1
        if trig1 is not False:
            state[trig1] = _TRACK0
        if trig2 is not False:
            state[trig2] = _TRACK1
        if last_accept and i == n:
            # no trigger fired anywhere: accept the last candidate, which is
            # the second best exactly when a_n = 1
            state[scan & ~is0 & is01] = _TRACK1
    return int(np.count_nonzero(state == _TRACK1))


def _chunk_wins_strike_set(
    n: int, theta: float, s: ExplicitStrikeSet, size: int, rng: np.random.Generator
) -> int:
    model = MallowsModel.create(n, theta)
    wins = 0
    for _ in range(size):
        wins += play(s, sample_mallows(model, rng)).win
    return wins


def monte_carlo(
    n: int,
    theta: Scalar,
    s: Strategy,
    trials: int,
    seed: int,
    *,
    chunk: int = DEFAULT_CHUNK,
) -> MonteCarloResult:
    """Estimate the win probability of s over `trials` seeded games."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if is_exact(theta):
        raise ValueError(
            "Monte Carlo runs in float mode only; pass theta as a float "
            f"(got exact {theta!r})"
        )
    th = float(theta)
    if th <= 0.0:
        raise ValueError(f"theta must be positive, got {theta!r}")
    validate_strategy(s, n)

    n_chunks = (trials + chunk - 1) // chunk
    seeds = np.random.SeedSequence(seed).spawn(n_chunks)
    wins = 0
    done = 0
    for child in seeds:
        size = min(chunk, trials - done)
        rng = np.random.default_rng(child)
        if isinstance(s, ExplicitStrikeSet):
            wins += _chunk_wins_strike_set(n, th, s, size, rng)
        else:
            wins += _chunk_wins_threshold(n, th, s, size, rng)
        done += size

    estimate = wins / trials
    stderr = math.sqrt(estimate * (1.0 - estimate) / trials)
    return MonteCarloResult(estimate=estimate, stderr=stderr, trials=trials, seed=seed)
