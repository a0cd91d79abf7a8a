"""Regime dispatch over theta and threshold optimization.

Five regimes, keyed on theta (exact equality in rational mode, a 1e-12
window in float mode):

- ThetaGt1 (theta > 1): single second-maximum threshold k; the win ratio is
  maximized over k. Published reference values for this regime correspond to
  the finite-horizon ratio at N = 500 (the true limit differs in the 5th
  decimal near theta = 1.01 and even shifts the argmax), so the optimizer
  evaluates at that horizon by default.
- ThetaEq1: the classical uniform case, probability 1/4, midpoint rule.
- ThetaMid (1/2 < theta < 1): two thresholds counted from the end,
  x = N - k1 and y = N - k2, optimized by brute force over a grid.
- ThetaEqHalf: reject all but the last three candidates with the indifference
  pattern of the half-point analysis; probability 3/8.
- ThetaSmall (0 < theta < 1/2): reject all but the last two, accept the next
  maximum, else the last candidate; probability (1-theta)(1-theta+theta^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .closedform import (
    asymptotic_f,
    case31_value,
    threshold_roots,
    w2_asymptotic_ratio,
    w2_win_ratio,
)
from .scalars import REL_TOL, Scalar, is_exact, to_float

GT1_HORIZON = 500


class Gt1Optimum(NamedTuple):
    k: int
    p: float


class MidOptimum(NamedTuple):
    x: int
    y: int
    p: float


class SmallOptimum(NamedTuple):
    x: int
    p: Scalar


@dataclass(frozen=True)
class AsymptoticStrategy:
    """A stopping rule description with thresholds, JSON-friendly."""

    kind: str
    params: tuple[tuple[str, int], ...]
    description: str


@dataclass(frozen=True)
class RegimeResult:
    regime: str
    strategy: AsymptoticStrategy
    win_probability: Scalar
    indifference_notes: tuple[str, ...]


def optimize_gt1(
    theta: Scalar, k_max: int = 200, *, horizon: int | None = GT1_HORIZON
) -> Gt1Optimum:
    """Best second-maximum threshold for theta > 1.

    horizon=None maximizes the true N -> infinity ratio; the default horizon
    reproduces the published table. Ties resolve to the smaller k. The
    objective vanishes as k grows, so k_max = 200 comfortably brackets the
    argmax (69 at theta = 1.01, decreasing in theta).
    """
    th = to_float(theta)
    if th <= 1.0:
        raise ValueError(f"optimize_gt1 needs theta > 1, got {theta!r}")
    if horizon is not None and k_max >= horizon:
        raise ValueError(f"k_max {k_max} must stay below horizon {horizon}")
    best_k, best_p = 1, -1.0
    for k in range(1, k_max + 1):
        p = (
            w2_asymptotic_ratio(k, th)
            if horizon is None
            else w2_win_ratio(horizon, k, th)
        )
        if p > best_p:
            best_k, best_p = k, p
    return Gt1Optimum(k=best_k, p=best_p)


def optimize_mid(theta: Scalar, grid_max: int = 100) -> MidOptimum:
    """Brute-force maximum of the two-threshold win formula on 1 <= y <= x <= grid_max.

    Ties break toward lexicographically smaller (x, y).
    """
    th = to_float(theta)
    if not 0.5 < th < 1.0:
        raise ValueError(f"optimize_mid needs 1/2 < theta < 1, got {theta!r}")
    best = (-1.0, 0, 0)
    for x in range(1, grid_max + 1):
        for y in range(1, x + 1):
            p = asymptotic_f(x, y, th)
            if p > best[0]:
                best = (p, x, y)
    return MidOptimum(x=best[1], y=best[2], p=best[0])


def optimize_small(theta: Scalar) -> SmallOptimum:
    """Optimal last-x rule for 0 < theta < 1/2: x = 2, p = (1-theta)(1-theta+theta^2).

    The returned optimum is cross-checked at run time against the asymptotic
    value curve on x in 2..10 (it is strictly decreasing past x = 2).
    """
    th = to_float(theta)
    if not 0.0 < th < 0.5:
        raise ValueError(f"optimize_small needs 0 < theta < 1/2, got {theta!r}")
    one = theta ** 0
    p = (one - theta) * (one - theta + theta * theta)
    best_alt = max(to_float(case31_value(x, theta)) for x in range(2, 11))
    if to_float(p) < best_alt - 1e-15:
        raise AssertionError(
            f"x = 2 is not the argmax at theta={theta!r}; got curve max {best_alt}"
        )
    return SmallOptimum(x=2, p=p)


def _theta_is(theta: Scalar, value: Fraction, *, rel: float = REL_TOL) -> bool:
    if is_exact(theta):
        return Fraction(theta) == value
    return abs(to_float(theta) - float(value)) < rel


def dispatch(theta: Scalar, *, grid_max: int = 100, k_max: int = 200) -> RegimeResult:
    """Route theta to its regime and return the optimal rule and probability."""
    if to_float(theta) <= 0.0:
        raise ValueError(f"theta must be positive, got {theta!r}")

    if _theta_is(theta, Fraction(1)):
        quarter: Scalar = Fraction(1, 4) if is_exact(theta) else 0.25
        return RegimeResult(
            regime="ThetaEq1",
            strategy=AsymptoticStrategy(
                kind="second-maximum-threshold-midpoint",
                params=(),
                description=(
                    "reject the first N/2 - 1 candidates; from there any "
                    "left-to-right maximum may be accepted or rejected "
                    "indifferently; accept the next left-to-right second "
                    "maximum"
                ),
            ),
            win_probability=quarter,
            indifference_notes=(
                "accepting or rejecting a left-to-right maximum after the "
                "exploration stage does not change the win probability",
                "finite N: probability k(N-k)/(N(N-1)) is maximized at k = N/2",
            ),
        )

    if _theta_is(theta, Fraction(1, 2)):
        one = theta ** 0
        p_half = (one - theta) * (one - theta + theta * theta)  # 3/8
        return RegimeResult(
            regime="ThetaEqHalf",
            strategy=AsymptoticStrategy(
                kind="last-three-indifference",
                params=(),
                description=(
                    "reject all but the last three candidates; third-last: "
                    "accept or reject a left-to-right maximum (indifferent), "
                    "reject otherwise; second-last: accept a left-to-right "
                    "maximum, accept or reject a second maximum "
                    "(indifferent), reject otherwise; last: accept a second "
                    "maximum, otherwise indifferent"
                ),
            ),
            win_probability=p_half,
            indifference_notes=(
                "type II prefixes at distance 1 from the end and type I at "
                "distance 2 are exact ties (Q = Q_o)",
                "value 3/8 equals both adjacent-regime limits at theta = 1/2",
            ),
        )

    th = to_float(theta)
    if th > 1.0:
        k, p = optimize_gt1(theta, k_max)
        return RegimeResult(
            regime="ThetaGt1",
            strategy=AsymptoticStrategy(
                kind="second-maximum-threshold",
                params=(("k", k),),
                description=(
                    f"reject the first {k} candidates, then accept the next "
                    "left-to-right second maximum"
                ),
            ),
            win_probability=p,
            indifference_notes=(),
        )

    if th > 0.5:
        x, y, p = optimize_mid(theta, grid_max)
        if x >= grid_max:
            raise ArithmeticError(
                f"grid optimum hit the bound x = {x} = grid_max; raise grid_max"
            )
        roots = threshold_roots(th)
        notes = [
            f"positivity roots: j1={roots.j1:.6f} (second-maximum side), "
            f"j2={roots.j2:.6f} (maximum side), j3={roots.j3:.6f}",
        ]
        if x not in (math.floor(roots.j2), math.ceil(roots.j2)) or y not in (
            math.floor(roots.j1),
            math.ceil(roots.j1),
        ):
            notes.append(
                f"grid optimum (x={x}, y={y}) is not a floor/ceiling of "
                f"(j2, j1); both are reported without asserting equality"
            )
        return RegimeResult(
            regime="ThetaMid",
            strategy=AsymptoticStrategy(
                kind="two-threshold-from-end",
                params=(("x", x), ("y", y)),
                description=(
                    f"with x = N-k1 = {x} and y = N-k2 = {y}: accept the "
                    "next left-to-right maximum among the last x candidates "
                    "or the next left-to-right second maximum among the "
                    "last y, whichever fires first"
                ),
            ),
            win_probability=p,
            indifference_notes=tuple(notes),
        )

    x, p = optimize_small(theta)
    return RegimeResult(
        regime="ThetaSmall",
        strategy=AsymptoticStrategy(
            kind="maximum-threshold-last-accept-from-end",
            params=(("x", x),),
            description=(
                "reject all but the last two candidates, accept the next "
                "left-to-right maximum, else accept the last candidate"
            ),
        ),
        win_probability=p,
        indifference_notes=(),
    )
