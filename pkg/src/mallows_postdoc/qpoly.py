"""q-analog polynomial values at a fixed theta: P_i, (P_i)!, and B(n, m).

P_i = 1 + theta + ... + theta^(i-1), with the conventions P_0 = 0 and
(P_0)! = 1 (empty product). (P_n)! = P_n P_(n-1) ... P_1 is also the Mallows
normalizer, the total theta^inversions weight of S_n. B(n, m) is the weighted
count of ordered 2-partitions of n+m values by crossing inversions,
B(n, m) = (P_(n+m))! / ((P_n)! (P_m)!), the Gaussian binomial at q = theta.

At theta = 1 these reduce to P_i = i, (P_i)! = i!, B(n, m) = C(n+m, n); no
special casing is needed because only sums and products of theta appear.

Values are computed in whatever scalar mode theta carries (Fraction or
float) and memoized per theta in a QPoly context. The memo grows by
replacing whole lists, so concurrent readers never observe torn state.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .scalars import Scalar, is_exact


class QPoly:
    """Cached P_i and (P_i)! values for one theta."""

    def __init__(self, theta: Scalar):
        if float(theta) <= 0.0:
            raise ValueError(f"theta must be positive, got {theta!r}")
        self.theta = theta
        one = theta ** 0
        # _p[i] = P_i, _pfac[i] = (P_i)!; grown on demand.
        self._p: list[Scalar] = [0 * one, one]
        self._pfac: list[Scalar] = [one, one]

    def _grow(self, i: int) -> None:
        p = list(self._p)
        pfac = list(self._pfac)
        theta = self.theta
        power = theta ** (len(p) - 1)
        while len(p) <= i:
            p.append(p[-1] + power)
            pfac.append(pfac[-1] * p[-1])
            power = power * theta
        self._p = p
        self._pfac = pfac

    def p(self, i: int) -> Scalar:
        """P_i at theta; P_0 = 0."""
        if i < 0:
            raise ValueError(f"P_i needs i >= 0, got {i}")
        if i >= len(self._p):
            self._grow(i)
        return self._p[i]

    def p_factorial(self, i: int) -> Scalar:
        """(P_i)! at theta; (P_0)! = 1."""
        if i < 0:
            raise ValueError(f"(P_i)! needs i >= 0, got {i}")
        if i >= len(self._pfac):
            self._grow(i)
        return self._pfac[i]

    def binomial(self, n: int, m: int) -> Scalar:
        """B(n, m) at theta; B(n, 0) = B(0, m) = 1."""
        if n < 0 or m < 0:
            raise ValueError(f"B(n, m) needs n, m >= 0, got ({n}, {m})")
        return self.p_factorial(n + m) / (self.p_factorial(n) * self.p_factorial(m))


@lru_cache(maxsize=256)
def qpoly_for(theta: Scalar) -> QPoly:
    """Shared per-theta evaluation context."""
    return QPoly(theta)


def p_poly(i: int, theta: Scalar) -> Scalar:
    """P_i(theta) = 1 + theta + ... + theta^(i-1); P_0 = 0."""
    return qpoly_for(theta).p(i)


def p_factorial(i: int, theta: Scalar) -> Scalar:
    """(P_i)!(theta) = P_i P_(i-1) ... P_1; equals the Mallows normalizer of S_i."""
    return qpoly_for(theta).p_factorial(i)


def gaussian_binomial(n: int, m: int, theta: Scalar) -> Scalar:
    """B(n, m)(theta), the Gaussian binomial; C(n+m, n) at theta = 1."""
    return qpoly_for(theta).binomial(n, m)


def log_p(i: int, theta: float) -> float:
    """ln P_i(theta) in float mode, stable for large i and any theta > 0."""
    if i <= 0:
        raise ValueError(f"log P_i needs i >= 1, got {i}")
    theta = float(theta)
    if theta == 1.0:
        return math.log(i)
    if theta < 1.0:
        return math.log1p(-theta ** i) - math.log1p(-theta)
    # theta > 1: P_i = theta^(i-1) (1 - theta^-i) / (1 - 1/theta)
    return (i - 1) * math.log(theta) + math.log1p(-theta ** -i) - math.log1p(-1.0 / theta)


def log_p_factorial(i: int, theta: float) -> float:
    """ln (P_i)!(theta) in float mode."""
    if i < 0:
        raise ValueError(f"log (P_i)! needs i >= 0, got {i}")
    return sum(log_p(j, theta) for j in range(1, i + 1))


def scalar_is_exact(theta: Scalar) -> bool:
    """Convenience re-export used by callers deciding on rescaling."""
    return is_exact(theta)
