"""Closed forms and recurrences for threshold-strategy win/no-pick weights.

All quantities are weighted permutation counts (sums of theta^inversions over
the relevant subset of S_N), not probabilities; divide by (P_N)! to get a
probability. Where both a recurrence and a solved product form exist, both
are implemented and pinned together by tests.

Families, by stopping rule:

- reject first k then accept the next left-to-right second maximum:
  t2 (no pick made) and w2 (winning pick);
- reject first k then accept the next left-to-right maximum:
  t1 (no pick), w1_star (winning pick), and w1_total which adds the win from
  accepting the last candidate when no pick happened;
- two-threshold rule (maximum after k1, second maximum after k2, whichever
  fires first): t1_two and w1_two.

Asymptotic (N -> infinity) values: w2_asymptotic_ratio and w2_win_ratio for
theta > 1, asymptotic_f(x, y) for 1/2 < theta < 1 with thresholds counted
from the end (x = N - k1, y = N - k2), and case31_value(x) for theta < 1/2.
The h1/h2 root functions locate the asymptotic positivity thresholds.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .qpoly import QPoly, qpoly_for
from .scalars import Scalar


def _qp(theta: Scalar) -> QPoly:
    return qpoly_for(theta)


# ---------------------------------------------------------------------------
# Second-maximum threshold rule: T2 / W2


def t2(n: int, k: int, theta: Scalar) -> Scalar:
    """Weight of permutations on which the rule picks nobody.

    t2(k, k) = (P_k)!; for n > k the solved product form multiplies in one
    (1 + theta^2 P_j) factor per extra candidate.
    """
    if not 0 <= k <= n:
        raise ValueError(f"t2 needs 0 <= k <= n, got k={k}, n={n}")
    qp = _qp(theta)
    th2 = theta * theta
    if k == 0:
        if n <= 2:
            return theta ** 0
        out = theta ** 0
        for j in range(1, n - 1):
            out = out * (1 + th2 * qp.p(j))
        return out
    out = qp.p_factorial(k)
    for j in range(k - 1, n - 1):
        out = out * (1 + th2 * qp.p(j))
    return out


def t2_recurrence(n: int, k: int, theta: Scalar) -> Scalar:
    """t2 by its positional recurrence (value-N conditioning); test twin of t2."""
    if not 0 <= k <= n:
        raise ValueError(f"t2 needs 0 <= k <= n, got k={k}, n={n}")
    qp = _qp(theta)
    if k == 0:
        vals = [theta ** 0, theta ** 0, theta ** 0]  # index by N = 0, 1, 2
        for m in range(3, n + 1):
            acc = 0 * theta
            for i in range(2, m + 1):
                acc = acc + theta ** (2 * (m - i)) * (
                    qp.p_factorial(m - 2) / qp.p_factorial(i - 2)
                ) * vals[i - 1]
            vals.append(acc)
        return vals[n]
    vals = {k: qp.p_factorial(k)}
    for m in range(k + 1, n + 1):
        acc = theta ** (2 * m - 2 * k) * qp.p(k) * qp.p(k - 1) * qp.p_factorial(m - 2)
        for i in range(k + 1, m + 1):
            acc = acc + theta ** (2 * m - 2 * i) * qp.binomial(i - 2, m - i) * vals[
                i - 1
            ] * qp.p_factorial(m - i)
        vals[m] = acc
    return vals[n]


def w2(n: int, k: int, theta: Scalar) -> Scalar:
    """Weight of permutations the rule wins (picks the second best)."""
    if n < 2:
        raise ValueError(f"w2 needs n >= 2, got {n}")
    if k == 0:
        return theta * t2(n, 0, theta)
    if not 1 <= k <= n - 1:
        raise ValueError(f"w2 needs 0 <= k <= n-1, got k={k}, n={n}")
    qp = _qp(theta)
    return theta * t2(n, k, theta) - theta ** (2 * n - 2 * k + 1) * qp.p_factorial(
        n - 2
    ) * qp.p(k) * qp.p(k - 1)


def w2_recurrence(n: int, k: int, theta: Scalar) -> Scalar:
    """w2 by the last-position recurrence; initial value theta (P_k)! at n = k+1."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"w2 recurrence needs 1 <= k <= n-1, got k={k}, n={n}")
    qp = _qp(theta)
    val = theta * qp.p_factorial(k)
    for m in range(k + 2, n + 1):
        val = theta * theta * qp.p(m - 2) * val + theta * t2(m - 1, k, theta)
    return val


# ---------------------------------------------------------------------------
# Maximum threshold rule: T1 / W1* / W1


def t1(n: int, k: int, theta: Scalar) -> Scalar:
    """No-pick weight for the maximum rule: the best candidate hides in 1..k."""
    if not 0 <= k <= n:
        raise ValueError(f"t1 needs 0 <= k <= n, got k={k}, n={n}")
    if k == 0:
        return 0 * theta
    qp = _qp(theta)
    return theta ** (n - k) * qp.p(k) * qp.p_factorial(n - 1)


def w1_star(n: int, k: int, theta: Scalar) -> Scalar:
    """Winning-pick weight for the maximum rule, no forced last acceptance."""
    if n < 2:
        raise ValueError(f"w1_star needs n >= 2, got {n}")
    if not 0 <= k <= n - 1:
        raise ValueError(f"w1_star needs 0 <= k <= n-1, got k={k}, n={n}")
    qp = _qp(theta)
    if k == 0:
        # accept the first candidate; wins exactly when it is the second best
        return theta ** (n - 2) * qp.p_factorial(n - 1)
    if n == k + 1:
        return 0 * theta
    acc = 0 * theta
    for j in range(1, n - k):
        acc = acc + qp.p(n - k - j) * qp.p(k) / qp.p(k + j - 1)
    return qp.p_factorial(n - 2) * theta ** (n - k - 2) * acc


def w1_star_recurrence(n: int, k: int, theta: Scalar) -> Scalar:
    """w1_star by its recurrence; initial value 0 at n = k+1."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"w1_star recurrence needs 1 <= k <= n-1, got k={k}, n={n}")
    qp = _qp(theta)
    val = 0 * theta
    for m in range(k + 2, n + 1):
        val = theta * theta * qp.p(m - 2) * val
        for i in range(k + 1, m):
            val = val + theta ** (m - i - 1) * t1(i - 1, k, theta) * qp.binomial(
                i - 1, m - i - 1
            ) * qp.p_factorial(m - i - 1)
    return val


def w1_total(n: int, k: int, theta: Scalar) -> Scalar:
    """Winning weight with forced acceptance of the last candidate on no pick."""
    if not 0 <= k <= n - 1:
        raise ValueError(f"w1_total needs 0 <= k <= n-1, got k={k}, n={n}")
    return w1_star(n, k, theta) + theta * t1(n - 1, k, theta)


# ---------------------------------------------------------------------------
# Two-threshold rule: T1(N, k1, k2) / W1(N, k1, k2)


def t1_two(n: int, k1: int, k2: int, theta: Scalar) -> Scalar:
    """No-pick weight: best in 1..k1 and second best in 1..k2."""
    if not 1 <= k1 <= k2 <= n:
        raise ValueError(f"t1_two needs 1 <= k1 <= k2 <= n, got ({k1}, {k2}, {n})")
    qp = _qp(theta)
    return theta ** (2 * n - k1 - k2) * qp.p(k1) * qp.p(k2 - 1) * qp.p_factorial(n - 2)


def _w1_two_base(k1: int, k2: int, theta: Scalar) -> Scalar:
    # W1(k2+1, k1, k2)
    qp = _qp(theta)
    acc = theta * theta
    for i in range(k1, k2):
        acc = acc + qp.p(k2 - i) / qp.p(i)
    return qp.p_factorial(k2 - 1) * qp.p(k1) * theta ** (k2 - k1 - 1) * acc


def w1_two(n: int, k1: int, k2: int, theta: Scalar) -> Scalar:
    """Winning weight of the (k1, k2) rule, by its recurrence.

    k1 = 0 is rejected: the rule would accept the first candidate outright.
    """
    if k1 == 0:
        raise ValueError("k1 = 0 degenerates to accepting the first candidate")
    if not 1 <= k1 <= k2 <= n - 2:
        raise ValueError(f"w1_two needs 1 <= k1 <= k2 <= n-2, got ({k1}, {k2}, {n})")
    qp = _qp(theta)
    val = _w1_two_base(k1, k2, theta)
    for m in range(k2 + 2, n + 1):
        val = theta * theta * qp.p(m - 2) * val + theta * t1_two(m - 1, k1, k2, theta)
        for i in range(k1 + 1, k2 + 2):
            val = val + theta ** (m - i - 1) * t1(i - 1, k1, theta) * qp.binomial(
                i - 1, m - i - 1
            ) * qp.p_factorial(m - i - 1)
        for i in range(k2 + 2, m):
            val = val + theta ** (m - i - 1) * t1_two(i - 1, k1, k2, theta) * qp.binomial(
                i - 1, m - i - 1
            ) * qp.p_factorial(m - i - 1)
    return val


def w1_two_solved(n: int, k1: int, k2: int, theta: Scalar) -> Scalar:
    """Solved form of w1_two, valid for k2 <= n-3; test twin of w1_two."""
    if not 1 <= k1 <= k2 <= n - 3:
        raise ValueError(
            f"w1_two_solved needs 1 <= k1 <= k2 <= n-3, got ({k1}, {k2}, {n})"
        )
    qp = _qp(theta)
    a = theta ** (n - k2 + 1)
    b = theta ** (n - k2 + 1) * qp.p(k2 - 1) * sum(
        (theta ** 0) / qp.p(i) for i in range(k2, n - 1)
    )
    c = sum(qp.p(n - i - 1) / qp.p(i) for i in range(k1, k2 + 1))
    d = theta * qp.p(k2 - 1) * sum(
        theta ** (i - k2) * qp.p(n - i - 2) / (qp.p(i) * qp.p(i + 1))
        for i in range(k2, n - 2)
    )
    return theta ** (n - k1 - 2) * qp.p(k1) * qp.p_factorial(n - 2) * (a + b + c + d)


# ---------------------------------------------------------------------------
# Asymptotics


def w2_win_ratio(n: int, k: int, theta: float) -> float:
    """W2(n, k)/(P_n)! in a product form stable for theta > 1 and large n."""
    if theta <= 1.0:
        raise ValueError(f"w2_win_ratio needs theta > 1, got {theta}")
    if not 1 <= k <= n - 1:
        raise ValueError(f"w2_win_ratio needs 1 <= k <= n-1, got k={k}, n={n}")
    r = 1.0 / theta
    prod = 1.0
    rj = r ** (k + 1)
    for _ in range(k + 1, n + 1):
        d = theta * (theta - 1.0) * rj / (1.0 - rj)
        prod *= 1.0 - d
        if d < 1e-18:
            break
        rj *= r
    def a(m: int) -> float:
        return (1.0 - r ** m) * (1.0 - r ** (m - 1))
    return theta * prod - theta * a(k) / a(n)


def w2_asymptotic_ratio(k: int, theta: float, epsilon: float = 1e-14) -> float:
    """Limit of W2(N, k)/(P_N)! as N -> infinity, for theta > 1.

    The infinite product is truncated once the running factor is within
    epsilon of 1; the neglected tail is bounded by a geometric series, so the
    truncation error is below epsilon * theta / (theta - 1) in relative terms.
    """
    if theta <= 1.0:
        raise ValueError(f"w2_asymptotic_ratio needs theta > 1, got {theta}")
    if k < 1:
        raise ValueError(f"w2_asymptotic_ratio needs k >= 1, got {k}")
    r = 1.0 / theta
    prod = 1.0
    rj = r ** (k + 1)
    while True:
        d = theta * (theta - 1.0) * rj / (1.0 - rj)
        prod *= 1.0 - d
        if d < epsilon:
            break
        rj *= r
    return theta * prod - theta * (1.0 - r ** k) * (1.0 - r ** (k - 1))


def case31_value(x: int, theta: Scalar) -> Scalar:
    """Asymptotic win probability of the last-x maximum-rule strategy.

    x = N - k counts candidates not auto-rejected; the rule accepts the next
    left-to-right maximum among them, else the very last candidate. x = 1 is
    handled by the optimizer (plain last-accept, value theta (1 - theta)).
    """
    if x < 2:
        raise ValueError(f"case31_value needs x >= 2, got {x}")
    if not 0.0 < float(theta) < 1.0:
        raise ValueError(f"case31_value needs 0 < theta < 1, got {theta!r}")
    one = theta ** 0
    return theta ** (x - 2) * (
        (x - 1) * (one - theta) - theta * (one - theta ** (x - 1))
    ) + theta ** x * (one - theta)


def asymptotic_f(x: int, y: int, theta: Scalar) -> Scalar:
    """Asymptotic win probability of the (k1, k2) rule, x = N-k1, y = N-k2."""
    if not 1 <= y <= x:
        raise ValueError(f"asymptotic_f needs 1 <= y <= x, got ({x}, {y})")
    if not 0.5 < float(theta) < 1.0:
        raise ValueError(f"asymptotic_f needs 1/2 < theta < 1, got {theta!r}")
    one = theta ** 0
    return theta ** (x - 2) * (one - theta) * (
        theta ** (y + 1)
        + theta ** (y + 1) * (y - 1)
        + (x - y + 1 - theta ** (y - 1) * (one - theta ** (x - y + 1)) / (one - theta))
        + theta * ((one - theta ** (y - 2)) / (one - theta) - theta ** (y - 2) * (y - 2))
    )


# ---------------------------------------------------------------------------
# Positivity-threshold root equations (1/2 < theta < 1)


def h1(j: float, theta: float) -> float:
    """Sign of h1 decides second-maximum positivity at distance j from the end."""
    return (
        (j + 1) * theta ** (j + 2)
        - j * theta ** (j + 1)
        - (j - 1) * theta ** j
        + j * theta ** (j - 1)
        - 1.0
    )


def h2(j: float, theta: float) -> float:
    """Sign of h2 decides maximum positivity at distance j from the end."""
    return (
        j * theta ** (j + 2)
        - (j + 1) * theta ** (j + 1)
        - (j - 1) * theta ** j
        + j * theta ** (j - 1)
        + theta
        - 1.0
    )


def j3(theta: float) -> float:
    """Root of 1 - theta^j - theta^(j+1); closed form, valid on 0 < theta < 1."""
    if not 0.0 < theta < 1.0:
        raise ValueError(f"j3 needs 0 < theta < 1, got {theta}")
    return -math.log(1.0 + theta) / math.log(theta)


class ThresholdRoots(NamedTuple):
    j1: float
    j2: float
    j3: float


def _bisect_root(f, lo: float, hi: float, tol: float) -> float:
    # f(lo) > 0 > f(hi); shrink to width tol
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def threshold_roots(theta: float, tol: float = 1e-10) -> ThresholdRoots:
    """Unique positive roots j1 of h1 and j2 of h2, plus j3, for 1/2 < theta < 1.

    h1 and h2 are positive below their roots and negative above; j2 > j1
    always, and j3 < j1 with h1(j3) > 0 (which is what makes
    1 - theta^j1 - theta^(j1+1) > 0 hold).
    """
    if not 0.5 < theta < 1.0:
        raise ValueError(f"threshold_roots needs 1/2 < theta < 1, got {theta}")

    def bracket(f, lo: float) -> float:
        hi = max(2.0 * lo, 1.0)
        for _ in range(60):
            if f(hi) < 0.0:
                return hi
            hi *= 2.0
        raise ArithmeticError(f"no sign change found for root bracketing at theta={theta}")

    lo1 = 1e-9
    if h1(lo1, theta) <= 0.0:
        raise ArithmeticError(f"h1 not positive near 0 at theta={theta}")
    root1 = _bisect_root(lambda j: h1(j, theta), lo1, bracket(lambda j: h1(j, theta), lo1), tol)

    lo2 = 1e-6
    if h2(lo2, theta) <= 0.0:
        raise ArithmeticError(f"h2 not positive near 0 at theta={theta}")
    root2 = _bisect_root(lambda j: h2(j, theta), lo2, bracket(lambda j: h2(j, theta), lo2), tol)

    root3 = j3(theta)
    if not root2 > root1:
        raise ArithmeticError(f"expected j2 > j1, got j1={root1}, j2={root2} at theta={theta}")
    if not root3 < root1:
        raise ArithmeticError(f"expected j3 < j1, got j1={root1}, j3={root3} at theta={theta}")
    return ThresholdRoots(j1=root1, j2=root2, j3=root3)
