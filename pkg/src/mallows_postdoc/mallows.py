"""The Mallows distribution on S_n: weights, PMF, and an exact finite-n sampler.

A permutation pi is drawn with probability theta^c(pi) / (P_n)!, where c is
the inversion count and (P_n)! the normalizer. For theta > 1 mass
concentrates on the reversal (n, n-1, .., 1); theta = 1 is uniform; theta < 1
concentrates on the identity.

Sampling uses the sequential-rank factorization: the counts
a_i = #{j < i : pi_j > pi_i} are independent with P(a_i = v) proportional to
theta^v on {0 .. i-1}, and sum to c(pi). Each coordinate is drawn by inverse
CDF on that truncated geometric-like law, then the code is decoded back into
a permutation, so the sampler is exact for every finite n without rejection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .permutations import check_permutation, inversions
from .qpoly import p_factorial
from .scalars import Scalar, is_exact


@dataclass(frozen=True)
class MallowsModel:
    """Game size n, parameter theta > 0, and the normalizer (P_n)!."""

    n: int
    theta: Scalar
    normalizer: Scalar

    @classmethod
    def create(cls, n: int, theta: Scalar) -> "MallowsModel":
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if float(theta) <= 0.0:
            raise ValueError(f"theta must be positive, got {theta!r}")
        return cls(n=n, theta=theta, normalizer=p_factorial(n, theta))


def mallows_pmf(model: MallowsModel, p: Sequence[int]) -> Scalar:
    """theta^inversions(p) / (P_n)!; sums to 1 over S_n."""
    check_permutation(p)
    if len(p) != model.n:
        raise ValueError(f"permutation length {len(p)} != model n {model.n}")
    return model.theta ** inversions(p) / model.normalizer


def _inverse_cdf_counts(i: int, theta: float, u: np.ndarray) -> np.ndarray:
    """Vectorized inverse CDF for a_i on {0..i-1} with P(a_i = v) ~ theta^v."""
    if i == 1:
        return np.zeros_like(u, dtype=np.int64)
    if theta == 1.0:
        return np.minimum((u * i).astype(np.int64), i - 1)
    # Work with ratio r < 1; for theta > 1 sample the reversed coordinate.
    r = theta if theta < 1.0 else 1.0 / theta
    # smallest v with 1 - r^(v+1) >= u (1 - r^i)
    v = np.ceil(np.log1p(-u * (1.0 - r ** i)) / math.log(r) - 1.0).astype(np.int64)
    v = np.clip(v, 0, i - 1)
    if theta > 1.0:
        v = (i - 1) - v
    return v


def decode_rank_code(code: Sequence[int]) -> tuple[int, ...]:
    """Rebuild the permutation whose earlier-larger counts equal code.

    code[i-1] must lie in {0..i-1}; the value at position i is then the
    (i - code[i-1])-th smallest of the values not used by later positions.
    """
    n = len(code)
    avail = list(range(1, n + 1))
    out = [0] * n
    for i in range(n, 0, -1):
        a = code[i - 1]
        if not 0 <= a <= i - 1:
            raise ValueError(f"code[{i - 1}]={a} outside 0..{i - 1}")
        out[i - 1] = avail.pop(i - a - 1)
    return tuple(out)


def sample_rank_codes(model: MallowsModel, size: int, rng: np.random.Generator) -> np.ndarray:
    """(size, n) array of sequential-rank codes drawn from the model."""
    theta = _float_theta(model.theta)
    n = model.n
    out = np.empty((size, n), dtype=np.int64)
    for i in range(1, n + 1):
        out[:, i - 1] = _inverse_cdf_counts(i, theta, rng.random(size))
    return out


def sample_mallows(model: MallowsModel, rng: np.random.Generator) -> tuple[int, ...]:
    """One exact draw from the model as a permutation tuple."""
    code = sample_rank_codes(model, 1, rng)[0]
    return decode_rank_code(code.tolist())


def sample_mallows_batch(
    model: MallowsModel, size: int, rng: np.random.Generator
) -> list[tuple[int, ...]]:
    """size independent exact draws; one shared pass over the coordinates."""
    codes = sample_rank_codes(model, size, rng)
    return [decode_rank_code(row.tolist()) for row in codes]


def _float_theta(theta: Scalar) -> float:
    if is_exact(theta):
        raise ValueError(
            "sampling runs in float mode only; pass theta as a float "
            f"(got exact {theta!r})"
        )
    return float(theta)
