"""Scalar plumbing: exact-rational vs float mode, parsing, tolerant comparison.

Every quantity that depends on the model parameter theta (weights, win
probabilities, q-polynomial values) runs in one of two modes:

- exact mode: values are `fractions.Fraction` (or int), all arithmetic exact;
- float mode: ordinary 64-bit floats.

The mode is decided by the type of theta and propagates through arithmetic,
so the computational modules are mode-agnostic. Float equality uses the
package-wide relative tolerance REL_TOL; positivity *decisions* compare
strictly, with near-ties reported separately (see engine.positivity_thresholds).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, int, float]

# Relative tolerance for float-mode equality assertions and tie detection.
REL_TOL = 1e-12


def is_exact(x: Scalar) -> bool:
    """True when x carries exact-rational semantics."""
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def to_float(x: Scalar) -> float:
    return float(x)


def parse_theta(text: str, *, force_float: bool = False) -> Scalar:
    """Parse theta from CLI text.

    "a/b" with integer a, b > 0 and plain integers select exact mode
    (a Fraction); decimal literals select float mode. force_float downgrades
    either form to float.

    >>> parse_theta("3/2")
    Fraction(3, 2)
    >>> parse_theta("0.75")
    0.75
    """
    text = text.strip()
    if "/" in text:
        num_s, _, den_s = text.partition("/")
        try:
            num, den = int(num_s), int(den_s)
        except ValueError:
            raise ValueError(f"theta {text!r} is not a ratio of integers") from None
        if num <= 0 or den <= 0:
            raise ValueError(f"theta {text!r} must be a ratio of positive integers")
        value: Scalar = Fraction(num, den)
    else:
        try:
            value = Fraction(int(text))
        except ValueError:
            try:
                value = float(text)
            except ValueError:
                raise ValueError(f"theta {text!r} is not a number") from None
    if to_float(value) <= 0.0:
        raise ValueError(f"theta must be positive, got {text!r}")
    if force_float:
        return to_float(value)
    return value


def compare(a: Scalar, b: Scalar, *, rel: float = REL_TOL) -> int:
    """Three-way compare: -1 / 0 / +1.

    Exact operands compare exactly. If either side is a float the comparison
    treats |a - b| <= rel * max(|a|, |b|) as a tie.
    """
    if is_exact(a) and is_exact(b):
        return (a > b) - (a < b)
    fa, fb = float(a), float(b)
    if abs(fa - fb) <= rel * max(abs(fa), abs(fb)):
        return 0
    return 1 if fa > fb else -1


def scalars_close(a: Scalar, b: Scalar, *, rel: float = REL_TOL) -> bool:
    return compare(a, b, rel=rel) == 0


def format_rational(x: Scalar) -> str | None:
    """Reduced "a/b" string for exact values, None in float mode."""
    if not is_exact(x):
        return None
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"
