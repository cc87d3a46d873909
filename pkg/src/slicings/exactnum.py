"""Exact integer and rational arithmetic helpers.

Counts are arbitrary-precision ``int``; series coefficients are
``fractions.Fraction`` values (always reduced, denominator positive),
re-exported here as :data:`Rational`.  Everything in this package is exact;
no floats appear anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

Integer = int
Rational = Fraction


def factorial(n: int) -> int:
    """n! for n >= 0."""
    if n < 0:
        raise ValueError(f"factorial requires n >= 0, got {n}")
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """Binomial coefficient C(n, k) for n >= 0.

    Returns 0 when k < 0 or k > n, so sums over binomials need no explicit
    range guards.  Computed multiplicatively (exact intermediate division),
    never through full factorials.
    """
    if n < 0:
        raise ValueError(f"binomial requires n >= 0, got n={n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def multinomial(parts: Iterable[int]) -> int:
    """(sum parts)! / prod(p! for p in parts)."""
    total = 0
    out = 1
    for p in parts:
        if p < 0:
            raise ValueError("multinomial parts must be nonnegative")
        total += p
        out *= math.comb(total, p)
    return out


def falling(n: int, k: int) -> int:
    """Falling factorial n (n-1) ... (n-k+1); equals 1 when k == 0."""
    out = 1
    for j in range(k):
        out *= n - j
    return out


def format_rational(q: Fraction) -> str:
    """Render as "num/den", always with an explicit denominator."""
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse "num/den" or a plain decimal integer string."""
    return Fraction(text.strip())
