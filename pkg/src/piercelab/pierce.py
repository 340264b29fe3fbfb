"""The Pierce digit algorithm and shift dynamics over exact rationals.

A single greedy step maps x to (d, t) with d = floor(1/x) and
t = 1 - d*x; iterating the step produces the strictly increasing digit
sequence of x, which terminates at 0 exactly when x is rational.  The
interval variant propagates a rational enclosure through the shift and
only ever emits digits shared by every point of the enclosure.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .arith import (
    DomainError,
    ExtNat,
    INFINITY,
    RatInterval,
    floor_reciprocal,
)

__all__ = [
    "DigitStatus",
    "SafeDigits",
    "validate_prefix",
    "digit_step",
    "digits_rational",
    "safe_digits",
    "partial_sums",
    "shift_orbit",
]


def validate_prefix(digits) -> tuple[int, ...]:
    """Check a finite digit prefix: positive integers, strictly increasing."""
    prefix = tuple(digits)
    last = 0
    for d in prefix:
        if not isinstance(d, int) or d < 1:
            raise DomainError(f"digit {d!r} is not a positive integer")
        if d <= last:
            raise DomainError(f"prefix {prefix} is not strictly increasing")
        last = d
    return prefix


def digit_step(x: Fraction) -> tuple[ExtNat, Fraction]:
    """One greedy step: (floor(1/x), 1 - floor(1/x)*x); (INFINITY, 0) at x = 0.

    The remainder is again in [0, 1] and, for x in (0, 1], has a strictly
    smaller numerator than x in lowest terms, which is why the iteration
    terminates on rationals.
    """
    x = Fraction(x)
    d = floor_reciprocal(x)
    if d is INFINITY:
        return INFINITY, Fraction(0)
    return d, 1 - d * x


def digits_rational(x: Fraction) -> tuple[int, ...]:
    """The full digit sequence of a rational x in [0, 1].

    Terminates because the remainder's numerator strictly decreases:
    for x = p/q the next numerator is q mod p reduced, which is < p.
    """
    x = Fraction(x)
    if not (0 <= x <= 1):
        raise DomainError(f"value {x} lies outside [0, 1]")
    digits: list[int] = []
    while x != 0:
        d, x = digit_step(x)
        digits.append(d)
    return tuple(digits)


class DigitStatus(Enum):
    EXHAUSTED = "exhausted"
    AMBIGUOUS = "ambiguous"
    TERMINATED = "terminated"


@dataclass(frozen=True)
class SafeDigits:
    """Digits certified to be shared by every point of an input enclosure."""

    prefix: tuple[int, ...]
    status: DigitStatus


def safe_digits(interval: RatInterval, max_n: int) -> SafeDigits:
    """Extract digits valid for the whole rational enclosure.

    The shift is affine decreasing on each digit cell, so the image of
    [lo, hi] under one step with digit d is exactly [1 - d*hi, 1 - d*lo].
    A digit is emitted only while floor(1/x) agrees at both endpoints;
    the first disagreement yields AMBIGUOUS, reaching max_n yields
    EXHAUSTED, and a point orbit hitting 0 yields TERMINATED.
    """
    if max_n < 0:
        raise DomainError("max_n must be non-negative")
    lo, hi = interval.lo, interval.hi
    digits: list[int] = []
    while True:
        if lo == hi == 0:
            return SafeDigits(tuple(digits), DigitStatus.TERMINATED)
        if len(digits) >= max_n:
            return SafeDigits(tuple(digits), DigitStatus.EXHAUSTED)
        d_hi = floor_reciprocal(hi)
        d_lo = floor_reciprocal(lo)
        if d_hi != d_lo:
            return SafeDigits(tuple(digits), DigitStatus.AMBIGUOUS)
        d = d_hi
        digits.append(d)
        lo, hi = 1 - d * hi, 1 - d * lo


def partial_sums(prefix) -> list[Fraction]:
    """Alternating partial sums s_k = sum_{j<=k} (-1)^{j+1} / (d_1 ... d_j).

    Consecutive sums bracket the expansion's value (alternating series
    with strictly decreasing terms).
    """
    prefix = validate_prefix(prefix)
    if not prefix:
        raise DomainError("partial sums of an empty prefix are undefined")
    sums: list[Fraction] = []
    term = Fraction(1)
    total = Fraction(0)
    for j, d in enumerate(prefix, start=1):
        term /= d
        total += term if j % 2 == 1 else -term
        sums.append(total)
    return sums


def shift_orbit(x: Fraction, n: int) -> list[Fraction]:
    """[T(x), T^2(x), ..., T^n(x)] exactly; 0 is a fixed point."""
    x = Fraction(x)
    if not (0 <= x <= 1):
        raise DomainError(f"value {x} lies outside [0, 1]")
    if n < 0:
        raise DomainError("orbit length must be non-negative")
    orbit: list[Fraction] = []
    for _ in range(n):
        _, x = digit_step(x)
        orbit.append(x)
    return orbit
