"""Symbolic generators for infinite strictly increasing digit sequences.

Each family defines its k-th term analytically, knows a certified
binary-log enclosure for that term without necessarily materialising it
(tower terms get astronomically large), and carries its analytic
convergence-exponent certificate where one exists.  Floor-based families
verify their first gaps explicitly at construction; beyond that the
derivative bound (d/dx) x^(1/a) >= 1 for 1/a >= 1 guarantees strict
increase.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .arith import (
    DomainError,
    Enclosure,
    floor_root_power,
    log2_enclosure,
    rational_str,
)

__all__ = [
    "DigitRule",
    "PowerFloorRule",
    "TowerRule",
    "LinearRule",
    "BitPerturbedRule",
    "ExplicitRule",
]

# Bases below this bound take the exact-value path in log enclosures;
# above it the floor slack 3/b is already tighter than 2**-18.
_EXACT_LOG_BASE_BOUND = 1 << 18


def _check_alpha(alpha: Fraction, allow_zero: bool) -> Fraction:
    alpha = Fraction(alpha)
    low_ok = alpha > 0 or (allow_zero and alpha == 0)
    if not (low_ok and alpha <= 1):
        raise DomainError(f"exponent parameter {alpha} outside the admissible range")
    return alpha


def _floor_power_log2(b: int, alpha: Fraction, bits: int) -> Enclosure:
    """Enclosure of log2(floor(b**(1/alpha))) without materialising the floor.

    With u = b**(q/p) >= 4 the floor loses at most
    -log2(1 - 1/u) <= 3/u <= 3/b bits, since q/p >= 1.
    """
    p, q = alpha.numerator, alpha.denominator
    lb = log2_enclosure(b, bits)
    exp = Fraction(q, p)
    hi = lb.hi * exp
    lo = lb.lo * exp - Fraction(3, b)
    return Enclosure(lo, hi)


class DigitRule:
    """Base interface: an analytic rule for a strictly increasing digit sequence."""

    #: analytic convergence exponent, or None when no certificate exists
    certificate: Optional[Fraction] = None

    def term(self, k: int) -> int:
        """Exact k-th digit (1-indexed)."""
        raise NotImplementedError

    def log2_term(self, k: int, bits: int = 32) -> Enclosure:
        """Certified enclosure of log2(term(k)); default materialises the term."""
        return log2_enclosure(self.term(k), bits)

    def power_sum_diverges(self, s: Fraction) -> Optional[bool]:
        """Whether sum 1/term(k)**s diverges; None when not certified."""
        return None

    def terms(self, n: int) -> tuple[int, ...]:
        return tuple(self.term(k) for k in range(1, n + 1))

    def describe(self) -> dict:
        raise NotImplementedError

    def check_strictly_increasing(self, depth: int) -> None:
        last = 0
        for k in range(1, depth + 1):
            t = self.term(k)
            if not isinstance(t, int) or t < 1:
                raise DomainError(f"rule produced non-digit {t!r} at index {k}")
            if t <= last:
                raise DomainError(
                    f"rule fails strict increase at index {k}: {last} -> {t}"
                )
            last = t

    def _require_index(self, k: int) -> None:
        if k < 1:
            raise DomainError("digit indices are 1-based")


@dataclass(frozen=True)
class PowerFloorRule(DigitRule):
    """Continue a prefix with floor((base+i)**(1/alpha)), alpha in (0, 1].

    An empty prefix is treated as base 1, so the tail starts at
    floor(2**(1/alpha)).  The generated sequence has convergence
    exponent exactly alpha.
    """

    prefix: tuple[int, ...]
    alpha: Fraction

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "alpha", _check_alpha(self.alpha, allow_zero=False))
        self.check_strictly_increasing(len(self.prefix) + 64)

    @property
    def certificate(self) -> Fraction:
        return self.alpha

    @property
    def _base(self) -> int:
        return self.prefix[-1] if self.prefix else 1

    def term(self, k: int) -> int:
        self._require_index(k)
        if k <= len(self.prefix):
            return self.prefix[k - 1]
        b = self._base + (k - len(self.prefix))
        return floor_root_power(b, self.alpha.numerator, self.alpha.denominator)

    def log2_term(self, k: int, bits: int = 32) -> Enclosure:
        self._require_index(k)
        if k <= len(self.prefix):
            return log2_enclosure(self.prefix[k - 1], bits)
        b = self._base + (k - len(self.prefix))
        p, q = self.alpha.numerator, self.alpha.denominator
        if p == 1:
            return log2_enclosure(b, bits).scale(q)
        if b < _EXACT_LOG_BASE_BOUND:
            return log2_enclosure(self.term(k), bits)
        return _floor_power_log2(b, self.alpha, bits)

    def power_sum_diverges(self, s: Fraction) -> Optional[bool]:
        # At s = alpha: floor(b**(1/a))**a <= b, a shifted harmonic minorant.
        return Fraction(s) <= self.alpha

    def describe(self) -> dict:
        return {
            "family": "power_floor",
            "prefix": list(self.prefix),
            "alpha": rational_str(self.alpha),
        }


@dataclass(frozen=True)
class TowerRule(DigitRule):
    """Continue a prefix with (base+i)**(M+i); convergence exponent 0.

    M is the prefix length; the empty prefix uses base 1, so the tail
    runs 2**1, 3**2, 4**3, ...
    """

    prefix: tuple[int, ...]

    certificate = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        self.check_strictly_increasing(len(self.prefix) + 8)

    @property
    def _base(self) -> int:
        return self.prefix[-1] if self.prefix else 1

    def term(self, k: int) -> int:
        self._require_index(k)
        m = len(self.prefix)
        if k <= m:
            return self.prefix[k - 1]
        i = k - m
        return (self._base + i) ** (m + i)

    def log2_term(self, k: int, bits: int = 32) -> Enclosure:
        self._require_index(k)
        m = len(self.prefix)
        if k <= m:
            return log2_enclosure(self.prefix[k - 1], bits)
        i = k - m
        return log2_enclosure(self._base + i, bits).scale(m + i)

    def power_sum_diverges(self, s: Fraction) -> Optional[bool]:
        # Terms dominate 2**k, so every positive power sum converges.
        return False

    def describe(self) -> dict:
        return {"family": "tower", "prefix": list(self.prefix)}


@dataclass(frozen=True)
class LinearRule(DigitRule):
    """The arithmetic rule k -> offset + k; convergence exponent 1."""

    offset: int = 0

    certificate = Fraction(1)

    def __post_init__(self):
        if not isinstance(self.offset, int) or self.offset < 0:
            raise DomainError("offset must be a non-negative integer")

    def term(self, k: int) -> int:
        self._require_index(k)
        return self.offset + k

    def log2_term(self, k: int, bits: int = 32) -> Enclosure:
        self._require_index(k)
        return log2_enclosure(self.offset + k, bits)

    def power_sum_diverges(self, s: Fraction) -> Optional[bool]:
        return Fraction(s) <= 1

    def describe(self) -> dict:
        return {"family": "linear", "offset": self.offset}


@dataclass(frozen=True)
class BitPerturbedRule(DigitRule):
    """Digits floor((eps_k + 2k - 1)**(1/alpha)) driven by a 0/1 pattern.

    Distinct bit patterns give distinct sequences, all with convergence
    exponent alpha.  alpha = 0 switches to the tower variant
    (eps_k + 2k - 1)**k.  A finite pattern is implicitly extended by
    zeros.
    """

    alpha: Fraction
    bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_alpha(self.alpha, allow_zero=True))
        pattern = tuple(self.bits)
        if any(b not in (0, 1) for b in pattern):
            raise DomainError("perturbation pattern must consist of bits 0/1")
        object.__setattr__(self, "bits", pattern)
        self.check_strictly_increasing(max(len(pattern), 16) + 8)

    @property
    def certificate(self) -> Fraction:
        return self.alpha

    def _eps(self, k: int) -> int:
        return self.bits[k - 1] if k <= len(self.bits) else 0

    def term(self, k: int) -> int:
        self._require_index(k)
        b = self._eps(k) + 2 * k - 1
        if self.alpha == 0:
            return b**k
        return floor_root_power(b, self.alpha.numerator, self.alpha.denominator)

    def log2_term(self, k: int, bits: int = 32) -> Enclosure:
        self._require_index(k)
        b = self._eps(k) + 2 * k - 1
        if self.alpha == 0:
            return log2_enclosure(b, bits).scale(k)
        p, q = self.alpha.numerator, self.alpha.denominator
        if p == 1:
            return log2_enclosure(b, bits).scale(q)
        if b < _EXACT_LOG_BASE_BOUND:
            return log2_enclosure(self.term(k), bits)
        return _floor_power_log2(b, self.alpha, bits)

    def power_sum_diverges(self, s: Fraction) -> Optional[bool]:
        if self.alpha == 0:
            return False
        # At s = alpha: term**alpha <= eps + 2k - 1 <= 2k.
        return Fraction(s) <= self.alpha

    def describe(self) -> dict:
        return {
            "family": "bit_perturbed",
            "alpha": rational_str(self.alpha),
            "bits": "".join(str(b) for b in self.bits),
        }


@dataclass(frozen=True)
class ExplicitRule(DigitRule):
    """An uncertified rule given by an arbitrary term function.

    Useful for experiments (k -> 2**k, ...); certified operations refuse
    it rather than guessing.
    """

    fn: Callable[[int], int]
    name: str = "explicit"

    certificate = None

    def __post_init__(self):
        self.check_strictly_increasing(16)

    def term(self, k: int) -> int:
        self._require_index(k)
        t = self.fn(k)
        if not isinstance(t, int) or t < 1:
            raise DomainError(f"rule produced non-digit {t!r} at index {k}")
        return t

    def describe(self) -> dict:
        return {"family": "explicit", "name": self.name}
