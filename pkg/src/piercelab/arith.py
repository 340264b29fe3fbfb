"""Exact numeric substrate shared by the whole package.

Provides arbitrary-precision rationals (``fractions.Fraction`` under the
alias ``BigRational``), extended naturals with a single ``INFINITY``
sentinel, rational intervals over the unit interval, general rational
enclosures, and integer-only kernels for floors of reciprocals, roots,
and binary logarithms.  Everything here is exact: no floating point is
used anywhere, and every enclosure is certified by integer comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "BigRational",
    "DomainError",
    "GuardExceededError",
    "UncertifiedRuleError",
    "INFINITY",
    "ExtNat",
    "is_infinite",
    "unit_reciprocal",
    "floor_reciprocal",
    "integer_root",
    "floor_root_power",
    "ceil_root_power",
    "Enclosure",
    "RatInterval",
    "UNIT_INTERVAL",
    "log2_enclosure",
    "ln2_enclosure",
    "ln_enclosure",
    "pow_enclosure",
]

BigRational = Fraction


def rational_str(x: Fraction) -> str:
    """Canonical exact string "p/q" (always with the denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class DomainError(ValueError):
    """An argument lies outside an operation's mathematical domain."""


class GuardExceededError(RuntimeError):
    """A desk-scale guard (enumeration size, depth, ...) would be exceeded."""


class UncertifiedRuleError(DomainError):
    """A certified quantity was requested for a rule with no analytic certificate."""


class _InfinityType:
    """The extended-natural infinity.

    Participates in arithmetic only through the conventions used by the
    digit machinery: reciprocal powers of INFINITY are 0 and INFINITY
    compares above every integer.  Any other mixed operation is a
    programming error and raises.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("piercelab.arith.INFINITY")

    def __lt__(self, other) -> bool:
        if isinstance(other, int) or other is self:
            return False
        return NotImplemented

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        if isinstance(other, int):
            return True
        if other is self:
            return False
        return NotImplemented

    def __ge__(self, other) -> bool:
        if isinstance(other, int) or other is self:
            return True
        return NotImplemented


INFINITY = _InfinityType()

ExtNat = Union[int, _InfinityType]


def is_infinite(d: ExtNat) -> bool:
    return d is INFINITY


def unit_reciprocal(d: ExtNat) -> Fraction:
    """1/d for a finite digit, 0 for INFINITY (the c/inf = 0 convention)."""
    if d is INFINITY:
        return Fraction(0)
    if not isinstance(d, int) or d < 1:
        raise DomainError(f"digit must be a positive integer or INFINITY, got {d!r}")
    return Fraction(1, d)


def _require_unit(x: Fraction) -> None:
    if not (0 <= x <= 1):
        raise DomainError(f"value {x} lies outside [0, 1]")


def floor_reciprocal(x: Fraction) -> ExtNat:
    """floor(1/x) for x in (0, 1]; INFINITY for x = 0.

    This is the greedy digit map: for x = p/q in lowest terms the result
    is the exact integer quotient q // p.
    """
    x = Fraction(x)
    _require_unit(x)
    if x == 0:
        return INFINITY
    return x.denominator // x.numerator


def integer_root(m: int, p: int) -> int:
    """floor(m ** (1/p)) for m >= 0, p >= 1, by integer Newton iteration."""
    if p < 1:
        raise DomainError("root degree must be >= 1")
    if m < 0:
        raise DomainError("radicand must be non-negative")
    if p == 1 or m in (0, 1):
        return m
    if p == 2:
        return math.isqrt(m)
    if m.bit_length() <= p:
        # m < 2**p means the root is 1 (m >= 2 here).
        return 1
    x = 1 << -(-m.bit_length() // p)  # 2**ceil(bits/p) >= m**(1/p)
    while True:
        y = ((p - 1) * x + m // x ** (p - 1)) // p
        if y >= x:
            break
        x = y
    while x**p > m:
        x -= 1
    return x


def floor_root_power(n: int, p: int, q: int) -> int:
    """Exact floor(n ** (q/p)) for naturals n, p, q >= 1.

    Computed as the integer p-th root of n**q; no floating point.
    """
    if n < 1 or p < 1 or q < 1:
        raise DomainError("floor_root_power requires n, p, q >= 1")
    return integer_root(n**q, p)


def ceil_root_power(n: int, p: int, q: int) -> int:
    """Exact ceil(n ** (q/p)) for naturals n, p, q >= 1."""
    r = floor_root_power(n, p, q)
    if r**p == n**q:
        return r
    return r + 1


@dataclass(frozen=True)
class Enclosure:
    """A closed rational interval [lo, hi] certified to contain a real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise DomainError(f"enclosure bounds out of order: [{self.lo}, {self.hi}]")

    @staticmethod
    def exact(value) -> "Enclosure":
        v = Fraction(value)
        return Enclosure(v, v)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, value) -> bool:
        return self.lo <= Fraction(value) <= self.hi

    def contains_enclosure(self, other: "Enclosure") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __add__(self, other):
        if isinstance(other, Enclosure):
            return Enclosure(self.lo + other.lo, self.hi + other.hi)
        o = Fraction(other)
        return Enclosure(self.lo + o, self.hi + o)

    def __sub__(self, other):
        if isinstance(other, Enclosure):
            return Enclosure(self.lo - other.hi, self.hi - other.lo)
        o = Fraction(other)
        return Enclosure(self.lo - o, self.hi - o)

    def scale(self, c) -> "Enclosure":
        """Multiply by a non-negative rational scalar."""
        c = Fraction(c)
        if c < 0:
            raise DomainError("scale expects a non-negative scalar")
        return Enclosure(self.lo * c, self.hi * c)

    def mul_pos(self, other: "Enclosure") -> "Enclosure":
        """Interval product; both operands must be non-negative."""
        if self.lo < 0 or other.lo < 0:
            raise DomainError("mul_pos expects non-negative enclosures")
        return Enclosure(self.lo * other.lo, self.hi * other.hi)

    def div_pos(self, other: "Enclosure") -> "Enclosure":
        """Interval quotient; the divisor must be strictly positive."""
        if other.lo <= 0:
            raise DomainError("div_pos expects a strictly positive divisor")
        if self.lo < 0:
            raise DomainError("div_pos expects a non-negative dividend")
        return Enclosure(self.lo / other.hi, self.hi / other.lo)

    def round_outward(self, frac_bits: int) -> "Enclosure":
        """Widen to dyadic endpoints with denominator 2**frac_bits."""
        scale = 1 << frac_bits
        lo = Fraction(math.floor(self.lo * scale), scale)
        hi = Fraction(math.ceil(self.hi * scale), scale)
        return Enclosure(lo, hi)


@dataclass(frozen=True)
class RatInterval:
    """A closed rational subinterval of the unit interval [0, 1]."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not (0 <= lo <= hi <= 1):
            raise DomainError(f"interval [{lo}, {hi}] is not within [0, 1]")

    @staticmethod
    def point(x) -> "RatInterval":
        x = Fraction(x)
        return RatInterval(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    def contains_interval(self, other: "RatInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def strictly_contains_interval(self, other: "RatInterval") -> bool:
        return self.lo < other.lo and other.hi < self.hi


UNIT_INTERVAL = RatInterval(Fraction(0), Fraction(1))


_LOG2_CACHE: dict[tuple[int, int], Enclosure] = {}


def _log2_mantissa_bits(n: int, e: int, steps: int, precision: int):
    """One attempt at extracting `steps` fractional bits of log2(n / 2**e).

    Maintains a certified scaled interval around the mantissa under
    repeated squaring with outward truncation.  Returns the accumulated
    bit integer, or None if the interval ever straddles the threshold 2
    (retry at higher working precision).
    """
    if e <= precision:
        a = n << (precision - e)
        b = a
    else:
        a = n >> (e - precision)
        b = a + 1
    two = 2 << precision
    acc = 0
    for _ in range(steps):
        a = (a * a) >> precision
        b = ((b * b) >> precision) + 1
        acc <<= 1
        if a >= two:
            acc += 1
            a >>= 1
            b = (b >> 1) + (b & 1)
        elif b >= two:
            return None
    return acc


def log2_enclosure(n: int, frac_bits: int = 32) -> Enclosure:
    """Certified rational enclosure of log2(n), width <= 2**-frac_bits.

    Exact for powers of two.  Otherwise the mantissa is squared
    repeatedly with truncation, which brackets log2 by pure integer
    comparisons; the working precision is doubled on the rare occasions
    the truncated interval cannot decide an output bit.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError("log2_enclosure requires a positive integer")
    key = (n, frac_bits)
    hit = _LOG2_CACHE.get(key)
    if hit is not None:
        return hit
    e = n.bit_length() - 1
    if n == (1 << e):
        enc = Enclosure.exact(e)
        _LOG2_CACHE[key] = enc
        return enc
    steps = frac_bits + 1
    precision = 2 * steps + 16
    while True:
        acc = _log2_mantissa_bits(n, e, steps, precision)
        if acc is not None:
            break
        precision *= 2
    denom = 1 << steps
    enc = Enclosure(e + Fraction(acc, denom), e + Fraction(acc + 1, denom))
    _LOG2_CACHE[key] = enc
    return enc


_LN2_CACHE: dict[int, Enclosure] = {}


def ln2_enclosure(frac_bits: int = 64) -> Enclosure:
    """Certified enclosure of ln 2 from the exact series sum 1/(k 2^k)."""
    hit = _LN2_CACHE.get(frac_bits)
    if hit is not None:
        return hit
    terms = frac_bits + 8
    s = Fraction(0)
    for k in range(1, terms + 1):
        s += Fraction(1, k << k)
    # Tail sum_{k>K} 1/(k 2^k) < 2^-K / (K+1).
    tail = Fraction(1, (terms + 1) << terms)
    enc = Enclosure(s, s + tail)
    _LN2_CACHE[frac_bits] = enc
    return enc


def ln_enclosure(n: int, frac_bits: int = 32) -> Enclosure:
    """Certified enclosure of the natural logarithm of a positive integer."""
    if n == 1:
        return Enclosure.exact(0)
    return log2_enclosure(n, frac_bits).mul_pos(ln2_enclosure(frac_bits))


def pow_enclosure(base: int, exponent: Fraction, frac_bits: int = 64) -> Enclosure:
    """Certified enclosure of base**exponent for integer base >= 1.

    Rational exponents are handled by scaled integer roots:
    base**(u/v) * 2**t lies in [r, r+1] for r = floor-root of
    base**u << (v*t).  Negative exponents go through the reciprocal.
    """
    if base < 1:
        raise DomainError("pow_enclosure requires base >= 1")
    exponent = Fraction(exponent)
    if exponent == 0 or base == 1:
        return Enclosure.exact(1)
    if exponent < 0:
        pos = pow_enclosure(base, -exponent, frac_bits)
        return Enclosure(1 / pos.hi, 1 / pos.lo)
    u, v = exponent.numerator, exponent.denominator
    power = base**u
    if v == 1:
        return Enclosure.exact(power)
    r = integer_root(power << (v * frac_bits), v)
    scale = 1 << frac_bits
    if (r % scale == 0) and (r // scale) ** v == power:
        return Enclosure.exact(Fraction(r, scale))
    return Enclosure(Fraction(r, scale), Fraction(r + 1, scale))
