"""Convergence-exponent machinery: growth ratios, window estimates,
analytic certificates, and partial sums of reciprocal digit powers.

The exponent of a digit sequence is the limsup of log n / log d_n. A
finite window can only ever diagnose that limsup, never certify it, so
window scans return certified enclosures of the window maximum (computed
with exact log enclosures) and certificates come exclusively from the
analytic rule families.  Window scans look at the upper half
[ceil(n/2), n] of the index range: the limsup is a tail quantity and
early indices would otherwise dominate every diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .arith import (
    DomainError,
    Enclosure,
    INFINITY,
    RatInterval,
    UncertifiedRuleError,
    integer_root,
    log2_enclosure,
)
from .pierce import DigitStatus, safe_digits
from .rules import DigitRule
from .space import PierceSeq

__all__ = [
    "Verdict",
    "ExponentEstimate",
    "PowerSumPartial",
    "growth_ratio",
    "exponent_window",
    "estimate_exponent",
    "estimate_point_exponent",
    "certified_exponent",
    "reciprocal_power_sum",
    "classify_divergence",
]

DEFAULT_SCAN_BITS = 32

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Verdict(Enum):
    DIVERGENT = "divergent"
    CONVERGENT = "convergent"
    UNKNOWN = "unknown"


def growth_ratio(seq: PierceSeq, n: int, bits: int = DEFAULT_SCAN_BITS) -> Enclosure:
    """Certified enclosure of log n / log d_n for n >= 2; exact 0 at d_n = INFINITY.

    Lies in [0, 1] because strictly increasing digits satisfy d_n >= n;
    that same bound is used to tighten the denominator enclosure.
    """
    if n < 2:
        raise DomainError("growth ratios are defined for indices n >= 2")
    num = log2_enclosure(n, bits)
    if seq.is_finite:
        d = seq.term(n)
        if d is INFINITY:
            return Enclosure.exact(0)
        den = log2_enclosure(d, bits)
    else:
        # Terms of an infinite rule are never INFINITY; asking the rule
        # for a log enclosure avoids materialising tower-sized digits.
        den = seq.rule.log2_term(n, bits)
    den_lo = max(den.lo, num.lo)  # d_n >= n
    lo = max(num.lo / den.hi, _ZERO)
    hi = min(num.hi / den_lo, _ONE)
    return Enclosure(lo, hi)


def exponent_window(
    seq: PierceSeq, lo: int, hi: int, bits: int = DEFAULT_SCAN_BITS
) -> Enclosure:
    """Certified enclosure of max growth_ratio over indices lo..hi.

    The pointwise maxima of the individual lower and upper bounds
    enclose the true window maximum.  An empty window (or one past the
    finite digits) gives exact 0, matching the all-INFINITY convention.
    """
    lo = max(lo, 2)
    if seq.is_finite:
        hi = min(hi, seq.depth)
    sup_lo = _ZERO
    sup_hi = _ZERO
    for n in range(lo, hi + 1):
        g = growth_ratio(seq, n, bits)
        if g.lo > sup_lo:
            sup_lo = g.lo
        if g.hi > sup_hi:
            sup_hi = g.hi
    return Enclosure(sup_lo, sup_hi)


@dataclass(frozen=True)
class ExponentEstimate:
    """Window diagnostic for the convergence exponent.

    `sup` encloses the exact maximum growth ratio over the window.
    `certified` is set only when an analytic certificate applies
    (terminated rational orbits); window data never certifies a limsup.
    """

    window_lo: int
    window_hi: int
    sup: Enclosure
    certified: bool
    certificate: Optional[Fraction]
    certified_depth: Optional[int] = None
    status: Optional[DigitStatus] = None

    def __post_init__(self):
        if self.certified and self.certificate is None:
            raise DomainError("a certified estimate must carry its certificate")

    @property
    def sup_value(self) -> Fraction:
        return self.sup.midpoint


def _half_window(n_eff: int) -> tuple[int, int]:
    return max(2, -(-n_eff // 2)), n_eff


def estimate_exponent(
    seq: PierceSeq, n_max: int, bits: int = DEFAULT_SCAN_BITS
) -> ExponentEstimate:
    """Scan the tail window [ceil(n_max/2), n_max] of a sequence."""
    if n_max < 2:
        raise DomainError("n_max must be at least 2")
    lo, hi = _half_window(n_max)
    sup = exponent_window(seq, lo, hi, bits)
    return ExponentEstimate(lo, hi, sup, certified=False, certificate=None)


def estimate_point_exponent(
    x: RatInterval, n_max: int, bits: int = DEFAULT_SCAN_BITS
) -> ExponentEstimate:
    """Window diagnostic for a point given as a rational enclosure.

    Runs the safe digit extraction to at most n_max digits and scans the
    certified prefix only.  A terminated orbit proves the point rational,
    whose exponent is exactly 0 regardless of the window diagnostic, so
    that case is reported certified.
    """
    result = safe_digits(x, n_max)
    n_eff = len(result.prefix)
    seq = PierceSeq.finite(result.prefix)
    lo, hi = _half_window(n_eff)
    sup = exponent_window(seq, lo, hi, bits) if n_eff >= 2 else Enclosure.exact(0)
    # A terminated orbit proves the point rational; so does a point
    # enclosure by construction.  Rationals have exponent exactly 0
    # whatever the window diagnostic says.
    rational = result.status is DigitStatus.TERMINATED or x.is_point
    return ExponentEstimate(
        lo,
        hi,
        sup,
        certified=rational,
        certificate=Fraction(0) if rational else None,
        certified_depth=n_eff,
        status=result.status,
    )


def certified_exponent(rule: DigitRule) -> Fraction:
    """The analytic convergence exponent of a certified rule family."""
    cert = rule.certificate
    if cert is None:
        raise UncertifiedRuleError(
            f"rule {rule.describe()} carries no analytic exponent certificate"
        )
    return cert


def classify_divergence(rule: DigitRule, s: Fraction) -> Verdict:
    """Whether sum 1/d_k**s diverges along a rule, for s in (0, 1].

    Decided per family: strictly below the certified exponent the sum
    diverges by comparison with a shifted harmonic series, strictly
    above it converges by a p-series bound, and the boundary s equal to
    the exponent is settled by the family's own comparison.  Uncertified
    rules yield UNKNOWN, never a guess.
    """
    s = Fraction(s)
    if not (0 < s <= 1):
        raise DomainError("the power exponent must lie in (0, 1]")
    diverges = rule.power_sum_diverges(s)
    if diverges is None:
        return Verdict.UNKNOWN
    return Verdict.DIVERGENT if diverges else Verdict.CONVERGENT


@dataclass(frozen=True)
class PowerSumPartial:
    """Partial sum of reciprocal s-th digit powers, as a certified enclosure."""

    s: Fraction
    n_terms: int
    sum: Enclosure
    verdict: Verdict

    @property
    def value(self) -> Fraction:
        return self.sum.lo


def _term_bounds(d: int, p: int, q: int, shift: int) -> tuple[Fraction, Fraction]:
    """Certified bounds for 1/d**(p/q); exact when d**p is a perfect q-th power."""
    v = d**p
    if q == 1:
        t = Fraction(1, v)
        return t, t
    r0 = integer_root(v, q)
    if r0**q == v:
        t = Fraction(1, r0)
        return t, t
    r = integer_root(v << (q * shift), q)
    scale = 1 << shift
    return Fraction(scale, r + 1), Fraction(scale, r)


def reciprocal_power_sum(
    seq: PierceSeq, s: Fraction, n_terms: int, bits: int = 64
) -> PowerSumPartial:
    """Enclosure of sum_{k<=n_terms} 1/d_k**s.

    Terms that are exact rationals (perfect powers, s with denominator 1)
    are accumulated exactly while denominators stay small; the
    accumulator then switches to outward-rounded dyadics so that very
    long slowly divergent sums stay cheap.  Once a term drops below the
    resolution the certified tail bound closes the sum early.
    """
    s = Fraction(s)
    if not (0 < s <= 1):
        raise DomainError("the power exponent must lie in (0, 1]")
    if n_terms < 0:
        raise DomainError("n_terms must be non-negative")
    p, q = s.numerator, s.denominator
    shift = bits + 32
    scale = 1 << shift
    tiny_bits = bits + 8
    exact_lo = _ZERO
    exact_hi = _ZERO
    int_mode = False
    ilo = ihi = 0
    last_digit = 0
    for k in range(1, n_terms + 1):
        d = seq.term(k)
        if d is INFINITY:
            break
        # Strict increase of the digits is what makes the tail bound
        # below sound; enforce it rather than trusting the rule.
        if d <= last_digit:
            raise DomainError(f"rule fails strict increase at index {k}")
        last_digit = d
        # Term below resolution: close with a certified tail bound
        # (terms decrease, so each of the remaining ones is no larger).
        if d.bit_length() * p > tiny_bits * q + p:
            tail_each = Fraction(1, 1 << tiny_bits)
            remaining = n_terms - k + 1
            if int_mode:
                ihi += -((-(remaining * tail_each.numerator) << shift)
                         // tail_each.denominator)
            else:
                exact_hi += remaining * tail_each
            break
        t_lo, t_hi = _term_bounds(d, p, q, shift)
        if int_mode:
            ilo += (t_lo.numerator << shift) // t_lo.denominator
            ihi += -((-t_hi.numerator << shift) // t_hi.denominator)
        else:
            exact_lo += t_lo
            exact_hi += t_hi
            if exact_hi.denominator.bit_length() > 256:
                int_mode = True
                ilo = (exact_lo.numerator << shift) // exact_lo.denominator
                ihi = -((-exact_hi.numerator << shift) // exact_hi.denominator)
    if int_mode:
        total = Enclosure(Fraction(ilo, scale), Fraction(ihi, scale))
    else:
        total = Enclosure(exact_lo, exact_hi)
    if seq.is_finite:
        verdict = Verdict.CONVERGENT  # finitely many finite digits: a finite sum
    else:
        verdict = classify_divergence(seq.rule, s)
    return PowerSumPartial(s, n_terms, total, verdict)
