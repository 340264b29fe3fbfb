from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from piercelab.arith import DomainError, INFINITY, RatInterval
from piercelab.pierce import (
    DigitStatus,
    digit_step,
    digits_rational,
    partial_sums,
    safe_digits,
    shift_orbit,
)
from piercelab.space import PierceSeq, expansion_value

unit_fractions = st.fractions(min_value=0, max_value=1, max_denominator=10**6)


class TestDigitStep:
    def test_branches(self):
        assert digit_step(F(0)) == (INFINITY, F(0))
        assert digit_step(F(1)) == (1, F(0))
        assert digit_step(F(7, 10)) == (1, F(3, 10))

    def test_domain(self):
        with pytest.raises(DomainError):
            digit_step(F(11, 10))

    @given(unit_fractions.filter(lambda x: x > 0))
    def test_numerator_strictly_decreases(self, x):
        d, t = digit_step(x)
        assert 0 <= t <= 1
        assert t.numerator < x.numerator or t == 0


class TestDigitsRational:
    def test_examples(self):
        assert digits_rational(F(0)) == ()
        assert digits_rational(F(1)) == (1,)
        assert digits_rational(F(2, 3)) == (1, 3)
        assert digits_rational(F(7, 10)) == (1, 3, 10)

    @given(unit_fractions)
    def test_strictly_increasing_and_short(self, x):
        digits = digits_rational(x)
        assert all(a < b for a, b in zip(digits, digits[1:]))
        assert len(digits) <= max(x.numerator, 1)

    @given(unit_fractions.filter(lambda x: 0 < x < 1))
    def test_last_gap_at_least_two(self, x):
        # The greedy remainder never lands exactly on 1/(d+1), so the
        # final digit always jumps by at least 2.
        digits = digits_rational(x)
        if len(digits) >= 2:
            assert digits[-1] - digits[-2] >= 2

    @given(unit_fractions)
    def test_round_trip(self, x):
        assert expansion_value(PierceSeq.finite(digits_rational(x))) == x


class TestPartialSums:
    def test_examples(self):
        assert partial_sums([2]) == [F(1, 2)]
        assert partial_sums([1, 3, 10]) == [F(1), F(2, 3), F(7, 10)]
        assert partial_sums([1, 2]) == [F(1), F(1, 2)]

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            partial_sums([])

    @given(st.lists(st.integers(1, 40), min_size=1, max_size=8, unique=True))
    def test_alternating_nesting(self, raw):
        digits = tuple(sorted(raw))
        sums = partial_sums(digits)
        odd = sums[0::2]
        even = sums[1::2]
        # s_2 <= s_4 <= ... <= s_3 <= s_1
        assert all(a <= b for a, b in zip(even, even[1:]))
        assert all(a >= b for a, b in zip(odd, odd[1:]))
        if even:
            assert max(even) <= min(odd)


class TestShiftOrbit:
    def test_examples(self):
        assert shift_orbit(F(7, 10), 3) == [F(3, 10), F(1, 10), F(0)]
        assert shift_orbit(F(0), 3) == [F(0), F(0), F(0)]
        assert shift_orbit(F(1, 2), 2) == [F(0), F(0)]

    @given(unit_fractions)
    def test_sandwich(self, x):
        # 1/(d_{k+1} + 1) <= T^k(x) <= 1/d_{k+1}, exactly at every step
        digits = digits_rational(x)
        orbit = [x] + shift_orbit(x, len(digits))
        for k, d in enumerate(digits):
            t = orbit[k]
            assert F(1, d + 1) <= t <= F(1, d)


class TestSafeDigits:
    def test_ambiguous_example(self):
        res = safe_digits(RatInterval(F(2, 5), F(9, 20)), 5)
        assert res.prefix == (2,)
        assert res.status is DigitStatus.AMBIGUOUS

    def test_point_terminates(self):
        res = safe_digits(RatInterval.point(F(1, 3)), 5)
        assert res.prefix == (3,)
        assert res.status is DigitStatus.TERMINATED

    def test_full_interval(self):
        res = safe_digits(RatInterval(F(0), F(1)), 5)
        assert res.prefix == ()
        assert res.status is DigitStatus.AMBIGUOUS

    def test_exhausted(self):
        res = safe_digits(RatInterval.point(F(7, 10)), 2)
        assert res.prefix == (1, 3)
        assert res.status is DigitStatus.EXHAUSTED

    @given(
        unit_fractions,
        st.fractions(min_value=0, max_value=F(1, 100), max_denominator=10**6),
        st.fractions(min_value=0, max_value=1, max_denominator=97),
    )
    @settings(max_examples=80)
    def test_soundness(self, lo, width, pick):
        # Any rational inside the enclosure extends the certified prefix.
        hi = min(lo + width, F(1))
        res = safe_digits(RatInterval(lo, hi), 12)
        y = lo + pick * (hi - lo)
        digits = digits_rational(y)
        assert digits[: len(res.prefix)] == res.prefix
