from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, strategies as st

from padic_hua.qseries import Bracket, pochhammer, pochhammer_inf, truncation_order

small_fractions = st.fractions(min_value=F(0), max_value=F(49, 50),
                               max_denominator=50)


def test_pochhammer_empty_product():
    assert pochhammer(F(1, 2), F(1, 2), 0) == 1
    assert pochhammer(F(7, 3), F(1, 5), 0) == 1


def test_pochhammer_known_values():
    assert pochhammer(F(1, 2), F(1, 2), 2) == F(3, 8)
    assert pochhammer(F(1, 2), F(1, 2), 3) == F(21, 64)


def test_pochhammer_negative_length_rejected():
    with pytest.raises(ValueError):
        pochhammer(F(1, 2), F(1, 2), -1)


@given(a=small_fractions, q=small_fractions, n=st.integers(0, 30))
def test_pochhammer_recurrence(a, q, n):
    assert pochhammer(a, q, n + 1) == pochhammer(a, q, n) * (1 - a * q**n)


def test_inf_bracket_matches_mpmath():
    # Independent oracle: mpmath's q-Pochhammer at 40 digits.
    mpmath.mp.dps = 40
    for a, q in [(F(1, 2), F(1, 2)), (F(1, 3), F(1, 3)), (F(1, 6), F(1, 3))]:
        ref = mpmath.qp(mpmath.mpf(a.numerator) / a.denominator,
                        mpmath.mpf(q.numerator) / q.denominator)
        b = pochhammer_inf(a, q, F(1, 10**12))
        assert float(b.lower) <= float(ref) <= float(b.upper)


def test_inf_bracket_classic_value():
    b = pochhammer_inf(F(1, 2), F(1, 2), F(1, 10**6))
    assert b.width <= F(1, 10**6)
    assert b.contains(F(288788, 10**6)) or (b.lower > F(288788, 10**6))
    assert F(288788, 10**6) <= b.upper <= F(288789, 10**6)
    assert F(288788, 10**6) <= b.lower + b.width


def test_inf_bracket_zero_base_exact():
    b = pochhammer_inf(0, F(1, 2), F(1, 10**9))
    assert b.lower == b.upper == 1


def test_inf_bracket_domain_errors():
    with pytest.raises(ValueError):
        pochhammer_inf(1, F(1, 2), F(1, 10))
    with pytest.raises(ValueError):
        pochhammer_inf(F(3, 2), F(1, 2), F(1, 10))
    with pytest.raises(ValueError):
        pochhammer_inf(F(1, 2), F(3, 2), F(1, 10))
    with pytest.raises(ValueError):
        pochhammer_inf(F(1, 2), F(1, 2), 0)


@given(exp1=st.integers(2, 20), exp2=st.integers(2, 20))
def test_inf_brackets_nested(exp1, exp2):
    eps1, eps2 = F(1, 10**exp1), F(1, 10**exp2)
    if eps1 > eps2:
        eps1, eps2 = eps2, eps1
    tight = pochhammer_inf(F(1, 2), F(1, 2), eps1)
    loose = pochhammer_inf(F(1, 2), F(1, 2), eps2)
    assert loose.encloses(tight)


def test_bracket_contains_head_times_tail_bound():
    a, q, eps = F(1, 3), F(1, 2), F(1, 10**8)
    k = truncation_order(a, q, eps)
    head = pochhammer(a, q, k)
    b = pochhammer_inf(a, q, eps)
    assert b.upper == head
    assert b.lower == head * (1 - a * q**k / (1 - q))


def test_bracket_arithmetic():
    b = Bracket(F(1), F(2))
    c = Bracket(F(-1), F(3))
    assert (b + c) == Bracket(F(0), F(5))
    assert (b - c) == Bracket(F(-2), F(3))
    assert (b * c) == Bracket(F(-2), F(6))
    assert abs(Bracket(F(-3), F(-1))) == Bracket(F(1), F(3))
    assert abs(Bracket(F(-1), F(2))) == Bracket(F(0), F(2))
    assert b.overlaps(c) and not Bracket(F(0), F(1, 2)).overlaps(Bracket(F(3, 4), F(1)))
    assert (b * F(1, 2)) == Bracket(F(1, 2), F(1))
    with pytest.raises(ValueError):
        Bracket(F(2), F(1))
