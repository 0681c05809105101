from fractions import Fraction as F

import pytest

from shadow_obstruct.intervals import (
    RatInterval,
    as_interval,
    det_enclosure,
    exact_nth_root,
    exp_enclosure,
    leading_minors_positive,
    ln2_enclosure,
    ln_enclosure,
    nth_root_enclosure,
    pow_rat_enclosure,
)

LN2 = F("0.693147180559945")
LN3 = F("1.098612288668110")
E = F("2.718281828459045")


def test_interval_arithmetic_basics():
    a = RatInterval(F(1), F(2))
    b = RatInterval(F(-1), F(1, 2))
    assert (a + b).lo == 0 and (a + b).hi == F(5, 2)
    assert (a * b).lo == -2 and (a * b).hi == 1
    assert (-a).lo == -2
    assert (a - a).contains(0)
    assert a.sign() == 1 and b.sign() is None
    assert RatInterval.point(0).sign() == 0
    with pytest.raises(ZeroDivisionError):
        a / b


def test_exp_enclosures():
    for x, ref in ((0, F(1)), (1, E), (-1, 1 / E)):
        iv = exp_enclosure(x, F(1, 10**9))
        assert iv.width <= F(1, 10**9)
        assert abs(iv.mid - ref) < F(1, 10**8)
    big = exp_enclosure(10, F(1, 10**6))
    assert abs(big.mid - F("22026.4657948")) < F(1, 10**2)


def test_ln_enclosures():
    assert abs(ln2_enclosure(F(1, 10**12)).mid - LN2) < F(1, 10**11)
    assert abs(ln_enclosure(3, F(1, 10**12)).mid - LN3) < F(1, 10**11)
    assert ln_enclosure(1).contains(0)
    half = ln_enclosure(F(1, 2), F(1, 10**9))
    assert abs(half.mid + LN2) < F(1, 10**8)
    # consistency: ln 2 + ln 3 must overlap ln 6
    lhs = ln_enclosure(2, F(1, 10**12)) + ln_enclosure(3, F(1, 10**12))
    rhs = ln_enclosure(6, F(1, 10**12))
    assert lhs.lo <= rhs.hi and rhs.lo <= lhs.hi


def test_roots_exact_and_enclosed():
    assert exact_nth_root(F(4), 2) == 2
    assert exact_nth_root(F(27, 8), 3) == F(3, 2)
    assert exact_nth_root(F(2), 2) is None
    r = nth_root_enclosure(2, 2, F(1, 10**10))
    assert abs(r.mid - F("1.41421356237")) < F(1, 10**9)
    assert pow_rat_enclosure(4, F(1, 2)) == 2
    assert pow_rat_enclosure(2, 3) == 8
    v = pow_rat_enclosure(2, F(5, 2), F(1, 10**9))
    assert isinstance(v, RatInterval)
    assert abs(v.mid - F("5.65685424949")) < F(1, 10**8)


def test_det_enclosure_matches_exact():
    M = [[as_interval(F(2)), as_interval(F(1))], [as_interval(F(1)), as_interval(F(2))]]
    d = det_enclosure(M)
    assert d.lo == d.hi == 3


def test_leading_minors_positive():
    pd = [[as_interval(F(2)), as_interval(F(1))], [as_interval(F(1)), as_interval(F(2))]]
    assert leading_minors_positive(pd) is True
    nd = [[as_interval(F(-1))]]
    assert leading_minors_positive(nd) is False
    wide = [[RatInterval(F(-1), F(1))]]
    assert leading_minors_positive(wide) is None
    # a certainly negative later minor beats an uncertain earlier one
    mixed = [
        [RatInterval(F(-1), F(1)), as_interval(F(4))],
        [as_interval(F(4)), as_interval(F(1))],
    ]
    assert leading_minors_positive(mixed) is False
