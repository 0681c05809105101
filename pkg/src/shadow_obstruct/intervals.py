"""Certified rational interval arithmetic.

Enclosures for exp, ln and q-th roots are computed from truncated series
with explicit rational remainder bounds, so every interval returned here
provably contains the exact real value.  All endpoints are Fractions; no
floating point enters any bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .exactcore import Rat


class PrecisionInsufficient(ArithmeticError):
    """Raised when a certified decision cannot be made at the precision cap."""


@dataclass(frozen=True)
class RatInterval:
    lo: Rat
    hi: Rat

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @staticmethod
    def point(x) -> "RatInterval":
        x = Fraction(x)
        return RatInterval(x, x)

    @property
    def width(self) -> Rat:
        return self.hi - self.lo

    @property
    def mid(self) -> Rat:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def sign(self) -> Optional[int]:
        """+1 / -1 / 0 when certain, None when the interval straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 and self.hi == 0:
            return 0
        return None

    def __add__(self, other):
        other = as_interval(other)
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-as_interval(other))

    def __rsub__(self, other):
        return as_interval(other) + (-self)

    def __mul__(self, other):
        other = as_interval(other)
        cands = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return RatInterval(min(cands), max(cands))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_interval(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval divisor straddles zero")
        cands = (
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        )
        return RatInterval(min(cands), max(cands))

    def pow_int(self, k: int) -> "RatInterval":
        if k < 0:
            return RatInterval.point(1) / self.pow_int(-k)
        out = RatInterval.point(1)
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


Enclosure = Union[Rat, RatInterval]


def as_interval(x: Enclosure) -> RatInterval:
    if isinstance(x, RatInterval):
        return x
    return RatInterval.point(Fraction(x))


def enclosure_sign(x: Enclosure) -> Optional[int]:
    if isinstance(x, RatInterval):
        return x.sign()
    x = Fraction(x)
    return (x > 0) - (x < 0)


def _exp_unit(y: Rat, err: Rat) -> RatInterval:
    """exp(y) for |y| <= 1, series plus remainder bound 2*|y|^(N+1)/(N+1)!."""
    assert abs(y) <= 1
    term = Fraction(1)
    total = Fraction(1)
    k = 0
    while True:
        k += 1
        term = term * y / k
        total += term
        # |remaining tail| <= 2 * |next term|
        bound = 2 * abs(term * y) / (k + 1)
        if bound < err:
            return RatInterval(total - bound, total + bound)


def exp_enclosure(x, err=Fraction(1, 10**12)) -> RatInterval:
    """Certified enclosure of exp(x) for rational x."""
    x = Fraction(x)
    err = Fraction(err)
    m = max(1, abs(x.numerator) // x.denominator + 1) if x != 0 else 1
    y = x / m
    # total width after m-fold interval power is roughly m * e^|x| * unit-width
    for shift in (20, 40, 80, 160, 320):
        unit = _exp_unit(y, err / Fraction(2) ** shift)
        out = unit.pow_int(m)
        if out.width <= err:
            return out
    raise PrecisionInsufficient(f"exp({x}) at width {err}")


def _atanh_series(t: Rat, err: Rat) -> RatInterval:
    """atanh(t) for |t| < 1 via odd series with geometric tail bound."""
    assert abs(t) < 1
    t2 = t * t
    term = t
    total = t
    k = 0
    while True:
        k += 1
        term = term * t2
        total += term / (2 * k + 1)
        bound = abs(term * t2) / ((2 * k + 3) * (1 - t2))
        if bound < err:
            return RatInterval(total - bound, total + bound)


_LN2_CACHE: dict[Rat, RatInterval] = {}


def ln2_enclosure(err=Fraction(1, 10**12)) -> RatInterval:
    err = Fraction(err)
    hit = _LN2_CACHE.get(err)
    if hit is None:
        hit = _atanh_series(Fraction(1, 3), err / 2) * 2
        _LN2_CACHE[err] = hit
    return hit


def ln_enclosure(q, err=Fraction(1, 10**12)) -> RatInterval:
    """Certified enclosure of ln(q) for rational q > 0."""
    q = Fraction(q)
    err = Fraction(err)
    if q <= 0:
        raise ValueError("ln requires a positive argument")
    if q < 1:
        return -ln_enclosure(1 / q, err)
    # reduce to [3/4, 3/2] by factoring out powers of two
    k = 0
    while q > Fraction(3, 2):
        q /= 2
        k += 1
    parts = k + 1
    out = ln2_enclosure(err / (2 * parts)) * k if k else RatInterval.point(0)
    t = (q - 1) / (q + 1)
    if t != 0:
        out = out + _atanh_series(t, err / (4 * parts)) * 2
    if out.width > err:
        raise PrecisionInsufficient(f"ln({q}) at width {err}")
    return out


def _int_nth_root_floor(a: int, n: int) -> int:
    """floor(a**(1/n)) for a >= 0 using integer Newton iteration."""
    if a < 2:
        return a
    x = 1 << ((a.bit_length() + n - 1) // n)
    while True:
        y = ((n - 1) * x + a // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    while x**n > a:
        x -= 1
    return x


def exact_nth_root(q: Rat, n: int) -> Optional[Rat]:
    """q**(1/n) when it is rational (q >= 0), else None."""
    q = Fraction(q)
    if q < 0:
        return None
    rn = _int_nth_root_floor(q.numerator, n)
    rd = _int_nth_root_floor(q.denominator, n)
    if rn**n == q.numerator and rd**n == q.denominator:
        return Fraction(rn, rd)
    return None


def nth_root_enclosure(q, n: int, err=Fraction(1, 10**12)) -> RatInterval:
    """Certified enclosure of q**(1/n), q >= 0, by dyadic bisection."""
    q = Fraction(q)
    err = Fraction(err)
    if q < 0:
        raise ValueError("even roots of negative rationals are not real")
    exact = exact_nth_root(q, n)
    if exact is not None:
        return RatInterval.point(exact)
    lo = Fraction(0)
    hi = max(Fraction(1), q)
    while hi - lo > err:
        mid = (lo + hi) / 2
        if mid**n <= q:
            lo = mid
        else:
            hi = mid
    return RatInterval(lo, hi)


def pow_rat_enclosure(base, expo, err=Fraction(1, 10**12)) -> Enclosure:
    """base**expo for rational base > 0 and rational exponent.

    Returns an exact Fraction whenever the needed root is rational,
    otherwise a certified interval of width <= err.
    """
    base = Fraction(base)
    expo = Fraction(expo)
    if base <= 0:
        raise ValueError("base must be positive")
    p, q = expo.numerator, expo.denominator
    powed = base**p
    if q == 1:
        return powed
    exact = exact_nth_root(powed, q)
    if exact is not None:
        return exact
    return nth_root_enclosure(powed, q, err)


def det_enclosure(M: list[list[Enclosure]]) -> RatInterval:
    """Interval determinant by cofactor expansion (small matrices only)."""
    n = len(M)
    if n == 0:
        return RatInterval.point(1)
    if n == 1:
        return as_interval(M[0][0])
    total: Enclosure = Fraction(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = as_interval(M[0][j]) * det_enclosure(minor)
        total = as_interval(total) + (term if j % 2 == 0 else -term)
    return as_interval(total)


def leading_minors_positive(M: list[list[Enclosure]]) -> Optional[bool]:
    """Certified Sylvester test: True if PD, False if some minor < 0 or the
    matrix is certainly not PD, None when undecidable at this precision."""
    n = len(M)
    undecided = False
    for k in range(1, n + 1):
        sub = [row[:k] for row in M[:k]]
        s = det_enclosure(sub).sign()
        if s is None:
            undecided = True
        elif s <= 0:
            return False
    return None if undecided else True
