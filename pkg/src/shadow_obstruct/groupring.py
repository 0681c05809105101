"""Finitely supported elements of the group ring over rational exponents.

An element is a finite sum of terms c * x1^a1 ... xn^an with rational
coefficients and rational exponent vectors, viewed as a function on the
positive orthant.  Exponent comparison is lexicographic throughout the
package and fixed here once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from . import polytope
from .exactcore import Rat
from .intervals import Enclosure, RatInterval, as_interval, pow_rat_enclosure

Exponent = tuple[Rat, ...]


class DimensionMismatch(ValueError):
    pass


class FractionalExponent(ValueError):
    """Sign substitution needs integer exponents."""


class NonpositivePoint(ValueError):
    pass


def make_exponent(coords: Sequence) -> Exponent:
    return tuple(Fraction(c) for c in coords)


def exponent_add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def exponent_scale(a: Exponent, d) -> Exponent:
    d = Fraction(d)
    return tuple(x * d for x in a)


@dataclass(frozen=True)
class GroupRingElement:
    """Finitely supported map from exponent vectors to rational coefficients."""

    n: int
    terms: Mapping[Exponent, Rat] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for e, c in self.terms.items():
            ee = make_exponent(e)
            if len(ee) != self.n:
                raise DimensionMismatch(f"exponent {e} has wrong dimension")
            cc = Fraction(c)
            if cc != 0:
                clean[ee] = cc
        object.__setattr__(self, "terms", clean)

    # --- constructors -------------------------------------------------
    @staticmethod
    def zero(n: int) -> "GroupRingElement":
        return GroupRingElement(n, {})

    @staticmethod
    def monomial(n: int, exponent: Sequence, coeff=1) -> "GroupRingElement":
        return GroupRingElement(n, {make_exponent(exponent): Fraction(coeff)})

    @staticmethod
    def constant(n: int, c) -> "GroupRingElement":
        return GroupRingElement.monomial(n, (0,) * n, c)

    @staticmethod
    def variable(n: int, i: int) -> "GroupRingElement":
        e = [0] * n
        e[i] = 1
        return GroupRingElement.monomial(n, e)

    # --- ring structure -----------------------------------------------
    def _check_dim(self, other: "GroupRingElement"):
        if self.n != other.n:
            raise DimensionMismatch(f"{self.n} vs {other.n}")

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check_dim(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return GroupRingElement(self.n, out)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check_dim(other)
        out: dict[Exponent, Rat] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = exponent_add(e1, e2)
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return GroupRingElement(self.n, out)

    def scale(self, c) -> "GroupRingElement":
        c = Fraction(c)
        return GroupRingElement(self.n, {e: c * v for e, v in self.terms.items()})

    def square(self) -> "GroupRingElement":
        return self * self

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exponent: Sequence) -> Rat:
        return self.terms.get(make_exponent(exponent), Fraction(0))

    def sorted_terms(self) -> list[tuple[Exponent, Rat]]:
        return sorted(self.terms.items())

    def has_integer_exponents(self) -> bool:
        return all(x.denominator == 1 for e in self.terms for x in e)

    def has_nonnegative_exponents(self) -> bool:
        return all(x >= 0 for e in self.terms for x in e)

    # --- substitutions -------------------------------------------------
    def psi(self, d: int) -> "GroupRingElement":
        """x_i -> x_i^d: every exponent is multiplied by d."""
        if d < 1:
            raise ValueError("d must be a positive integer")
        return GroupRingElement(
            self.n, {exponent_scale(e, d): c for e, c in self.terms.items()}
        )

    def phi(self, signs: Sequence[int]) -> "GroupRingElement":
        """x_i -> s_i x_i for s in {+-1}^n; integer exponents required."""
        if len(signs) != self.n or any(s not in (1, -1) for s in signs):
            raise ValueError("signs must be a vector over {1,-1} of length n")
        out = {}
        for e, c in self.terms.items():
            flip = 1
            for s, a in zip(signs, e):
                if a.denominator != 1:
                    raise FractionalExponent(
                        "sign substitution undefined for fractional exponents"
                    )
                if s == -1 and a.numerator % 2 == 1:
                    flip = -flip
            out[e] = out.get(e, Fraction(0)) + flip * c
        return GroupRingElement(self.n, out)

    def substitute_zero(self, i: int) -> "GroupRingElement":
        """Restrict to x_i = 0: drop terms with a positive i-th exponent.

        Terms with a negative exponent on x_i would be singular at 0.
        """
        out = {}
        for e, c in self.terms.items():
            if e[i] < 0:
                raise NonpositivePoint("negative exponent at x_i = 0")
            if e[i] == 0:
                out[e] = c
        return GroupRingElement(self.n, out)

    # --- evaluation ----------------------------------------------------
    def eval_positive(self, x: Sequence, err=Fraction(1, 10**12)) -> Enclosure:
        """Evaluate at a point of the positive orthant.

        Exact Fraction whenever every needed root is rational, otherwise a
        certified interval of width controlled by err.
        """
        xs = [Fraction(v) for v in x]
        if len(xs) != self.n:
            raise DimensionMismatch
        if any(v <= 0 for v in xs):
            raise NonpositivePoint(f"point {x} is not strictly positive")
        nterms = max(1, len(self.terms))
        total: Enclosure = Fraction(0)
        for e, c in self.terms.items():
            term: Enclosure = Fraction(c)
            for xi, ai in zip(xs, e):
                if ai == 0:
                    continue
                p = pow_rat_enclosure(xi, ai, err / (4 * nterms * self.n))
                if isinstance(term, RatInterval) or isinstance(p, RatInterval):
                    term = as_interval(term) * as_interval(p)
                else:
                    term = term * p
            if isinstance(total, RatInterval) or isinstance(term, RatInterval):
                total = as_interval(total) + as_interval(term)
            else:
                total = total + term
        return total

    def __str__(self) -> str:
        from .polytext import format_poly

        return format_poly(self)


@dataclass(frozen=True)
class SupportSet:
    """Finite set of nonnegative integer exponent vectors."""

    n: int
    points: frozenset[tuple[int, ...]]

    def __post_init__(self):
        for p in self.points:
            if len(p) != self.n:
                raise DimensionMismatch(f"point {p} has wrong dimension")
            if any(x < 0 or not isinstance(x, int) for x in p):
                raise ValueError(f"support point {p} is not a nonnegative integer vector")

    @staticmethod
    def of(n: int, points: Iterable[Sequence[int]]) -> "SupportSet":
        return SupportSet(n, frozenset(tuple(int(x) for x in p) for p in points))

    @staticmethod
    def from_element(p: GroupRingElement) -> "SupportSet":
        pts = set()
        for e in p.terms:
            if any(x.denominator != 1 or x < 0 for x in e):
                raise ValueError("support sets need nonnegative integer exponents")
            pts.add(tuple(int(x) for x in e))
        return SupportSet(p.n, frozenset(pts))

    def scaled(self, d: int) -> "SupportSet":
        return SupportSet(self.n, frozenset(tuple(d * x for x in p) for p in self.points))

    def sorted_points(self) -> list[tuple[int, ...]]:
        return sorted(self.points)

    def __len__(self) -> int:
        return len(self.points)


def newton_bases(S: SupportSet, d: int = 1) -> tuple[SupportSet, SupportSet]:
    """Monomial bases from the Newton polytope of d*S.

    T1 collects the integer points of conv(d*S); T2 those of its half,
    i.e. the candidate support of any square summand.  Membership is
    decided per lattice point by exact LP feasibility.
    """
    if not S.points:
        raise ValueError("support set is empty")
    pts = [tuple(d * x for x in p) for p in S.sorted_points()]
    t1 = polytope.lattice_points_in_hull(pts)
    t2 = polytope.lattice_points_in_half_hull(pts)
    return SupportSet.of(S.n, t1), SupportSet.of(S.n, t2)


def newton_half_basis(S: SupportSet, d: int = 1) -> SupportSet:
    """Just T2 (square-summand support); T1 enumeration can be much larger."""
    if not S.points:
        raise ValueError("support set is empty")
    pts = [tuple(d * x for x in p) for p in S.sorted_points()]
    return SupportSet.of(S.n, polytope.lattice_points_in_half_hull(pts))
