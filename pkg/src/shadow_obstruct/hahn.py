"""Truncated Hahn series over lex-ordered rational exponent vectors.

A series is a finite, lex-sorted list of (exponent, coefficient) terms
together with a truncation marker: every stored exponent is strictly below
``trunc`` and nothing is claimed about higher order.  ``trunc=None`` means
the series is exact.  Arithmetic tracks the guaranteed-correct prefix; an
operation that cannot certify any prefix raises instead of degrading
silently.

Coefficients are rationals, or certified rational intervals when a series
has passed through a coefficient map that is only known by enclosure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .exactcore import Rat
from .intervals import (
    Enclosure,
    RatInterval,
    as_interval,
    enclosure_sign,
    exact_nth_root,
)

Exponent = tuple[Rat, ...]


class DivisionByZero(ZeroDivisionError):
    pass


class TruncationExhausted(ArithmeticError):
    """No prefix of the result can be certified."""


class NegativeElement(ValueError):
    pass


class NegativeValuation(ValueError):
    pass


class IndeterminateAtTruncation(ArithmeticError):
    pass


class NotRepresentable(ValueError):
    """The result needs coefficients outside Q (e.g. sqrt of a non-square)."""


def _exp(coords: Sequence) -> Exponent:
    return tuple(Fraction(c) for c in coords)


def _exp_add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def _coeff_is_zero(c: Enclosure) -> bool:
    if isinstance(c, RatInterval):
        return c.lo == 0 and c.hi == 0
    return c == 0


def _tmin(a: Optional[Exponent], b: Optional[Exponent]) -> Optional[Exponent]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True)
class Valuation:
    """min exponent of the support; value None encodes +infinity."""

    value: Optional[Exponent]

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __le__(self, other: "Valuation") -> bool:
        if self.value is None:
            return other.value is None
        if other.value is None:
            return True
        return self.value <= other.value


@dataclass(frozen=True)
class HahnSeries:
    n: int
    terms: tuple[tuple[Exponent, Enclosure], ...] = ()
    trunc: Optional[Exponent] = None

    def __post_init__(self):
        clean = []
        for e, c in self.terms:
            ee = _exp(e)
            if len(ee) != self.n:
                raise ValueError(f"exponent {e} has wrong dimension")
            if self.trunc is not None and ee >= self.trunc:
                continue
            if not _coeff_is_zero(c):
                clean.append((ee, c))
        clean.sort(key=lambda t: t[0])
        for (e1, _), (e2, _) in zip(clean, clean[1:]):
            if e1 == e2:
                raise ValueError("duplicate exponent in term list")
        object.__setattr__(self, "terms", tuple(clean))
        if self.trunc is not None:
            object.__setattr__(self, "trunc", _exp(self.trunc))

    # --- constructors ---------------------------------------------------
    @staticmethod
    def from_dict(n: int, terms: dict, trunc=None) -> "HahnSeries":
        return HahnSeries(n, tuple(terms.items()), trunc)

    @staticmethod
    def zero(n: int, trunc=None) -> "HahnSeries":
        return HahnSeries(n, (), trunc)

    @staticmethod
    def one(n: int) -> "HahnSeries":
        return HahnSeries(n, (((Fraction(0),) * n, Fraction(1)),))

    @staticmethod
    def eps(n: int, exponent, coeff=1) -> "HahnSeries":
        """The monomial coeff * eps^exponent (exact)."""
        return HahnSeries(n, ((_exp(exponent), Fraction(coeff)),))

    @staticmethod
    def scalar(n: int, c) -> "HahnSeries":
        return HahnSeries(n, (((Fraction(0),) * n, Fraction(c)),))

    # --- structure ------------------------------------------------------
    def is_exact(self) -> bool:
        return self.trunc is None

    def is_zero_to_trunc(self) -> bool:
        return not self.terms

    def is_exactly_zero(self) -> bool:
        return not self.terms and self.trunc is None

    def valuation(self) -> Valuation:
        if not self.terms:
            return Valuation(None)
        return Valuation(self.terms[0][0])

    def _vbound(self) -> Optional[Exponent]:
        """Exponent e with series = O(eps^e): valuation if nonzero else trunc."""
        if self.terms:
            return self.terms[0][0]
        return self.trunc  # zero-to-trunc; exact zero gives None = O(inf)

    def leading(self) -> tuple[Exponent, Enclosure]:
        if not self.terms:
            raise DivisionByZero("series is zero up to truncation")
        return self.terms[0]

    def sign(self) -> Optional[int]:
        """Sign of the leading coefficient; 0 for the (truncated) zero series.

        None only when the leading coefficient is an interval straddling 0.
        """
        if not self.terms:
            return 0
        return enclosure_sign(self.terms[0][1])

    def with_trunc(self, trunc) -> "HahnSeries":
        t = _exp(trunc) if trunc is not None else None
        return HahnSeries(self.n, self.terms, _tmin(self.trunc, t))

    def coefficient(self, exponent) -> Enclosure:
        e = _exp(exponent)
        for ee, c in self.terms:
            if ee == e:
                return c
        return Fraction(0)

    # --- arithmetic -------------------------------------------------------
    def _check(self, other: "HahnSeries"):
        if self.n != other.n:
            raise ValueError("value-group dimension mismatch")

    def __add__(self, other: "HahnSeries") -> "HahnSeries":
        self._check(other)
        acc: dict[Exponent, Enclosure] = dict(self.terms)
        for e, c in other.terms:
            if e in acc:
                a, b = acc[e], c
                if isinstance(a, RatInterval) or isinstance(b, RatInterval):
                    acc[e] = as_interval(a) + as_interval(b)
                else:
                    acc[e] = a + b
            else:
                acc[e] = c
        return HahnSeries.from_dict(self.n, acc, _tmin(self.trunc, other.trunc))

    def __neg__(self) -> "HahnSeries":
        return HahnSeries(
            self.n, tuple((e, -c) for e, c in self.terms), self.trunc
        )

    def __sub__(self, other: "HahnSeries") -> "HahnSeries":
        return self + (-other)

    def __mul__(self, other: "HahnSeries") -> "HahnSeries":
        self._check(other)
        if self.is_exactly_zero() or other.is_exactly_zero():
            return HahnSeries.zero(self.n)
        tr = None
        if other.trunc is not None:
            va = self._vbound()
            tr = _tmin(tr, _exp_add(va, other.trunc) if va is not None else None)
        if self.trunc is not None:
            vb = other._vbound()
            tr = _tmin(tr, _exp_add(vb, self.trunc) if vb is not None else None)
        acc: dict[Exponent, Enclosure] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = _exp_add(e1, e2)
                if tr is not None and e >= tr:
                    continue
                prod: Enclosure
                if isinstance(c1, RatInterval) or isinstance(c2, RatInterval):
                    prod = as_interval(c1) * as_interval(c2)
                else:
                    prod = c1 * c2
                if e in acc:
                    a = acc[e]
                    if isinstance(a, RatInterval) or isinstance(prod, RatInterval):
                        acc[e] = as_interval(a) + as_interval(prod)
                    else:
                        acc[e] = a + prod
                else:
                    acc[e] = prod
        return HahnSeries.from_dict(self.n, acc, tr)

    def scale(self, c) -> "HahnSeries":
        if _coeff_is_zero(c if isinstance(c, RatInterval) else Fraction(c)):
            return HahnSeries.zero(self.n, self.trunc)
        if not isinstance(c, RatInterval):
            c = Fraction(c)
        out = []
        for e, v in self.terms:
            if isinstance(v, RatInterval) or isinstance(c, RatInterval):
                out.append((e, as_interval(v) * as_interval(c)))
            else:
                out.append((e, v * c))
        return HahnSeries(self.n, tuple(out), self.trunc)

    def shift(self, exponent) -> "HahnSeries":
        """Multiply by eps^exponent (exact monomial shift)."""
        d = _exp(exponent)
        tr = None if self.trunc is None else _exp_add(self.trunc, d)
        return HahnSeries(
            self.n, tuple((_exp_add(e, d), c) for e, c in self.terms), tr
        )

    def inverse(self, trunc=None) -> "HahnSeries":
        """Multiplicative inverse, truncated.

        A single exact term inverts exactly.  Otherwise a finite truncation
        is required (either already on the series or passed explicitly);
        the guaranteed prefix of the result is trunc - 2*v(a).
        """
        if not self.terms:
            raise DivisionByZero("cannot invert a series that is zero up to truncation")
        v, c = self.terms[0]
        if enclosure_sign(c) is None:
            raise IndeterminateAtTruncation("leading coefficient sign unknown")
        neg_v = tuple(-x for x in v)
        if len(self.terms) == 1 and self.trunc is None:
            inv_c = 1 / as_interval(c) if isinstance(c, RatInterval) else Fraction(1) / c
            return HahnSeries(self.n, ((neg_v, inv_c),))
        t = self.trunc
        if trunc is not None:
            t = _tmin(t, _exp(trunc))
        if t is None:
            raise TruncationExhausted(
                "inverse of a multi-term series needs a finite truncation"
            )
        # relative part w = a * eps^{-v} / c = 1 + u with v(u) > 0
        rel_trunc = _exp_add(t, neg_v)
        w = self.shift(neg_v).scale(
            1 / as_interval(c) if isinstance(c, RatInterval) else Fraction(1) / c
        ).with_trunc(rel_trunc)
        u = w - HahnSeries.one(self.n).with_trunc(rel_trunc)
        geo = HahnSeries.one(self.n).with_trunc(rel_trunc)
        power = HahnSeries.one(self.n).with_trunc(rel_trunc)
        while True:
            power = (power * (-u)).with_trunc(rel_trunc)
            if power.is_zero_to_trunc():
                break
            geo = geo + power
        out = geo.shift(neg_v)
        if isinstance(c, RatInterval):
            return out.scale(1 / as_interval(c))
        return out.scale(Fraction(1) / c)

    def divide(self, other: "HahnSeries", trunc=None) -> "HahnSeries":
        return self * other.inverse(trunc=trunc)

    def sqrt_nonneg(self, trunc=None) -> "HahnSeries":
        """Square root of a nonnegative series.

        The leading coefficient must be the square of a rational; the
        paper's coefficients live in a real closed field, ours in Q.
        """
        s = self.sign()
        if s is None:
            raise IndeterminateAtTruncation("sign unknown at this precision")
        if s < 0:
            raise NegativeElement("series has negative sign")
        if not self.terms:
            if self.trunc is None:
                return HahnSeries.zero(self.n)
            raise TruncationExhausted("sqrt of a zero-to-truncation series")
        v, c = self.terms[0]
        if isinstance(c, RatInterval):
            raise NotRepresentable("sqrt needs an exact leading coefficient")
        root = exact_nth_root(c, 2)
        if root is None:
            raise NotRepresentable(f"leading coefficient {c} is not a rational square")
        half_v = tuple(x / 2 for x in v)
        neg_v = tuple(-x for x in v)
        if len(self.terms) == 1 and self.trunc is None:
            return HahnSeries(self.n, ((half_v, root),))
        t = self.trunc
        if trunc is not None:
            t = _tmin(t, _exp(trunc))
        if t is None:
            raise TruncationExhausted(
                "sqrt of a multi-term series needs a finite truncation"
            )
        rel_trunc = _exp_add(t, neg_v)
        w = self.shift(neg_v).scale(Fraction(1) / c).with_trunc(rel_trunc)
        u = w - HahnSeries.one(self.n).with_trunc(rel_trunc)
        # binomial series (1+u)^(1/2)
        series = HahnSeries.one(self.n).with_trunc(rel_trunc)
        power = HahnSeries.one(self.n).with_trunc(rel_trunc)
        coeff = Fraction(1)
        k = 0
        while True:
            k += 1
            coeff = coeff * (Fraction(1, 2) - (k - 1)) / k
            power = (power * u).with_trunc(rel_trunc)
            if power.is_zero_to_trunc():
                break
            series = series + power.scale(coeff)
        return series.shift(half_v).scale(root)

    def residue(self) -> Enclosure:
        """Coefficient of eps^0 (the residue-field projection on o)."""
        zero = (Fraction(0),) * self.n
        if self.terms and self.terms[0][0] < zero:
            raise NegativeValuation(f"valuation {self.terms[0][0]} is negative")
        return self.coefficient(zero)

    def __str__(self) -> str:
        if not self.terms:
            body = "0"
        else:
            parts = []
            for e, c in self.terms:
                exps = ",".join(str(x) for x in e)
                parts.append(f"({c})*eps^({exps})")
            body = " + ".join(parts)
        if self.trunc is not None:
            body += f" + O(eps^({','.join(str(x) for x in self.trunc)}))"
        return body


def compare(a: HahnSeries, b: HahnSeries) -> Optional[int]:
    """Order comparison in the real closed series field: sign of a - b."""
    return (a - b).sign()


# --- coefficientwise maps ---------------------------------------------------

DEFAULT_PRECISION = Fraction(1, 10**12)


@dataclass(frozen=True)
class CoefMap:
    """A total function on the value group, queryable at any precision.

    ``fn(exponent, precision)`` returns an exact Fraction or a certified
    RatInterval of width <= precision.  Maps defined by real formulas
    (moment integrals, logs) enter through enclosures; everything the map
    reports is true of the underlying real-valued function.
    """

    n: int
    fn: Callable[[Exponent, Rat], Enclosure]
    unital: bool = False
    description: str = ""

    def __post_init__(self):
        if self.unital:
            zero = (Fraction(0),) * self.n
            v = self.fn(zero, DEFAULT_PRECISION)
            ok = (v == 1) if not isinstance(v, RatInterval) else v.contains(1)
            if not ok:
                raise ValueError("map declared unital but f(0) != 1")

    def __call__(self, exponent, precision: Rat = DEFAULT_PRECISION) -> Enclosure:
        return self.fn(_exp(exponent), Fraction(precision))

    @staticmethod
    def constant_one(n: int) -> "CoefMap":
        return CoefMap(n, lambda e, prec: Fraction(1), unital=True, description="1")

    @staticmethod
    def from_table(n: int, table: dict, default=Fraction(1)) -> "CoefMap":
        tbl = {_exp(k): Fraction(v) for k, v in table.items()}
        default = Fraction(default)
        zero = (Fraction(0),) * n
        return CoefMap(
            n,
            lambda e, prec: tbl.get(e, default),
            unital=tbl.get(zero, default) == 1,
            description="table",
        )

    @staticmethod
    def from_template(
        n: int,
        template: Callable[[Rat, Rat], Enclosure],
        weights: Sequence = None,
        description: str = "",
    ) -> "CoefMap":
        """One-dimensional template composed with a rational embedding.

        f(e) = template(<w, e>); with injective weights this is the
        paper-style transport of a positive definite function on Q to Q^n.
        """
        w = tuple(Fraction(x) for x in (weights if weights is not None else (1,) * n))
        if len(w) != n:
            raise ValueError("embedding weight vector has wrong length")

        def fn(e: Exponent, prec: Rat) -> Enclosure:
            t = sum((wi * ei for wi, ei in zip(w, e)), Fraction(0))
            return template(t, prec)

        zero = (Fraction(0),) * n
        v = fn(zero, DEFAULT_PRECISION)
        unital = (v == 1) if not isinstance(v, RatInterval) else v.contains(1)
        return CoefMap(n, fn, unital=unital, description=description or "template")

    def reciprocal(self) -> "CoefMap":
        """The map a -> 1/f(a); composing gives the identity on series."""

        def fn(e: Exponent, prec: Rat) -> Enclosure:
            v = self.fn(e, prec)
            if isinstance(v, RatInterval):
                return 1 / v
            if v == 0:
                raise ZeroDivisionError(f"f({e}) = 0 has no reciprocal")
            return 1 / v

        return CoefMap(self.n, fn, unital=self.unital, description=f"1/({self.description})")


def apply_Lf(f: CoefMap, a: HahnSeries, precision: Rat = DEFAULT_PRECISION) -> HahnSeries:
    """Coefficientwise scaling: sum c_e eps^e  ->  sum f(e) c_e eps^e."""
    if f.n != a.n:
        raise ValueError("value-group dimension mismatch")
    out = []
    for e, c in a.terms:
        fe = f.fn(e, Fraction(precision))
        if isinstance(fe, RatInterval) or isinstance(c, RatInterval):
            out.append((e, as_interval(fe) * as_interval(c)))
        else:
            out.append((e, fe * c))
    return HahnSeries(a.n, tuple(out), a.trunc)


# --- PSD testing over the series field ---------------------------------------


class HahnPsdStatus(Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    POSITIVE_SEMIDEFINITE = "PositiveSemidefinite"
    INDEFINITE = "Indefinite"
    INDETERMINATE = "IndeterminateAtTruncation"


@dataclass(frozen=True)
class HahnPsdVerdict:
    status: HahnPsdStatus
    witness: Optional[tuple[HahnSeries, ...]] = None

    @property
    def is_psd(self) -> bool:
        return self.status in (
            HahnPsdStatus.POSITIVE_DEFINITE,
            HahnPsdStatus.POSITIVE_SEMIDEFINITE,
        )


def _witness_value(A: list[list[HahnSeries]], w: Sequence[HahnSeries]) -> HahnSeries:
    n = len(A)
    total = HahnSeries.zero(A[0][0].n)
    for i in range(n):
        for j in range(n):
            total = total + w[i] * A[i][j] * w[j]
    return total


def psd_check_hahn(matrix: Sequence[Sequence[HahnSeries]]) -> HahnPsdVerdict:
    """Exact PSD classification of a symmetric matrix of Hahn series.

    Division-free: pivoting replaces the Schur complement S by p*S (p the
    positive pivot), which preserves every sign.  Indefinite verdicts come
    with a witness vector over the series field whose quadratic form has
    certified negative sign; a pivot whose sign is hidden behind the
    truncation yields Indeterminate.
    """
    A = [list(row) for row in matrix]
    m = len(A)
    for row in A:
        if len(row) != m:
            raise ValueError("matrix is not square")
    dim = A[0][0].n if m else 1

    def rec(M: list[list[HahnSeries]], size: int) -> tuple[HahnPsdStatus, Optional[list[HahnSeries]]]:
        if size == 0:
            return HahnPsdStatus.POSITIVE_DEFINITE, None
        diag_signs = []
        for i in range(size):
            s = M[i][i].sign()
            if s == -1:
                w = [HahnSeries.zero(dim)] * size
                w[i] = HahnSeries.one(dim)
                return HahnPsdStatus.INDEFINITE, w
            diag_signs.append(s)
        pivot = next((i for i in range(size) if diag_signs[i] == 1), None)
        if pivot is None:
            if any(s is None for s in diag_signs):
                return HahnPsdStatus.INDETERMINATE, None
            # all diagonal signs are 0; PSD forces the whole block to vanish,
            # which is only certifiable when the zeros are exact
            if any(not M[i][i].is_exactly_zero() for i in range(size)):
                return HahnPsdStatus.INDETERMINATE, None
            for i in range(size):
                for j in range(i + 1, size):
                    s = M[i][j].sign()
                    if s is None:
                        return HahnPsdStatus.INDETERMINATE, None
                    if s != 0:
                        w = [HahnSeries.zero(dim)] * size
                        w[i] = HahnSeries.one(dim)
                        w[j] = HahnSeries.scalar(dim, -s)
                        return HahnPsdStatus.INDEFINITE, w
                    if not M[i][j].is_exactly_zero():
                        return HahnPsdStatus.INDETERMINATE, None
            return HahnPsdStatus.POSITIVE_SEMIDEFINITE, None
        p = M[pivot][pivot]
        rest = [i for i in range(size) if i != pivot]
        col = [M[i][pivot] for i in rest]
        B = [
            [p * M[i][j] - col[a] * col[b] for b, j in enumerate(rest)]
            for a, i in enumerate(rest)
        ]
        status, w_sub = rec(B, size - 1)
        if status == HahnPsdStatus.INDEFINITE:
            # lift: w_pivot = -<col, w_sub>, w_rest = p * w_sub;
            # then w^T M w = p * (w_sub^T B w_sub) < 0
            w = [HahnSeries.zero(dim)] * size
            acc = HahnSeries.zero(dim)
            for a, i in enumerate(rest):
                w[i] = p * w_sub[a]
                acc = acc + col[a] * w_sub[a]
            w[pivot] = -acc
            return HahnPsdStatus.INDEFINITE, w
        if status == HahnPsdStatus.INDETERMINATE:
            return status, None
        if status == HahnPsdStatus.POSITIVE_SEMIDEFINITE:
            return HahnPsdStatus.POSITIVE_SEMIDEFINITE, None
        return HahnPsdStatus.POSITIVE_DEFINITE, None

    status, w = rec(A, m)
    if status == HahnPsdStatus.INDEFINITE:
        value = _witness_value(A, w)
        s = value.sign()
        if s is None:
            return HahnPsdVerdict(HahnPsdStatus.INDETERMINATE)
        assert s == -1
        return HahnPsdVerdict(status, witness=tuple(w))
    return HahnPsdVerdict(status)


# --- empirical k-positivity --------------------------------------------------


@dataclass
class KPositivityReport:
    k: int
    passed: bool
    trials_run: int = 0
    inconclusive: int = 0
    counterexample: Optional[dict] = None
    lemma_violations: list = field(default_factory=list)

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"k={self.k}: {verdict} ({self.trials_run} trials, "
            f"{self.inconclusive} inconclusive)"
        )


def _random_exponent(rng: random.Random, n: int) -> Exponent:
    # a deliberately small pool: repeated sums then collide, which keeps the
    # term count of products bounded during exact PSD recursions
    return tuple(Fraction(rng.randint(-4, 4), 2) for _ in range(n))


def _random_series(rng: random.Random, n: int, max_terms: int = 2) -> HahnSeries:
    terms: dict[Exponent, Rat] = {}
    for _ in range(rng.randint(1, max_terms)):
        e = _random_exponent(rng, n)
        c = Fraction(rng.randint(-3, 3), rng.choice((1, 2, 3)))
        if c:
            terms[e] = terms.get(e, Fraction(0)) + c
    return HahnSeries.from_dict(n, terms)


def random_psd_series_matrix(
    rng: random.Random, k: int, n: int, rank: Optional[int] = None
) -> list[list[HahnSeries]]:
    """B = sum of outer products b_i b_i^T of random exact series vectors."""
    r = rank if rank is not None else k
    B = [[HahnSeries.zero(n) for _ in range(k)] for _ in range(k)]
    for _ in range(r):
        b = [_random_series(rng, n) for _ in range(k)]
        for i in range(k):
            for j in range(k):
                B[i][j] = B[i][j] + b[i] * b[j]
    return B


def monomial_gram(f: CoefMap, exponents: Sequence, precision: Rat) -> list[list[HahnSeries]]:
    """L_f applied to the rank-one matrix (eps^{v_i + v_j})_{i,j}."""
    vs = [_exp(v) for v in exponents]
    out = []
    for vi in vs:
        row = []
        for vj in vs:
            e = _exp_add(vi, vj)
            row.append(HahnSeries(f.n, ((e, f.fn(e, precision)),)))
        out.append(row)
    return out


def test_k_positivity(
    f: CoefMap,
    k: int,
    trials: int = 100,
    seed: int = 0,
    include_tuples: Sequence[Sequence] = (),
    precision_schedule: Sequence[Rat] = (
        Fraction(1, 10**12),
        Fraction(1, 10**24),
        Fraction(1, 10**48),
    ),
) -> KPositivityReport:
    """Randomized check that L_f preserves PSD-ness of k x k matrices.

    Random PSD matrices B = sum b_i b_i^T get L_f applied entrywise and are
    classified exactly; rank-one monomial Grams at sampled exponent tuples
    are mixed in, since those are the matrices the k-positivity criterion
    is built from.  Also samples the necessary condition f(a) f(-a) >= 1.
    A trial whose verdict is hidden by truncation or precision is retried
    at higher precision and then counted inconclusive, never as a failure.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = random.Random(seed)
    report = KPositivityReport(k=k, passed=True)

    def classify(matrix_builder) -> Optional[HahnPsdVerdict]:
        for prec in precision_schedule:
            M = matrix_builder(prec)
            verdict = psd_check_hahn(M)
            if verdict.status != HahnPsdStatus.INDETERMINATE:
                return verdict
        return None

    # user-supplied exponent tuples first: these encode known stress cases
    structured: list[tuple[str, list]] = [
        ("given", [_exp(v) if isinstance(v, (tuple, list)) else _exp((v,)) for v in tup])
        for tup in include_tuples
    ]
    for t in range(trials):
        if rng.random() < 0.5:
            vs = sorted({_random_exponent(rng, f.n) for _ in range(k)})
            if len(vs) == k:
                structured.append(("monomial", vs))
            else:
                structured.append(("random", None))
        else:
            structured.append(("random", None))

    for kind, data in structured:
        report.trials_run += 1
        if kind in ("given", "monomial"):
            builder = lambda prec, d=data: monomial_gram(f, d, prec)
        else:
            B = random_psd_series_matrix(rng, k, f.n)
            builder = lambda prec, B=B: [
                [apply_Lf(f, entry, prec) for entry in row] for row in B
            ]
        verdict = classify(builder)
        if verdict is None:
            report.inconclusive += 1
            continue
        if verdict.status == HahnPsdStatus.INDEFINITE:
            report.passed = False
            report.counterexample = {
                "kind": kind,
                "exponents": data,
                "witness": verdict.witness,
            }
            break

    # Necessary condition from unital 2-positivity: f(a) f(-a) >= 1.
    if report.passed and k >= 2 and f.unital:
        samples = [_random_exponent(rng, f.n) for _ in range(20)]
        for kind, data in structured:
            if data:
                samples.extend(data)
        for a in samples:
            neg = tuple(-x for x in a)
            ok = None
            for prec in precision_schedule:
                va = as_interval(f.fn(a, prec))
                vb = as_interval(f.fn(neg, prec))
                prod = va * vb
                if prod.lo >= 1:
                    ok = True
                    break
                if prod.hi < 1:
                    ok = False
                    break
            if ok is False:
                report.passed = False
                report.lemma_violations.append(a)
                break
            if ok is None:
                report.inconclusive += 1
    return report
