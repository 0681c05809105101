"""k-positive-(semi)definite functions built from exponential sums.

The canonical exact path: a function sum_m c_m * b_m^x + c0 with rational
bases b_m takes rational values at integer points, so Gram matrices
(f(x_i + x_j)) over integer points are exactly rational and their PSD
status is decided by exact-core.  Hankel matrices need ln(b_m) and are
therefore interval-certified; the two routes are kept strictly separate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exactcore import Rat, SymRatMatrix, nullspace, primitive_integer_vector
from .hahn import CoefMap
from .intervals import (
    Enclosure,
    PrecisionInsufficient,
    RatInterval,
    as_interval,
    det_enclosure,
    exp_enclosure,
    leading_minors_positive,
    ln_enclosure,
    pow_rat_enclosure,
)


@dataclass(frozen=True)
class ExpSumFunction:
    """f(x) = sum c_m * b_m^x + constant, with rational positive bases."""

    atoms: tuple[tuple[Rat, Rat], ...]
    constant: Rat = Fraction(0)

    def __post_init__(self):
        seen = set()
        norm = []
        for c, b in self.atoms:
            c, b = Fraction(c), Fraction(b)
            if b <= 0:
                raise ValueError(f"base {b} is not positive")
            if b in seen:
                raise ValueError(f"duplicate base {b}")
            seen.add(b)
            if c != 0:
                norm.append((c, b))
        object.__setattr__(self, "atoms", tuple(norm))
        object.__setattr__(self, "constant", Fraction(self.constant))

    @staticmethod
    def symmetric_family(bases: Sequence, epsilon) -> "ExpSumFunction":
        """g + g-bar - epsilon for g(x) = sum b^x over the given bases.

        With bases b_m = exp(a_m) this is the two-sided exponential sum
        whose k-positive-definiteness is controlled by epsilon.
        """
        atoms = []
        for b in bases:
            b = Fraction(b)
            if b <= 1:
                raise ValueError("bases must exceed 1")
            atoms.append((Fraction(1), b))
            atoms.append((Fraction(1), 1 / b))
        return ExpSumFunction(tuple(atoms), -Fraction(epsilon))

    @staticmethod
    def power(base, coeff=1) -> "ExpSumFunction":
        return ExpSumFunction(((Fraction(coeff), Fraction(base)),))

    def __add__(self, other: "ExpSumFunction") -> "ExpSumFunction":
        acc = {b: c for c, b in self.atoms}
        for c, b in other.atoms:
            acc[b] = acc.get(b, Fraction(0)) + c
        return ExpSumFunction(
            tuple((c, b) for b, c in sorted(acc.items())),
            self.constant + other.constant,
        )

    def scale(self, c) -> "ExpSumFunction":
        c = Fraction(c)
        return ExpSumFunction(
            tuple((c * a, b) for a, b in self.atoms), c * self.constant
        )

    def value_at_int(self, x: int) -> Rat:
        """Exact rational value at an integer point."""
        total = self.constant
        for c, b in self.atoms:
            total += c * b**x
        return total

    def value(self, x, err=Fraction(1, 10**12)) -> Enclosure:
        """Value at a rational point; exact whenever all roots are rational."""
        x = Fraction(x)
        if x.denominator == 1:
            return self.value_at_int(int(x))
        parts = [pow_rat_enclosure(b, x, Fraction(err) / (2 * max(1, len(self.atoms))))
                 for _, b in self.atoms]
        if all(not isinstance(p, RatInterval) for p in parts):
            return sum((c * p for (c, _), p in zip(self.atoms, parts)), self.constant)
        total = as_interval(self.constant)
        for (c, _), p in zip(self.atoms, parts):
            total = total + as_interval(p) * c
        return total

    def derivative_enclosure(self, order: int, x, err=Fraction(1, 10**12)) -> RatInterval:
        """Certified enclosure of f^(order)(x) = sum c (ln b)^order b^x."""
        x = Fraction(x)
        err = Fraction(err)
        m = max(1, len(self.atoms))
        for attempt in range(8):
            part_err = err / (m * 4**(attempt + 2))
            total = as_interval(self.constant if order == 0 else Fraction(0))
            for c, b in self.atoms:
                if b == 1:
                    if order == 0:
                        total = total + c
                    continue
                lnb = ln_enclosure(b, part_err)
                power = as_interval(pow_rat_enclosure(b, x, part_err)) if x != 0 else as_interval(Fraction(1))
                total = total + lnb.pow_int(order) * power * c
            if total.width <= err:
                return total
        raise PrecisionInsufficient(f"derivative enclosure at width {err}")


@dataclass(frozen=True)
class GramSample:
    """Matrix (f(x_i+x_j)) at a finite point list, exact when possible."""

    points: tuple[Rat, ...]
    matrix: SymRatMatrix | tuple
    exact: bool

    def det(self) -> Enclosure:
        if self.exact:
            from .exactcore import det as exact_det

            return exact_det(self.matrix)
        return det_enclosure([list(row) for row in self.matrix])


def gram_matrix(f: ExpSumFunction, points: Sequence, err=Fraction(1, 10**12)) -> GramSample:
    pts = tuple(Fraction(p) for p in points)
    if len(set(pts)) != len(pts):
        raise ValueError("points must be pairwise distinct")
    sums = [[a + b for b in pts] for a in pts]
    if all(s.denominator == 1 for row in sums for s in row):
        M = SymRatMatrix.from_rows(
            [[f.value_at_int(int(s)) for s in row] for row in sums]
        )
        return GramSample(pts, M, exact=True)
    vals = [[f.value(s, err) for s in row] for row in sums]
    if all(not isinstance(v, RatInterval) for row in vals for v in row):
        return GramSample(pts, SymRatMatrix.from_rows(vals), exact=True)
    return GramSample(pts, tuple(tuple(as_interval(v) for v in row) for row in vals), exact=False)


@dataclass(frozen=True)
class GridSearch:
    """Scan windows (t, t+1, ..., t+k) for integer t in [start, stop]."""

    start: int = 0
    stop: int = 50


@dataclass(frozen=True)
class KpsdFailure:
    """points, w and the exactly negative value w^T (f(x_i+x_j)) w."""

    points: tuple[int, ...]
    w: tuple[Rat, ...]
    value: Rat


def certify_not_kpsd(
    f: ExpSumFunction, k: int, search: GridSearch = GridSearch()
) -> Optional[KpsdFailure]:
    """Witness that f is not (k+1)-positive semidefinite, if the scan finds one.

    The vector w annihilates the Vandermonde profiles (1, b, ..., b^k) of
    every growing atom (b > 1), so along the window (t, ..., t+k) only the
    decaying atoms and the constant survive in w^T M w; large t then exposes
    a negative constant.  The returned value is exact; None is not a proof
    of k-positive-semidefiniteness.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    growing = [b for _, b in f.atoms if b > 1]
    rows = [[b**j for j in range(k + 1)] for b in growing]
    if rows:
        kernel = nullspace(rows)
    else:
        kernel = [[Fraction(1) if i == j else Fraction(0) for i in range(k + 1)] for j in range(k + 1)]
    if not kernel:
        return None
    candidates = [primitive_integer_vector(v) for v in kernel]
    # a candidate that pairs with the constant term is the productive one
    candidates.sort(key=lambda w: sum(w) == 0)
    for t in range(search.start, search.stop + 1):
        pts = tuple(range(t, t + k + 1))
        M = SymRatMatrix.from_rows(
            [[f.value_at_int(a + b) for b in pts] for a in pts]
        )
        for w in candidates:
            val = M.quadratic_form(w)
            if val < 0:
                return KpsdFailure(points=pts, w=w, value=val)
    return None


@dataclass(frozen=True)
class HankelSample:
    """Interval matrix of derivatives (f^(i+j-2)(x)), order k."""

    x: Rat
    k: int
    entries: tuple[tuple[RatInterval, ...], ...]

    def det(self) -> RatInterval:
        return as_interval(det_enclosure([list(row) for row in self.entries]))

    def classify_pd(self) -> Optional[bool]:
        """True / False when certified, None when precision is insufficient."""
        return leading_minors_positive([list(row) for row in self.entries])


def hankel_matrix(f: ExpSumFunction, x, k: int, precision=Fraction(1, 10**6)) -> HankelSample:
    if k < 1:
        raise ValueError("k must be >= 1")
    x = Fraction(x)
    precision = Fraction(precision)
    # entry (i,j) holds derivative i+j-2; reuse by derivative order
    ders = {}
    for order in range(2 * k - 1):
        ders[order] = f.derivative_enclosure(order, x, precision / (4 * k * k))
    rows = tuple(
        tuple(ders[i + j] for j in range(k)) for i in range(k)
    )
    return HankelSample(x=x, k=k, entries=rows)


def hankel_pd_certified(
    f: ExpSumFunction,
    x,
    k: int,
    precision=Fraction(1, 10**6),
    max_refinements: int = 6,
) -> tuple[bool, HankelSample]:
    """Certified PD decision with adaptive refinement of the enclosures."""
    prec = Fraction(precision)
    for _ in range(max_refinements):
        H = hankel_matrix(f, x, k, prec)
        verdict = H.classify_pd()
        if verdict is not None:
            return verdict, H
        prec /= 10**6
    raise PrecisionInsufficient(f"Hankel PD at x={x}, order {k}")


def _one_sided_moment_matrix(bases: Sequence[Rat], k: int, sign: int, prec: Rat):
    """A = sum_m v_m v_m^T for v_m = (1, s*ln b_m, ..., (s*ln b_m)^(k-1))."""
    lns = [ln_enclosure(b, prec) * sign for b in bases]
    A = [[as_interval(Fraction(0)) for _ in range(k)] for _ in range(k)]
    for ln in lns:
        pows = [ln.pow_int(r) for r in range(k)]
        for i in range(k):
            for j in range(k):
                A[i][j] = A[i][j] + pows[i] * pows[j]
    return A


def find_epsilon_kpd(
    bases: Sequence,
    k: int,
    candidates: Optional[Sequence] = None,
    precision=Fraction(1, 10**8),
    max_refinements: int = 5,
) -> Rat:
    """A rational epsilon making the symmetric family k-positive definite.

    Certifies that both one-sided moment matrices minus epsilon*e1*e1^T are
    positive definite (interval principal minors); by the Hankel splitting
    H_f(x) = (A - eps e1 e1^T) + PSD this suffices for every real x.  The
    default candidate list tries 1/2, 1/3, ... and returns the first that
    certifies, so the outcome is deterministic.
    """
    bs = [Fraction(b) for b in bases]
    if len(bs) != k:
        raise ValueError("need exactly k bases")
    if len(set(bs)) != k or any(b <= 1 for b in bs):
        raise ValueError("bases must be > 1 and pairwise distinct")
    cand = [Fraction(c) for c in candidates] if candidates is not None else [
        Fraction(1, q) for q in range(2, 1000)
    ]
    for eps in cand:
        if eps <= 0:
            raise ValueError("epsilon candidates must be positive")
        prec = Fraction(precision)
        verdict = None
        for _ in range(max_refinements):
            ok = True
            undecided = False
            for sign in (1, -1):
                A = _one_sided_moment_matrix(bs, k, sign, prec)
                A[0][0] = A[0][0] - eps
                res = leading_minors_positive(A)
                if res is False:
                    ok = False
                    break
                if res is None:
                    undecided = True
            if not ok:
                verdict = False
                break
            if not undecided:
                verdict = True
                break
            prec /= 10**4
        if verdict is True:
            return eps
        if verdict is None:
            raise PrecisionInsufficient(f"epsilon candidate {eps} undecidable")
    raise PrecisionInsufficient("no epsilon candidate certified")


@dataclass(frozen=True)
class MomentFunction:
    """f(c) = integral of e^(c x) over [a, b]: positive definite by construction."""

    a: Rat
    b: Rat

    def __post_init__(self):
        a, b = Fraction(self.a), Fraction(self.b)
        if not a < b:
            raise ValueError("need a < b")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def value(self, c, err=Fraction(1, 10**12)) -> Enclosure:
        c = Fraction(c)
        if c == 0:
            return self.b - self.a
        err = Fraction(err)
        scale = abs(c)
        hi = exp_enclosure(c * self.b, err * scale / 4)
        lo = exp_enclosure(c * self.a, err * scale / 4)
        return (hi - lo) * (Fraction(1) / c)

    def gram(self, points: Sequence, err=Fraction(1, 10**12)):
        pts = [Fraction(p) for p in points]
        if len(set(pts)) != len(pts):
            raise ValueError("points must be pairwise distinct")
        return [
            [as_interval(self.value(x + y, err)) for y in pts] for x in pts
        ]

    def gram_pd_certified(
        self, points: Sequence, err=Fraction(1, 10**9), max_refinements: int = 6
    ) -> bool:
        e = Fraction(err)
        for _ in range(max_refinements):
            verdict = leading_minors_positive(self.gram(points, e))
            if verdict is not None:
                return verdict
            e /= 10**6
        raise PrecisionInsufficient("moment Gram PD undecidable at cap")

    def as_coefmap(self, n: int = 1, weights: Optional[Sequence] = None) -> CoefMap:
        """The induced coefficient map on the value group (moment template)."""
        return CoefMap.from_template(
            n,
            lambda t, prec: self.value(t, prec),
            weights=weights,
            description=f"moment[{self.a},{self.b}]",
        )


def moment_psd(interval: Sequence) -> MomentFunction:
    a, b = interval
    return MomentFunction(a, b)


def f_eps_paper() -> ExpSumFunction:
    """The two-sided sum with bases 2 and 3 and constant -1/11."""
    return ExpSumFunction.symmetric_family((2, 3), Fraction(1, 11))


def f_eps_coefmap(n: int = 1, weights: Optional[Sequence] = None) -> CoefMap:
    """f_eps transported to the value group via a rational embedding."""
    f = f_eps_paper()

    def template(t: Rat, prec: Rat) -> Enclosure:
        return f.value(t, prec)

    return CoefMap.from_template(n, template, weights=weights, description="f_eps[2,3;1/11]")
