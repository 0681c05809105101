"""Exact rational scalars and dense symmetric linear algebra.

Everything in this module is computed in arbitrary-precision rational
arithmetic.  The PSD test is a symmetric, diagonally pivoted fraction-free
elimination: it either completes (PSD, with the LDL^T pivot list) or stops
with an explicit rational vector w such that w^T A w < 0.  No floating
point is used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

Rat = Fraction

RatVector = tuple[Rat, ...]


def rat_from_str(s: str) -> Rat:
    """Parse "num/den" (or a plain integer / decimal) into a Fraction."""
    return Fraction(s.strip())


def rat_to_str(x: Rat) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class DimensionMismatch(ValueError):
    pass


class NotSymmetric(ValueError):
    pass


@dataclass(frozen=True)
class SymRatMatrix:
    """Dense symmetric matrix of rationals.

    Entries are stored row-major as a tuple of tuples; symmetry is enforced
    on construction so downstream code never has to re-check it.
    """

    entries: tuple[tuple[Rat, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        for row in self.entries:
            if len(row) != n:
                raise DimensionMismatch("matrix is not square")
        for i in range(n):
            for j in range(i):
                if self.entries[i][j] != self.entries[j][i]:
                    raise NotSymmetric(f"entry ({i},{j}) != ({j},{i})")

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Rat:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> RatVector:
        return self.entries[i]

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "SymRatMatrix":
        return SymRatMatrix(tuple(tuple(Fraction(x) for x in row) for row in rows))

    @staticmethod
    def identity(n: int) -> "SymRatMatrix":
        return SymRatMatrix(
            tuple(
                tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
                for i in range(n)
            )
        )

    @staticmethod
    def zeros(n: int) -> "SymRatMatrix":
        z = Fraction(0)
        return SymRatMatrix(tuple(tuple(z for _ in range(n)) for _ in range(n)))

    def scale(self, c: Rat) -> "SymRatMatrix":
        c = Fraction(c)
        return SymRatMatrix(tuple(tuple(c * x for x in row) for row in self.entries))

    def add(self, other: "SymRatMatrix") -> "SymRatMatrix":
        if self.n != other.n:
            raise DimensionMismatch
        return SymRatMatrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def quadratic_form(self, w: Sequence[Rat]) -> Rat:
        """w^T A w, exactly."""
        if len(w) != self.n:
            raise DimensionMismatch
        total = Fraction(0)
        for i, wi in enumerate(w):
            if wi == 0:
                continue
            row = self.entries[i]
            total += wi * sum(row[j] * wj for j, wj in enumerate(w) if wj != 0)
        return total

    def to_json(self) -> list[list[str]]:
        return [[rat_to_str(x) for x in row] for row in self.entries]

    @staticmethod
    def from_json(data: Sequence[Sequence[str]]) -> "SymRatMatrix":
        return SymRatMatrix.from_rows([[rat_from_str(x) for x in row] for row in data])


class PsdStatus(Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    POSITIVE_SEMIDEFINITE = "PositiveSemidefinite"
    INDEFINITE = "Indefinite"


@dataclass(frozen=True)
class PsdVerdict:
    status: PsdStatus
    # For INDEFINITE: rational w with w^T A w < 0 (verified exactly on
    # construction by psd_check).  For PSD/PD: the LDL^T pivot list.
    witness: Optional[RatVector] = None
    pivots: Optional[RatVector] = None

    @property
    def is_psd(self) -> bool:
        return self.status in (
            PsdStatus.POSITIVE_DEFINITE,
            PsdStatus.POSITIVE_SEMIDEFINITE,
        )


def _scaled_integer_copy(A: SymRatMatrix) -> tuple[list[list[int]], int]:
    """Return (c*A as int matrix, c) for the lcm c of all denominators."""
    c = 1
    for row in A.entries:
        for x in row:
            c = c * x.denominator // math.gcd(c, x.denominator)
    M = [[int(x * c) for x in row] for row in A.entries]
    return M, c


def _lift_schur_witness(
    A: SymRatMatrix, done: list[int], t: dict[int, Rat]
) -> RatVector:
    """Lift a witness from Schur-complement coordinates back to A.

    ``done`` are the pivot indices already eliminated (in order), ``t``
    assigns rational weights to remaining indices.  The lifted vector is
    w = (-A11^{-1} A12 t, t) in the permuted ordering, which satisfies
    w^T A w = t^T S t where S is the Schur complement of A11.
    """
    n = A.n
    k = len(done)
    if k == 0:
        w = [Fraction(0)] * n
        for i, v in t.items():
            w[i] = v
        return tuple(w)
    # rhs = A12 t restricted to the pivot block
    rhs = []
    for i in done:
        rhs.append(sum(A.entries[i][j] * v for j, v in t.items()))
    block = [[A.entries[i][j] for j in done] for i in done]
    sol = solve_linear(block, rhs)
    assert sol is not None  # pivot block is nonsingular by construction
    w = [Fraction(0)] * n
    for i, v in t.items():
        w[i] = v
    for idx, i in enumerate(done):
        w[i] = -sol[idx]
    return tuple(w)


def psd_check(A: SymRatMatrix) -> PsdVerdict:
    """Exact PSD/PD/indefinite classification with witness or pivots.

    Runs fraction-free symmetric elimination (Bareiss) with diagonal
    pivoting on an integer rescaling of A.  The reduced entries at step k
    are D_k times the true Schur complement with D_k > 0, so their signs
    are the Schur complement's signs and no division-induced rounding can
    occur.  Zero pivots with nonzero off-diagonal residue are classified
    Indefinite via an explicit 2x2 witness.
    """
    n = A.n
    if n == 0:
        return PsdVerdict(PsdStatus.POSITIVE_DEFINITE, pivots=())
    M, scale = _scaled_integer_copy(A)
    order = list(range(n))
    prev = 1
    dets: list[int] = []  # leading principal minors D_1, D_2, ... (scaled)
    done: list[int] = []
    step = 0
    while step < n:
        rest = order[step:]
        # any negative diagonal in the Schur complement is an instant witness
        neg = [i for i in rest if M[i][i] < 0]
        if neg:
            i = neg[0]
            w = _lift_schur_witness(A, done, {i: Fraction(1)})
            assert A.quadratic_form(w) < 0
            return PsdVerdict(PsdStatus.INDEFINITE, witness=w)
        pos = [i for i in rest if M[i][i] > 0]
        if not pos:
            # all remaining diagonals are zero: the block must vanish
            for i in rest:
                for j in rest:
                    if M[i][j] != 0:
                        s = 1 if M[i][j] > 0 else -1
                        w = _lift_schur_witness(
                            A, done, {i: Fraction(1), j: Fraction(-s)}
                        )
                        assert A.quadratic_form(w) < 0
                        return PsdVerdict(PsdStatus.INDEFINITE, witness=w)
            break  # zero block: PSD, rank == step
        p = max(pos, key=lambda i: M[i][i])
        pi = order.index(p)
        order[step], order[pi] = order[pi], order[step]
        rem = order[step + 1 :]
        Mp = M[p]
        piv = Mp[p]
        for i in rem:
            Mi = M[i]
            aip = Mi[p]
            for j in rem:
                Mi[j] = (piv * Mi[j] - aip * Mp[j]) // prev
        dets.append(piv)
        prev = piv
        done.append(p)
        step += 1
    # LDL pivots: D_k / D_{k-1} on the scaled matrix, divided by the scale
    pivots = []
    prev_d = 1
    for d in dets:
        pivots.append(Fraction(d, prev_d) / scale)
        prev_d = d
    rank = len(pivots)
    status = PsdStatus.POSITIVE_DEFINITE if rank == n else PsdStatus.POSITIVE_SEMIDEFINITE
    return PsdVerdict(status, pivots=tuple(pivots))


def det(A: SymRatMatrix) -> Rat:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    n = A.n
    if n == 0:
        return Fraction(1)
    M, scale = _scaled_integer_copy(A)
    sign = 1
    prev = 1
    for k in range(n):
        # find a pivot in column k
        p = next((i for i in range(k, n) if M[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            M[k], M[p] = M[p], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return Fraction(sign * M[n - 1][n - 1]) / Fraction(scale) ** n


def solve_linear(A: Sequence[Sequence[Rat]], b: Sequence[Rat]) -> Optional[list[Rat]]:
    """Solve a square nonsingular rational system; None if singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    for k in range(n):
        p = next((i for i in range(k, n) if M[i][k] != 0), None)
        if p is None:
            return None
        M[k], M[p] = M[p], M[k]
        piv = M[k][k]
        for i in range(n):
            if i != k and M[i][k] != 0:
                f = M[i][k] / piv
                for j in range(k, n + 1):
                    M[i][j] -= f * M[k][j]
    return [M[i][n] / M[i][i] for i in range(n)]


def solve_consistent(
    A: Sequence[Sequence[Rat]], b: Sequence[Rat]
) -> Optional[list[Rat]]:
    """Any exact solution of a (possibly singular) consistent system.

    Returns None when the system is inconsistent.  Free variables are set
    to zero, which keeps the output deterministic.
    """
    rows = len(A)
    if rows == 0:
        return []
    cols = len(A[0])
    M = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(rows)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [x / piv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append((r, c))
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if M[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for (ri, ci) in pivots:
        x[ci] = M[ri][cols]
    return x


def rref(A: Sequence[Sequence[Rat]]) -> tuple[list[list[Rat]], list[int]]:
    """Reduced row echelon form and pivot column indices."""
    rows = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    if rows == 0:
        return M, []
    cols = len(M[0])
    pivcols: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [x / piv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivcols.append(c)
        r += 1
        if r == rows:
            break
    return M, pivcols


def nullspace(A: Sequence[Sequence[Rat]]) -> list[list[Rat]]:
    """Rational basis of the kernel of A (as row-constraint matrix)."""
    if not A:
        return []
    cols = len(A[0])
    R, pivcols = rref(A)
    free = [c for c in range(cols) if c not in pivcols]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivcols):
            v[c] = -R[r][f]
        basis.append(v)
    return basis


def primitive_integer_vector(v: Sequence[Rat]) -> RatVector:
    """Clear denominators and common factors; first nonzero entry > 0."""
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x != 0), 1)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(Fraction(x) for x in ints)


def kernel_vector(A: SymRatMatrix) -> Optional[RatVector]:
    """A nonzero exact rational kernel vector, or None if A is nonsingular.

    The vector is normalized to a primitive integer vector with positive
    leading entry, so results are deterministic.
    """
    basis = nullspace(A.entries)
    if not basis:
        return None
    return primitive_integer_vector(basis[0])
