"""Exact convex-geometry helpers: hull membership and lattice enumeration.

Membership of a point in a convex hull is decided by a phase-1 simplex on
the exact rational system {sum l_i p_i = z, sum l_i = 1, l >= 0} with
Bland's rule, so it terminates and never misclassifies a boundary point.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

from .exactcore import Rat

IntPoint = tuple[int, ...]


def _phase1_feasible(A: list[list[Rat]], b: list[Rat]) -> bool:
    """Is {x >= 0 : A x = b} nonempty?  Exact simplex with Bland's rule."""
    m = len(A)
    if m == 0:
        return True
    n = len(A[0])
    # make all right-hand sides nonnegative
    T = []
    for i in range(m):
        row = list(A[i])
        rhs = b[i]
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        T.append(row + [Fraction(1) if j == i else Fraction(0) for j in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    # objective: minimize sum of artificials; reduced costs start from that
    cost = [Fraction(0)] * (n + m) + [Fraction(0)]
    for i in range(m):
        for j in range(n + m + 1):
            cost[j] -= T[i][j]
    for j in range(m):
        cost[n + j] += 1
    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        # ratio test, Bland tie-break on row basis index
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            # unbounded phase-1 objective cannot happen (bounded below by 0)
            return False
        _, r = best
        piv = T[r][enter]
        T[r] = [x / piv for x in T[r]]
        for i in range(m):
            if i != r and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, T[r])]
        basis[r] = enter
    # objective value is -cost[-1]
    return cost[-1] == 0


def in_convex_hull(z: Sequence, points: Sequence[Sequence]) -> bool:
    """Exact test: z in conv(points)?"""
    pts = [[Fraction(x) for x in p] for p in points]
    zz = [Fraction(x) for x in z]
    if not pts:
        return False
    dim = len(zz)
    A = [[pts[j][i] for j in range(len(pts))] for i in range(dim)]
    A.append([Fraction(1)] * len(pts))
    b = zz + [Fraction(1)]
    return _phase1_feasible(A, b)


def bounding_box(points: Iterable[Sequence[int]]) -> tuple[list[int], list[int]]:
    pts = list(points)
    lo = [min(p[i] for p in pts) for i in range(len(pts[0]))]
    hi = [max(p[i] for p in pts) for i in range(len(pts[0]))]
    return lo, hi


def _compositions(total: int, parts: int):
    """All nonnegative integer vectors of given length summing to total."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def lattice_points_in_hull(points: Sequence[IntPoint]) -> list[IntPoint]:
    """All integer points of conv(points), enumerated exactly.

    When every generator has the same coordinate sum the candidates are the
    compositions of that degree (the hull lies on a simplex slice), which
    avoids scanning the full bounding box.
    """
    pts = [tuple(int(x) for x in p) for p in points]
    if not pts:
        return []
    n = len(pts[0])
    sums = {sum(p) for p in pts}
    if len(sums) == 1:
        candidates: Iterable[IntPoint] = _compositions(next(iter(sums)), n)
    else:
        lo, hi = bounding_box(pts)
        candidates = itertools.product(*[range(lo[i], hi[i] + 1) for i in range(n)])
    out = [c for c in candidates if in_convex_hull(c, pts)]
    out.sort()
    return out


def lattice_points_in_half_hull(points: Sequence[IntPoint]) -> list[IntPoint]:
    """Integer points of (1/2) conv(points): z with 2z in conv(points)."""
    pts = [tuple(int(x) for x in p) for p in points]
    if not pts:
        return []
    n = len(pts[0])
    sums = {sum(p) for p in pts}
    if len(sums) == 1:
        deg = next(iter(sums))
        if deg % 2 != 0:
            return []
        candidates: Iterable[IntPoint] = _compositions(deg // 2, n)
    else:
        lo, hi = bounding_box(pts)
        rngs = [range(-((-lo[i]) // 2), hi[i] // 2 + 1) for i in range(n)]
        candidates = itertools.product(*rngs)
    out = [c for c in candidates if in_convex_hull(tuple(2 * x for x in c), pts)]
    out.sort()
    return out


def extreme_points(points: Sequence[IntPoint]) -> list[IntPoint]:
    """Vertices of conv(points): p is extreme iff p not in conv(rest)."""
    pts = sorted(set(tuple(p) for p in points))
    out = []
    for p in pts:
        rest = [q for q in pts if q != p]
        if not rest or not in_convex_hull(p, rest):
            out.append(p)
    return out
