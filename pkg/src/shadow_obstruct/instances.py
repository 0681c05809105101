"""Canonical instances: Motzkin, Horn, stability-number matrices, circuits.

Everything here is exact and deterministic given a seed; the samplers
construct nonnegative polynomials as explicit sums of squares so their
ground truth is known by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import polytope
from .exactcore import Rat, SymRatMatrix, solve_linear
from .groupring import GroupRingElement, SupportSet


class TooLarge(ValueError):
    pass


class EvenOrSmall(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        norm = set()
        for a, b in self.edges:
            if a == b:
                raise ValueError("loops are not allowed")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError("edge endpoint out of range")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(norm))

    @staticmethod
    def of(n: int, edges: Sequence[Sequence[int]]) -> "Graph":
        return Graph(n, frozenset((e[0], e[1]) for e in edges))

    @staticmethod
    def cycle(m: int) -> "Graph":
        return Graph.of(m, [(i, (i + 1) % m) for i in range(m)])

    @staticmethod
    def complete(n: int) -> "Graph":
        return Graph.of(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    @staticmethod
    def empty(n: int) -> "Graph":
        return Graph(n, frozenset())

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def adjacency(self) -> list[list[int]]:
        A = [[0] * self.n for _ in range(self.n)]
        for a, b in self.edges:
            A[a][b] = 1
            A[b][a] = 1
        return A

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out


def motzkin() -> GroupRingElement:
    """x3^6 - 3 x1^2 x2^2 x3^2 + x1^2 x2^4 + x1^4 x2^2."""
    return GroupRingElement(
        3,
        {
            (Fraction(0), Fraction(0), Fraction(6)): Fraction(1),
            (Fraction(2), Fraction(2), Fraction(2)): Fraction(-3),
            (Fraction(2), Fraction(4), Fraction(0)): Fraction(1),
            (Fraction(4), Fraction(2), Fraction(0)): Fraction(1),
        },
    )


def motzkin_sos_identity() -> list[tuple[Rat, GroupRingElement]]:
    """The three-square decomposition of the Motzkin form after x -> x^2."""
    n = 3

    def mono(e, c=1):
        return GroupRingElement.monomial(n, e, c)

    return [
        (Fraction(2), mono((3, 3, 0)) - mono((1, 1, 4))),
        (Fraction(1), mono((4, 2, 0)) - mono((2, 4, 0))),
        (Fraction(1), mono((0, 0, 6)) - mono((2, 2, 2))),
    ]


def horn() -> GroupRingElement:
    """(x1+...+x5)^2 - 4(x1x2 + x2x3 + x3x4 + x4x5 + x5x1)."""
    s = GroupRingElement.zero(5)
    for i in range(5):
        s = s + GroupRingElement.variable(5, i)
    h = s * s
    for i in range(5):
        e = [0] * 5
        e[i] += 1
        e[(i + 1) % 5] += 1
        h = h + GroupRingElement.monomial(5, e, -4)
    return h


def stability_number(G: Graph) -> int:
    """Exact maximum stable set size by branch and bound."""
    if G.n > 30:
        raise TooLarge("graphs beyond 30 vertices are out of desk scale")
    adj = [0] * G.n
    for a, b in G.edges:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    best = 0

    def rec(candidates: int, size: int):
        nonlocal best
        if candidates == 0:
            best = max(best, size)
            return
        if size + bin(candidates).count("1") <= best:
            return
        # branch on a highest-degree candidate vertex
        v = max(
            (i for i in range(G.n) if candidates >> i & 1),
            key=lambda i: bin(adj[i] & candidates).count("1"),
        )
        rec(candidates & ~(1 << v) & ~adj[v], size + 1)
        rec(candidates & ~(1 << v), size)

    rec((1 << G.n) - 1, 0)
    return best


def motzkin_straus_matrix(G: Graph) -> SymRatMatrix:
    """Q(G) = alpha(G) (I + A) - J; copositive by Motzkin-Straus."""
    alpha = stability_number(G)
    A = G.adjacency()
    rows = [
        [
            Fraction(alpha * ((1 if i == j else 0) + A[i][j]) - 1)
            for j in range(G.n)
        ]
        for i in range(G.n)
    ]
    return SymRatMatrix.from_rows(rows)


@dataclass(frozen=True)
class CopositeInstance:
    Q: SymRatMatrix
    p: GroupRingElement  # the quartic form (x^2)^T Q (x^2)


def odd_cycle_instance(m: int) -> CopositeInstance:
    """Q(C_m) for odd m >= 5 together with its even quartic form."""
    if m % 2 == 0 or m < 5:
        raise EvenOrSmall("need an odd cycle of size at least five")
    from .soscert import quartic_form

    Q = motzkin_straus_matrix(Graph.cycle(m))
    return CopositeInstance(Q=Q, p=quartic_form(Q))


@dataclass(frozen=True)
class CircuitReport:
    is_circuit: bool
    vertices: tuple[tuple[int, ...], ...] = ()
    interior: Optional[tuple[int, ...]] = None
    barycentric: Optional[tuple[Rat, ...]] = None
    reason: str = ""


def circuit_detect(S: SupportSet) -> CircuitReport:
    """Recognize circuit supports exactly.

    conv(S) must be a simplex with even vertices, and at most one
    non-vertex point is allowed, strictly inside with positive exact
    barycentric coordinates.
    """
    pts = S.sorted_points()
    if not pts:
        return CircuitReport(False, reason="empty support")
    verts = polytope.extreme_points(pts)
    inner = [p for p in pts if p not in set(verts)]
    if len(inner) > 1:
        return CircuitReport(False, reason="more than one non-vertex point")
    if any(any(x % 2 for x in v) for v in verts):
        return CircuitReport(False, reason="a vertex is not even")
    # simplex test: vertices affinely independent
    k = len(verts) - 1
    if k >= 1:
        rows = [[Fraction(x - y) for x, y in zip(v, verts[0])] for v in verts[1:]]
        from .exactcore import rref

        _, pivots = rref(rows)
        if len(pivots) != k:
            return CircuitReport(False, reason="vertices are affinely dependent")
    if not inner:
        return CircuitReport(True, vertices=tuple(verts))
    w = inner[0]
    # barycentric coordinates: solve sum l_i v_i = w, sum l_i = 1
    A = [[Fraction(v[i]) for v in verts] for i in range(S.n)]
    A.append([Fraction(1)] * len(verts))
    b = [Fraction(x) for x in w] + [Fraction(1)]
    # least-structure exact solve on the (possibly tall) system
    from .exactcore import solve_consistent

    lam = solve_consistent(A, b)
    if lam is None:
        return CircuitReport(False, reason="interior point outside affine hull")
    if any(l <= 0 for l in lam):
        return CircuitReport(False, reason="point is not strictly interior")
    return CircuitReport(
        True, vertices=tuple(verts), interior=w, barycentric=tuple(lam)
    )


def hilbert_sampler(case: str, seed: int = 0) -> GroupRingElement:
    """Random nonnegative instance in one of Hilbert's SOS-complete classes.

    Built as an explicit sum of squares with small integer coefficients, so
    the ground truth (SOS at d = 1) holds by construction.
    """
    rng = random.Random(seed)

    def rand_coeffs(k):
        out = [rng.randint(-3, 3) for _ in range(k)]
        if all(c == 0 for c in out):
            out[rng.randrange(k)] = 1
        return out

    if case == "univariate":
        if rng.random() < 0.25:
            # boundary flavor: squared product of rational-root linears, so
            # the Gram kernel (monomials at the roots) stays rational
            a, b = rng.randint(-3, 3), rng.randint(-3, 3)
            q = GroupRingElement(
                1,
                {
                    (Fraction(0),): Fraction(a * b),
                    (Fraction(1),): Fraction(-(a + b)),
                    (Fraction(2),): Fraction(1),
                },
            )
            return q * q
        # interior flavor: more squares than basis monomials
        total = GroupRingElement.zero(1)
        for _ in range(rng.randint(4, 6)):
            c = rand_coeffs(3)
            q = GroupRingElement(
                1, {(Fraction(i),): Fraction(c[i]) for i in range(3)}
            )
            total = total + q * q
        return total
    if case == "quadratic":
        # the Gram matrix of a quadratic is unique, so any square count works
        n = 3
        total = GroupRingElement.zero(n)
        for _ in range(rng.randint(2, n + 2)):
            c = rand_coeffs(n + 1)
            q = GroupRingElement.constant(n, c[0])
            for i in range(n):
                q = q + GroupRingElement.variable(n, i).scale(c[i + 1])
            total = total + q * q
        return total
    if case == "binary-quartic":
        # full rank: fewer squares can share an irrational real zero, which
        # puts the instance on the cone boundary with an irrational kernel
        monos = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
        total = GroupRingElement.zero(2)
        for _ in range(rng.randint(7, 9)):
            c = rand_coeffs(len(monos))
            q = GroupRingElement(
                2,
                {
                    (Fraction(a), Fraction(b)): Fraction(cc)
                    for (a, b), cc in zip(monos, c)
                    if cc
                },
            )
            total = total + q * q
        return total
    raise ValueError(f"unknown Hilbert case {case!r}")
