"""SOS membership with exact certificates, dual obstructions, copositivity.

The prover is numeric (a small dense interior point SDP); every verdict is
an exact rational object checked in exact-core arithmetic before it is
returned.  A claimed decomposition reconstructs the target with zero
residual and a PSD-certified Gram matrix; a claimed obstruction is a
rational moment vector whose matrix is exactly PSD and whose pairing with
the target is exactly negative.  When neither exact object can be
recovered the answer is Inconclusive, never a bare numeric opinion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import sdp
from .exactcore import (
    PsdStatus,
    Rat,
    SymRatMatrix,
    psd_check,
    rref,
    solve_consistent,
)
from .groupring import GroupRingElement, SupportSet, newton_half_basis

IntExp = tuple[int, ...]


class BasisTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class SosCertificate:
    """p = sum of squares witnessed by an exactly PSD Gram matrix."""

    basis: tuple[IntExp, ...]
    gram: SymRatMatrix

    @property
    def kind(self) -> str:
        return "sos"

    def reconstruct(self, n: int) -> GroupRingElement:
        acc: dict = {}
        bs = self.basis
        for i, bi in enumerate(bs):
            for j, bj in enumerate(bs):
                e = tuple(Fraction(x + y) for x, y in zip(bi, bj))
                acc[e] = acc.get(e, Fraction(0)) + self.gram[i, j]
        return GroupRingElement(n, acc)


@dataclass(frozen=True)
class DualCertificate:
    """Separating functional: y >= 0 on squares over the basis, < 0 on p."""

    basis: tuple[IntExp, ...]
    y: dict
    moment: SymRatMatrix
    value: Rat

    @property
    def kind(self) -> str:
        return "dual"


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return "inconclusive"


SosOutcome = SosCertificate | DualCertificate | Inconclusive


@dataclass
class SosOptions:
    basis_cap: int = 120
    sdp_tol: float = 1e-9
    sdp_max_iter: int = 80
    # denominator bounds for rounding numeric data to rationals
    primal_denominators: tuple[int, ...] = (10**4, 10**8, 10**12)
    dual_denominators: tuple[int, ...] = (2**24, 2**44)
    kernel_tolerances: tuple[float, ...] = (1e-3, 1e-5, 1e-7)
    # kernel guesses are RREF-normalized simple ratios; keep denominators low
    # so mild solver noise snaps to the exact vector instead of being kept
    kernel_denominators: tuple[int, ...] = (64, 1024)
    mix_exponents: tuple[int, ...] = (40, 30, 24, 18, 12, 8)


# --- problem assembly --------------------------------------------------------


def integer_support(p: GroupRingElement) -> list[IntExp]:
    out = []
    for e in p.terms:
        if any(x.denominator != 1 or x < 0 for x in e):
            raise ValueError("sos_check needs nonnegative integer exponents")
        out.append(tuple(int(x) for x in e))
    return sorted(out)


def build_problem(
    p: GroupRingElement, basis: Sequence[IntExp]
) -> sdp.GramMomentProblem:
    classes: dict[IntExp, list[tuple[int, int]]] = {}
    bs = list(basis)
    for i, bi in enumerate(bs):
        for j, bj in enumerate(bs):
            e = tuple(x + y for x, y in zip(bi, bj))
            classes.setdefault(e, []).append((i, j))
    labels = sorted(classes)
    pairs = [classes[e] for e in labels]
    pv = np.array([float(p.coefficient(e)) for e in labels])
    tv = np.array(
        [1.0 if any(i == j for (i, j) in classes[e]) else 0.0 for e in labels]
    )
    return sdp.GramMomentProblem(m=len(bs), classes=labels, pairs=pairs, p=pv, t=tv)


def box_moment(e: IntExp) -> Rat:
    """Moment of x^e for Lebesgue measure on [1,2]^n: exactly rational."""
    out = Fraction(1)
    for k in e:
        out *= Fraction(2 ** (k + 1) - 1, k + 1)
    return out


def moment_matrix_from_y(basis: Sequence[IntExp], y: dict) -> SymRatMatrix:
    rows = []
    for bi in basis:
        row = []
        for bj in basis:
            e = tuple(x + z for x, z in zip(bi, bj))
            row.append(Fraction(y[e]))
        rows.append(row)
    return SymRatMatrix.from_rows(rows)


def pairing(p: GroupRingElement, y: dict) -> Rat:
    total = Fraction(0)
    for e, c in p.terms.items():
        key = tuple(int(x) for x in e)
        total += c * Fraction(y[key])
    return total


# --- exact verification (prover-independent; used by the CLI verifier) -------


def verify_sos_certificate(p: GroupRingElement, cert: SosCertificate) -> tuple[bool, str]:
    if cert.gram.n != len(cert.basis):
        return False, "Gram size does not match basis"
    residual = cert.reconstruct(p.n) - p
    if not residual.is_zero():
        return False, f"nonzero reconstruction residual ({len(residual.terms)} terms)"
    verdict = psd_check(cert.gram)
    if not verdict.is_psd:
        return False, "Gram matrix is not PSD"
    return True, "ok"


def verify_dual_certificate(p: GroupRingElement, cert: DualCertificate) -> tuple[bool, str]:
    for i, bi in enumerate(cert.basis):
        for j, bj in enumerate(cert.basis):
            e = tuple(x + z for x, z in zip(bi, bj))
            if e not in cert.y or cert.moment[i, j] != Fraction(cert.y[e]):
                return False, f"moment matrix inconsistent with y at {e}"
    try:
        value = pairing(p, cert.y)
    except KeyError as ex:
        return False, f"y does not price exponent {ex}"
    if value != cert.value:
        return False, "stored value does not match the pairing"
    if not value < 0:
        return False, "pairing with the target is not negative"
    if not psd_check(cert.moment).is_psd:
        return False, "moment matrix is not PSD"
    return True, "ok"


# --- rounding: numeric matrices to exact rational certificates ---------------


def _round_fraction(x: float, max_den: int) -> Rat:
    return Fraction(x).limit_denominator(max_den)


def _round_sym(X: np.ndarray, max_den: int) -> list[list[Rat]]:
    m = X.shape[0]
    out = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            v = _round_fraction(float((X[i, j] + X[j, i]) / 2), max_den)
            out[i][j] = v
            out[j][i] = v
    return out


def _numeric_kernel_vectors(X: np.ndarray, tol: float, max_den: int = 10**4):
    """Rational guesses for the common kernel of the optimal face.

    Eigenvectors below tol are brought to reduced row echelon form (which
    normalizes entries to simple ratios) and rounded.  These are only
    guesses steering the exact projection; wrong guesses are caught later.
    """
    w, V = np.linalg.eigh((X + X.T) / 2)
    cols = [i for i, lam in enumerate(w) if lam < tol]
    if not cols:
        return []
    span = V[:, cols].T  # rows span the numeric kernel
    # numeric RREF with partial pivoting
    A = span.copy()
    rows, cols_n = A.shape
    r = 0
    for c in range(cols_n):
        piv = max(range(r, rows), key=lambda i: abs(A[i, c]), default=None)
        if piv is None or abs(A[piv, c]) < 1e-8:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] / A[r, c]
        for i in range(rows):
            if i != r:
                A[i] = A[i] - A[i, c] * A[r]
        r += 1
        if r == rows:
            break
    out = []
    for i in range(r):
        vec = tuple(_round_fraction(float(x), max_den) for x in A[i])
        if any(v != 0 for v in vec):
            out.append(vec)
    return out


def _project_to_constraints(
    G0: list[list[Rat]],
    problem: sdp.GramMomentProblem,
    p: GroupRingElement,
    kernel_vectors: Sequence[Sequence[Rat]] = (),
) -> Optional[list[list[Rat]]]:
    """Exact Frobenius projection of G0 onto the affine constraint set.

    Constraints: every class sum equals the target coefficient, plus G k = 0
    for each guessed kernel vector.  Returns None when the combined system
    is inconsistent (a wrong kernel guess).
    """
    m = problem.m
    var_index = {}
    for i in range(m):
        for j in range(i, m):
            var_index[(i, j)] = len(var_index)
    nvars = len(var_index)
    weights = [Fraction(0)] * nvars
    for (i, j), k in var_index.items():
        weights[k] = Fraction(1) if i == j else Fraction(2)

    rows: list[dict[int, Rat]] = []
    rhs: list[Rat] = []
    for e, prs in zip(problem.classes, problem.pairs):
        row: dict[int, Rat] = {}
        for (i, j) in prs:
            key = var_index[(min(i, j), max(i, j))]
            row[key] = row.get(key, Fraction(0)) + 1
        rows.append(row)
        rhs.append(p.coefficient(e))
    for kv in kernel_vectors:
        for r in range(m):
            row = {}
            for c in range(m):
                if kv[c] == 0:
                    continue
                key = var_index[(min(r, c), max(r, c))]
                row[key] = row.get(key, Fraction(0)) + Fraction(kv[c])
            rows.append(row)
            rhs.append(Fraction(0))

    g0 = [Fraction(0)] * nvars
    for (i, j), k in var_index.items():
        g0[k] = Fraction(G0[i][j])

    # lambda solve: (A W^-1 A^T) lam = rhs - A g0
    nr = len(rows)
    AWAt = [[Fraction(0)] * nr for _ in range(nr)]
    for a in range(nr):
        for b in range(a, nr):
            s = Fraction(0)
            ra, rb = rows[a], rows[b]
            inner = ra if len(ra) <= len(rb) else rb
            other = rb if inner is ra else ra
            for k, v in inner.items():
                ov = other.get(k)
                if ov is not None:
                    s += v * ov / weights[k]
            AWAt[a][b] = s
            AWAt[b][a] = s
    resid = []
    for row, b in zip(rows, rhs):
        resid.append(b - sum(v * g0[k] for k, v in row.items()))
    lam = solve_consistent(AWAt, resid)
    if lam is None:
        return None
    g = list(g0)
    for row, l in zip(rows, lam):
        if l == 0:
            continue
        for k, v in row.items():
            g[k] += l * v / weights[k]
    G = [[Fraction(0)] * m for _ in range(m)]
    for (i, j), k in var_index.items():
        G[i][j] = g[k]
        G[j][i] = g[k]
    # the normal equations may be consistent yet underdetermined; re-check
    for row, b in zip(rows, rhs):
        if sum(v * g[k] for k, v in row.items()) != b:
            return None
    return G


def _try_primal(
    p: GroupRingElement,
    basis: list[IntExp],
    problem: sdp.GramMomentProblem,
    res: sdp.SdpResult,
    options: SosOptions,
) -> Optional[SosCertificate]:
    Xhat = res.X + max(res.mu, 0.0) * np.eye(problem.m)
    attempts: list[tuple[int, list]] = []
    for den in options.primal_denominators:
        attempts.append((den, []))
    seen_kernels = set()
    for tol in options.kernel_tolerances:
        for kden in options.kernel_denominators:
            kv = _numeric_kernel_vectors(Xhat, tol, kden)
            if not kv:
                continue
            key = tuple(tuple(v) for v in kv)
            if key in seen_kernels:
                continue
            seen_kernels.add(key)
            for den in options.primal_denominators:
                attempts.append((den, kv))
    for den, kv in attempts:
        G0 = _round_sym(Xhat, den)
        G = _project_to_constraints(G0, problem, p, kv)
        if G is None:
            continue
        M = SymRatMatrix.from_rows(G)
        if psd_check(M).is_psd:
            cert = SosCertificate(basis=tuple(basis), gram=M)
            ok, _ = verify_sos_certificate(p, cert)
            if ok:
                return cert
    return None


def _normalize_dual(
    p: GroupRingElement,
    basis: list[IntExp],
    y: dict,
) -> Optional[DualCertificate]:
    """Exact validation of a rational moment vector, then normalization.

    PSD-ness is checked before scaling, so the (dyadic) normalization
    factor cannot inflate the arithmetic of the certification step.
    """
    value = pairing(p, y)
    if not value < 0:
        return None
    M = moment_matrix_from_y(basis, y)
    if not psd_check(M).is_psd:
        return None
    zero = (0,) * p.n
    if zero in y and Fraction(y[zero]) > 0:
        scale = 1 / Fraction(y[zero])
    elif M.n == 0:
        scale = Fraction(1)
    else:
        tr = sum(M[i, i] for i in range(M.n))
        if tr <= 0:
            return None
        # dyadic scale keeping trace in [1, 2): entries stay small
        scale = Fraction(1)
        while tr * scale >= 2:
            scale /= 2
        while tr * scale < 1:
            scale *= 2
    y2 = {e: Fraction(v) * scale for e, v in y.items()}
    return DualCertificate(
        basis=tuple(basis),
        y=y2,
        moment=M.scale(scale),
        value=value * scale,
    )


def _try_dual(
    p: GroupRingElement,
    basis: list[IntExp],
    problem: sdp.GramMomentProblem,
    res: sdp.SdpResult,
    options: SosOptions,
) -> Optional[DualCertificate]:
    if res.mu > -1e-12:
        return None
    # walk the central path from the strictly interior box-moment vector
    # until the pairing is decisively negative; such a point keeps a PD
    # margin far above the rounding error and therefore rounds exactly
    ybox_exact = {e: box_moment(e) for e in problem.classes}
    ybox = np.array([float(ybox_exact[e]) for e in problem.classes])
    y0 = ybox / float(problem.t @ ybox)
    ys = []
    pt = sdp.interior_moment_point(problem, y0, target_value=0.5 * res.mu)
    if pt is None:
        pt = sdp.interior_moment_point(problem, y0, target_value=0.1 * res.mu)
    if pt is not None:
        ys.append(pt.y)
    ys.append(res.y)
    for yv, den in itertools.product(ys, options.dual_denominators):
        y = {}
        for e, v in zip(problem.classes, yv):
            y[e] = _round_fraction(float(v), den)
        cert = _normalize_dual(p, basis, y)
        if cert is not None:
            return cert
    # last resort: mix with the exact box-moment vector to restore PSD-ness
    for yv in ys:
        base = {e: _round_fraction(float(v), options.dual_denominators[-1])
                for e, v in zip(problem.classes, yv)}
        for shift in options.mix_exponents:
            lam = Fraction(1, 2**shift)
            mixed = {e: (1 - lam) * base[e] + lam * ybox_exact[e]
                     for e in problem.classes}
            cert = _normalize_dual(p, basis, mixed)
            if cert is not None:
                return cert
    return None


def _dual_for_unmatched(
    p: GroupRingElement,
    basis: list[IntExp],
    problem: sdp.GramMomentProblem,
    unmatched: list[IntExp],
) -> Optional[DualCertificate]:
    """Support exponents outside T2+T2 cannot be produced by any square over
    the basis, so pricing them alone yields an obstruction with a PD box
    moment matrix on the matched part."""
    y = {e: box_moment(e) for e in problem.classes}
    matched_part = Fraction(0)
    for e, c in p.terms.items():
        key = tuple(int(x) for x in e)
        if key not in y:
            continue
        matched_part += c * y[key]
    denom = sum(abs(p.coefficient(e)) for e in unmatched)
    big = (max(matched_part, Fraction(0)) + 1) / denom
    for e in unmatched:
        c = p.coefficient(e)
        y[e] = -big if c > 0 else big
    return _normalize_dual(p, basis, y)


# --- the membership test ------------------------------------------------------


def sos_check(
    p: GroupRingElement,
    basis_override: Optional[SupportSet] = None,
    options: Optional[SosOptions] = None,
) -> SosOutcome:
    """Decide SOS membership of p over its Newton-polytope basis.

    Returns an exactly verified SosCertificate or DualCertificate, or
    Inconclusive when neither exact object could be recovered from the
    numeric solution within the retry schedule.
    """
    options = options or SosOptions()
    support = integer_support(p)
    if not support:
        return SosCertificate(basis=(), gram=SymRatMatrix.zeros(0))
    if basis_override is not None:
        basis = basis_override.sorted_points()
    else:
        basis = newton_half_basis(SupportSet.of(p.n, support), 1).sorted_points()
    if len(basis) > options.basis_cap:
        raise BasisTooLarge(f"|T2| = {len(basis)} exceeds cap {options.basis_cap}")
    problem = build_problem(p, basis)
    class_set = set(problem.classes)
    unmatched = [e for e in support if e not in class_set]
    if unmatched:
        cert = _dual_for_unmatched(p, basis, problem, unmatched)
        if cert is not None:
            return cert
        return Inconclusive(
            "support exponents unmatched by the basis, but no obstruction built",
            {"unmatched": unmatched},
        )
    if problem.m == 0:
        # no basis and no support left: p was zero (handled above)
        return Inconclusive("empty basis", {})
    res = sdp.solve(problem, tol=options.sdp_tol, max_iter=options.sdp_max_iter)
    if res.status == "failed":
        return Inconclusive("numeric SDP failure", {"status": res.status})

    order = ("primal", "dual") if res.mu >= -1e-6 else ("dual", "primal")
    for route in order:
        if route == "primal":
            cert = _try_primal(p, basis, problem, res, options)
        else:
            cert = _try_dual(p, basis, problem, res, options)
        if cert is not None:
            return cert
    return Inconclusive(
        "neither exact certificate recovered at the precision cap",
        {
            "mu": res.mu,
            "sdp_status": res.status,
            "gap": res.gap,
            "dual_res": res.dual_res,
        },
    )


# --- power-substitution membership and copositivity ---------------------------


@dataclass(frozen=True)
class SigmaDBranch:
    signs: tuple[int, ...]
    outcome: SosOutcome


@dataclass(frozen=True)
class SigmaDReport:
    d: int
    branches: tuple[SigmaDBranch, ...]
    verdict: str  # 'PASS' | 'FAIL' | 'INCONCLUSIVE'

    def branch_for(self, signs: Sequence[int]) -> SosOutcome:
        for b in self.branches:
            if b.signs == tuple(signs):
                return b.outcome
        raise KeyError(signs)


def sigma_d_check(
    p: GroupRingElement,
    d: int,
    options: Optional[SosOptions] = None,
) -> SigmaDReport:
    """Membership in the cone of polynomials SOS after x -> x^d, all signs.

    For each sign vector s the branch polynomial is psi_d(phi_s(p)); sign
    vectors with identical branch polynomials share one SOS run.
    """
    if d < 1:
        raise ValueError("d must be a positive integer")
    cache: dict = {}
    branches = []
    for signs in itertools.product((1, -1), repeat=p.n):
        q = p.phi(signs).psi(d)
        key = tuple(sorted((e, c) for e, c in q.terms.items()))
        if key not in cache:
            cache[key] = sos_check(q, options=options)
        branches.append(SigmaDBranch(signs=signs, outcome=cache[key]))
    kinds = {b.outcome.kind for b in branches}
    if kinds == {"sos"}:
        verdict = "PASS"
    elif "dual" in kinds:
        verdict = "FAIL"
    else:
        verdict = "INCONCLUSIVE"
    return SigmaDReport(d=d, branches=tuple(branches), verdict=verdict)


@dataclass(frozen=True)
class CopositivityReport:
    dmax: int
    falsification: Optional[tuple[int, Rat]]  # (basis index, value) if trivial
    per_d: tuple[tuple[int, Optional[SosOutcome]], ...]
    passed_at: Optional[int]

    @property
    def certified(self) -> bool:
        return self.passed_at is not None


def quartic_form(Q: SymRatMatrix) -> GroupRingElement:
    """The even polynomial (x_1^2, ..., x_n^2) Q (x_1^2, ..., x_n^2)^T."""
    n = Q.n
    acc: dict = {}
    for i in range(n):
        for j in range(n):
            e = [0] * n
            e[i] += 2
            e[j] += 2
            key = tuple(Fraction(x) for x in e)
            acc[key] = acc.get(key, Fraction(0)) + Q[i, j]
    return GroupRingElement(n, acc)


def copositivity_cert(
    Q: SymRatMatrix,
    dmax: int,
    options: Optional[SosOptions] = None,
) -> CopositivityReport:
    """Search d = 1..dmax for an SOS certificate of copositivity of Q.

    The form is even in every variable, so the sign branches coincide and
    one sos_check per d suffices.  A negative diagonal entry falsifies
    copositivity outright (value at a standard basis vector) and the d-loop
    is skipped: no power substitution of a negative form is a square sum.
    """
    p = quartic_form(Q)
    for i in range(Q.n):
        if Q[i, i] < 0:
            return CopositivityReport(
                dmax=dmax,
                falsification=(i, Q[i, i]),
                per_d=tuple((d, None) for d in range(1, dmax + 1)),
                passed_at=None,
            )
    per_d = []
    passed_at = None
    for d in range(1, dmax + 1):
        outcome = sos_check(p.psi(d), options=options)
        per_d.append((d, outcome))
        if outcome.kind == "sos":
            passed_at = d
            break
    return CopositivityReport(
        dmax=dmax,
        falsification=None,
        per_d=tuple(per_d),
        passed_at=passed_at,
    )


# --- the Horn restriction identities ------------------------------------------


@dataclass(frozen=True)
class HornRestrictionReport:
    d: int
    identities: tuple[bool, ...]  # one per i = 1..5
    corner_value: Rat             # H_d(1,0,0,0,0)

    @property
    def all_hold(self) -> bool:
        return all(self.identities) and self.corner_value == 1


def horn_restriction_check(d: int) -> HornRestrictionReport:
    """Exact check of the five restriction identities for h(x^d).

    Restricting H_d to x_i = x_{i+1} = 0 must equal the perfect square
    (x_{i+2}^d - x_{i+3}^d + x_{i+4}^d)^2, and H_d does not vanish at the
    first standard basis vector; together these drive the parity argument
    that h never becomes SOS under power substitutions.
    """
    if d < 1:
        raise ValueError("d must be a positive integer")
    from .instances import horn

    H = horn().psi(d)
    results = []
    for i in range(5):
        restricted = H.substitute_zero(i).substitute_zero((i + 1) % 5)
        target = GroupRingElement.zero(5)
        for idx, sign in (((i + 2) % 5, 1), ((i + 3) % 5, -1), ((i + 4) % 5, 1)):
            e = [0] * 5
            e[idx] = d
            target = target + GroupRingElement.monomial(5, e, sign)
        results.append(restricted == target * target)
    # value at (1,0,0,0,0): only terms supported on x1 alone survive
    corner_exact = Fraction(0)
    for e, c in H.terms.items():
        if all(x == 0 for x in e[1:]):
            corner_exact += c
    return HornRestrictionReport(
        d=d, identities=tuple(results), corner_value=corner_exact
    )


class NotACircuit(ValueError):
    pass


def sonc_reznick_pass(
    p: GroupRingElement,
    options: Optional[SosOptions] = None,
) -> SigmaDReport:
    """Certify a circuit-supported nonnegative polynomial at Reznick's bound.

    The support must be a circuit set; the power substitution degree is
    then d = max(2, n-1), which suffices for sums of nonnegative circuit
    polynomials.
    """
    from .instances import circuit_detect

    S = SupportSet.from_element(p)
    report = circuit_detect(S)
    if not report.is_circuit:
        raise NotACircuit("support of p is not a circuit set")
    d = max(2, p.n - 1)
    return sigma_d_check(p, d, options=options)
