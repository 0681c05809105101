"""Dense primal-dual interior point solver for the Gram/moment SDP pair.

For a target polynomial p over monomial basis T2 (size m) with exponent
classes E = T2 + T2, the pair solved here is

    moment side:  min  p.y   s.t.  M(y) >= 0,  t.y = 1
    Gram side:    max  mu    s.t.  X >= 0,  <B_e, X> + mu t_e = p_e

where M(y) = sum_e y_e B_e is the moment matrix, B_e the 0/1 locator of
class e and t_e marks classes containing a diagonal pair.  The optimum mu
is the largest margin with p - mu * sum_{b in T2} x^(2b) still a sum of
squares, so its sign separates the certificate routes: mu >= 0 means p is
SOS over T2, mu < 0 means the optimal y is a separating functional.

Two engines live here: an infeasible-start HKM path-following method for
the optimum itself, and a feasible-start barrier descent on the moment
side that walks the central path from the strictly interior box-moment
vector until the pairing with p is negative enough.  The barrier iterates
keep M(y) positive definite with a healthy margin, which is what exact
rational rounding needs.

These are numerical engines only; all certificates are reconstructed and
verified in exact rational arithmetic elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass
class GramMomentProblem:
    """Index data shared by the solver and the exact rounding code."""

    m: int                               # basis size
    classes: list                        # class labels (exponent tuples), length K
    pairs: list[list[tuple[int, int]]]   # ordered (i,j) pairs per class
    p: np.ndarray                        # target coefficients per class
    t: np.ndarray                        # diagonal indicator per class

    @property
    def K(self) -> int:
        return len(self.classes)


@dataclass
class SdpResult:
    status: str                  # 'optimal' | 'stalled' | 'max_iter' | 'failed'
    mu: float
    y: np.ndarray                # moment vector per class
    X: np.ndarray                # Gram-side matrix (for p - mu*q)
    Z: np.ndarray                # moment matrix M(y) at the solution
    gap: float
    primal_res: float
    dual_res: float
    iterations: int


@dataclass
class BarrierPoint:
    """Strictly interior moment vector: M(y) > margin, p.y = value."""

    y: np.ndarray
    value: float
    margin: float                # smallest eigenvalue of M(y)
    feas: float                  # residual of the normalization t.y = 1


def _moment_matrix(prob: GramMomentProblem, y: np.ndarray) -> np.ndarray:
    m = prob.m
    Z = np.zeros((m, m))
    for e in range(prob.K):
        v = y[e]
        if v == 0.0:
            continue
        for (i, j) in prob.pairs[e]:
            Z[i, j] += v
    return Z


def _class_sums(prob: GramMomentProblem, X: np.ndarray) -> np.ndarray:
    out = np.zeros(prob.K)
    for e in range(prob.K):
        s = 0.0
        for (i, j) in prob.pairs[e]:
            s += X[i, j]
        out[e] = s
    return out


class _ClassIndex:
    """Gather/reduce helpers over the ordered-pair partition of the entries."""

    def __init__(self, prob: GramMomentProblem):
        self.rows = [np.array([ij[0] for ij in prob.pairs[e]], dtype=int)
                     for e in range(prob.K)]
        self.cols = [np.array([ij[1] for ij in prob.pairs[e]], dtype=int)
                     for e in range(prob.K)]
        self.all_rows = np.concatenate(self.rows)
        self.all_cols = np.concatenate(self.cols)
        self.bounds = np.cumsum([0] + [len(r) for r in self.rows])

    def class_sums(self, W: np.ndarray) -> np.ndarray:
        return np.add.reduceat(W[self.all_rows, self.all_cols], self.bounds[:-1])

    def schur(self, L: np.ndarray, R: np.ndarray, K: int) -> np.ndarray:
        """H[e, f] = <B_e, L B_f R>."""
        H = np.empty((K, K))
        for f in range(K):
            V = L[:, self.rows[f]] @ R[self.cols[f], :]
            H[:, f] = self.class_sums(V)
        return (H + H.T) / 2


def _is_pd(M: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(M)
        return True
    except np.linalg.LinAlgError:
        return False


def _max_step(M: np.ndarray, dM: np.ndarray, tau: float = 0.98) -> float:
    """Largest alpha <= 1 keeping M + alpha*dM safely positive definite."""
    try:
        L = np.linalg.cholesky(M)
        S = np.linalg.solve(L, np.linalg.solve(L, dM).T)
        lam = np.linalg.eigvalsh((S + S.T) / 2).min()
        alpha = 1.0 if lam >= -1e-16 else min(1.0, -tau / lam)
    except np.linalg.LinAlgError:
        alpha = 1.0
    while alpha > 1e-13 and not _is_pd(M + alpha * dM):
        alpha *= 0.7
    return alpha


def solve(prob: GramMomentProblem, tol: float = 1e-9, max_iter: int = 80) -> SdpResult:
    m, K = prob.m, prob.K
    p, t = prob.p, prob.t
    scale = max(1.0, float(np.abs(p).max()))
    idx = _ClassIndex(prob)

    X = np.eye(m) * scale
    Z = np.eye(m) * scale
    y = np.zeros(K)
    mu_hat = 0.0

    def residuals():
        Rp = Z - _moment_matrix(prob, y)          # want M(y) = Z
        rd = p - mu_hat * t - idx.class_sums(X)
        ra = 1.0 - float(t @ y)
        return Rp, rd, ra

    it = 0
    status = "max_iter"
    for it in range(1, max_iter + 1):
        Rp, rd, ra = residuals()
        gap = float(np.tensordot(X, Z)) / m
        pr = np.linalg.norm(Rp) / (1 + np.linalg.norm(Z))
        dr = np.linalg.norm(rd) / (1 + np.linalg.norm(p))
        ar = abs(ra)
        if max(pr, dr, ar) < tol and gap / scale < max(tol, 1e-12):
            status = "optimal"
            break

        try:
            Zinv = np.linalg.inv(Z)
        except np.linalg.LinAlgError:
            status = "stalled"
            break
        Zinv = (Zinv + Zinv.T) / 2
        H = idx.schur(X, Zinv, K)

        KKT = np.zeros((K + 1, K + 1))
        KKT[:K, :K] = H
        KKT[:K, K] = -t
        KKT[K, :K] = t
        # tiny Tikhonov keeps the factorization stable near the boundary
        KKT[:K, :K] += np.eye(K) * 1e-13 * (1 + np.abs(H).max())

        def solve_direction(Ccomp: np.ndarray):
            # Ccomp is the complementarity target (sigma*nu*I - XZ - corr)
            W = (Ccomp @ Zinv) - X + X @ Rp @ Zinv
            g = idx.class_sums(W) - rd
            rhs = np.concatenate([g, [ra]])
            try:
                sol = np.linalg.solve(KKT, rhs)
            except np.linalg.LinAlgError:
                return None
            dy, dmu = sol[:K], sol[K]
            dZ = _moment_matrix(prob, dy) - Rp
            dX = (Ccomp - X @ dZ) @ Zinv - X
            dX = (dX + dX.T) / 2
            return dy, dmu, dX, dZ

        nu = float(np.tensordot(X, Z)) / m
        aff = solve_direction(-X @ Z)
        if aff is None:
            status = "failed"
            break
        dy_a, dmu_a, dX_a, dZ_a = aff
        ap = _max_step(X, dX_a)
        ad = _max_step(Z, dZ_a)
        nu_aff = float(np.tensordot(X + ap * dX_a, Z + ad * dZ_a)) / m
        sigma = min(1.0, max(0.0, (nu_aff / nu)) ** 3)
        # keep centering while infeasibility dominates the gap, otherwise the
        # iterates reach the cone boundary before the residuals vanish
        if max(pr, dr, ar) * scale > 0.1 * gap:
            sigma = max(sigma, 0.5)

        Ccomp = sigma * nu * np.eye(m) - X @ Z - dX_a @ dZ_a
        step = solve_direction(Ccomp)
        if step is None:
            status = "failed"
            break
        dy, dmu, dX, dZ = step
        ap = _max_step(X, dX)
        ad = _max_step(Z, dZ)
        if min(ap, ad) < 1e-12:
            status = "stalled"
            break
        # (X, mu) are the Gram-side variables, (y, Z) the moment side;
        # each residual then contracts by exactly (1 - alpha) per step
        X = X + ap * dX
        mu_hat = mu_hat + ap * dmu
        y = y + ad * dy
        Z = Z + ad * dZ
        X = (X + X.T) / 2
        Z = (Z + Z.T) / 2

    Rp, rd, ra = residuals()
    return SdpResult(
        status=status,
        mu=mu_hat,
        y=y.copy(),
        X=X.copy(),
        Z=Z.copy(),
        gap=float(np.tensordot(X, Z)) / m,
        primal_res=float(np.linalg.norm(Rp) + abs(ra)),
        dual_res=float(np.linalg.norm(rd)),
        iterations=it,
    )


def interior_moment_point(
    prob: GramMomentProblem,
    start_y: np.ndarray,
    target_value: float,
    max_newton: int = 200,
) -> Optional[BarrierPoint]:
    """Feasible-start barrier descent on the moment side.

    Minimizes p.y - tau*logdet M(y) on the slice t.y = 1, decreasing tau
    until p.y <= target_value.  Every iterate keeps M(y) strictly positive
    definite, so the returned point rounds to an exactly PSD rational
    moment vector; the eigenvalue margin is reported for choosing the
    rounding precision.  Returns None if the target is never reached.
    """
    m, K = prob.m, prob.K
    p, t = prob.p, prob.t
    idx = _ClassIndex(prob)
    y = start_y.copy()
    M = _moment_matrix(prob, y)
    if not _is_pd(M):
        return None

    def point() -> BarrierPoint:
        My = _moment_matrix(prob, y)
        return BarrierPoint(
            y=y.copy(),
            value=float(p @ y),
            margin=float(np.linalg.eigvalsh((My + My.T) / 2).min()),
            feas=abs(1.0 - float(t @ y)),
        )

    tau = max(1.0, abs(float(p @ y)))
    total = 0
    while total < max_newton:
        # Newton steps at this tau
        for _ in range(40):
            total += 1
            M = _moment_matrix(prob, y)
            try:
                Minv = np.linalg.inv(M)
            except np.linalg.LinAlgError:
                return None
            Minv = (Minv + Minv.T) / 2
            grad = p - tau * idx.class_sums(Minv)
            H = tau * idx.schur(Minv, Minv, K)
            KKT = np.zeros((K + 1, K + 1))
            KKT[:K, :K] = H + np.eye(K) * 1e-12 * (1 + np.abs(H).max())
            KKT[:K, K] = t
            KKT[K, :K] = t
            rhs = np.concatenate([-grad, [1.0 - float(t @ y)]])
            try:
                sol = np.linalg.solve(KKT, rhs)
            except np.linalg.LinAlgError:
                return None
            dy = sol[:K]
            dM = _moment_matrix(prob, dy)
            alpha = min(1.0, 0.9 * _max_step(M, dM))
            if alpha <= 1e-13:
                break
            y = y + alpha * dy
            # Newton decrement small enough: recenter at lower tau
            if float(dy @ (H @ dy)) ** 0.5 < 0.25 * tau or alpha < 1e-4:
                break
        if float(p @ y) <= target_value:
            pt = point()
            if pt.margin > 0:
                return pt
        tau /= 5.0
        if tau < 1e-14:
            break
    pt = point()
    return pt if (pt.value <= target_value and pt.margin > 0) else None
