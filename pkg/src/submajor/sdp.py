"""Small dense primal-dual interior-point solver for linear matrix inequalities.

Problems are posed in LMI form::

    maximize    b @ y
    subject to  F0_j + sum_k y_k F_jk  >= 0      for every block j

with Hermitian blocks.  Complex blocks are replaced by their real symmetric
embedding ``[[Re H, -Im H], [Im H, Re H]]``.  Internally this is the dual of
the standard-form SDP ``min <C, X> s.t. <A_k, X> = b_k, X >= 0`` with
``C_j = F0_j`` and ``A_jk = -F_jk``.  The iteration is an infeasible-start
path-following method with the HKM search direction and a Mehrotra
predictor-corrector step.

The multiplier ``X_j`` of each block is returned in Hermitian form: for every
feasible ``y``, ``b @ y <= sum_j Re<F0_j, X_j>`` whenever
``sum_j Re<F_jk, X_j> = -b_k`` and all ``X_j >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

GAP_TOL = 1e-8
FEAS_TOL = 1e-9
MAX_ITER = 200


@dataclass
class LMIBlock:
    const: np.ndarray  # (n, n)
    coeffs: np.ndarray  # (K, n, n)

    def value(self, y: np.ndarray) -> np.ndarray:
        return self.const + np.einsum("k,kab->ab", y, self.coeffs)


@dataclass
class LMISolution:
    y: np.ndarray
    multipliers: list
    primal_value: float  # b @ y
    dual_value: float  # upper bound sum_j <F0_j, X_j>
    status: str
    iterations: int
    primal_infeasibility: float
    dual_infeasibility: float
    relative_gap: float
    history: list = field(default_factory=list, repr=False)

    @property
    def converged(self) -> bool:
        return self.status == "optimal"

    def stats(self) -> dict:
        return {
            "status": self.status,
            "iterations": self.iterations,
            "objective": self.primal_value,
            "dual_bound": self.dual_value,
            "relative_gap": self.relative_gap,
            "lmi_residual": self.primal_infeasibility,
            "multiplier_residual": self.dual_infeasibility,
        }


def _is_real(a: np.ndarray) -> bool:
    return not np.iscomplexobj(a) or not np.any(a.imag)


def _embed(H: np.ndarray) -> np.ndarray:
    re, im = H.real, H.imag
    top = np.concatenate([re, -im], axis=-1)
    bot = np.concatenate([im, re], axis=-1)
    return np.concatenate([top, bot], axis=-2)


def _unembed(X: np.ndarray) -> np.ndarray:
    n = X.shape[0] // 2
    return (X[:n, :n] + X[n:, n:]) + 1j * (X[n:, :n] - X[:n, n:])


def _sym(M):
    return (M + np.swapaxes(M, -1, -2)) / 2


def _max_step(X: np.ndarray, dX: np.ndarray) -> float:
    """Largest ``t`` with ``X + t dX >= 0`` (X positive definite)."""
    try:
        L = np.linalg.cholesky(X)
    except np.linalg.LinAlgError:
        return 0.0
    W = sla.solve_triangular(L, dX, lower=True)
    W = sla.solve_triangular(L, W.T, lower=True)
    lo = np.linalg.eigvalsh(_sym(W))[0]
    return np.inf if lo >= 0 else -1.0 / lo


def _chol_inv(Z: np.ndarray) -> np.ndarray:
    c = sla.cho_factor(Z, lower=True)
    return _sym(sla.cho_solve(c, np.eye(Z.shape[0])))


def solve_lmi(
    b,
    blocks: list[LMIBlock],
    gap_tol: float = GAP_TOL,
    feas_tol: float = FEAS_TOL,
    max_iter: int = MAX_ITER,
) -> LMISolution:
    """Maximize ``b @ y`` subject to the block LMIs.

    Stops when the relative duality gap is at most ``gap_tol`` and both
    residuals are at most ``feas_tol``; otherwise reports ``max_iter`` or
    ``stalled``.  Never raises on non-convergence; inspect ``status``.
    """
    b = np.asarray(b, dtype=float)
    K = b.shape[0]
    complex_block = [not (_is_real(blk.const) and _is_real(blk.coeffs)) for blk in blocks]
    C, A = [], []
    for blk, cplx in zip(blocks, complex_block):
        if blk.coeffs.shape[0] != K:
            raise ValueError("every block needs one coefficient matrix per variable")
        if cplx:
            C.append(_embed(blk.const))
            A.append(-_embed(blk.coeffs))
        else:
            C.append(np.real(blk.const).astype(float))
            A.append(-np.real(blk.coeffs).astype(float))
    C = [_sym(c) for c in C]
    A = [_sym(a) for a in A]
    sizes = [c.shape[0] for c in C]
    n_tot = sum(sizes)

    def op_A(W):
        return sum(np.einsum("kab,ab->k", a, w) for a, w in zip(A, W))

    def op_At(v):
        return [np.einsum("k,kab->ab", v, a) for a in A]

    norm_b = 1.0 + np.linalg.norm(b)
    norm_C = 1.0 + np.sqrt(sum(np.sum(c * c) for c in C))

    X, Z = [], []
    for c, a, n in zip(C, A, sizes):
        a_norms = np.sqrt(np.sum(a * a, axis=(1, 2)))
        xi = max(10.0, np.sqrt(n), n * float(np.max((1.0 + np.abs(b)) / (1.0 + a_norms))))
        eta = max(10.0, np.sqrt(n), float(a_norms.max(initial=0.0)), float(np.linalg.norm(c)))
        X.append(xi * np.eye(n))
        Z.append(eta * np.eye(n))
    y = np.zeros(K)

    status = "max_iter"
    history = []
    step_p = step_d = 1.0
    best = None
    it = 0
    for it in range(max_iter + 1):
        rp = b - op_A(X)
        Aty = op_At(y)
        Rd = [c - z - aty for c, z, aty in zip(C, Z, Aty)]
        pobj = float(sum(np.sum(c * x) for c, x in zip(C, X)))
        dobj = float(b @ y)
        gap = float(sum(np.sum(x * z) for x, z in zip(X, Z)))
        mu = gap / n_tot
        pinf = float(np.linalg.norm(rp)) / norm_b
        dinf = float(np.sqrt(sum(np.sum(r * r) for r in Rd))) / norm_C
        relgap = max(abs(pobj - dobj), gap) / (1.0 + abs(pobj) + abs(dobj))
        history.append((pobj, dobj, relgap, pinf, dinf))
        score = max(relgap / gap_tol, pinf / feas_tol, dinf / feas_tol)
        if best is None or score < best[0]:
            best = (score, y.copy(), [x.copy() for x in X], pobj, dobj, relgap, pinf, dinf, it)
        if relgap <= gap_tol and pinf <= feas_tol and dinf <= feas_tol:
            status = "optimal"
            break
        if it == max_iter:
            break
        if max(abs(pobj), abs(dobj), np.abs(y).max(initial=0.0)) > 1e12:
            status = "diverged"
            break
        try:
            Zinv = [_chol_inv(z) for z in Z]
        except np.linalg.LinAlgError:
            status = "stalled"
            break
        M = np.zeros((K, K))
        for a, x, zi in zip(A, X, Zinv):
            G = x @ a @ zi
            M += np.einsum("kab,lab->kl", a, G)
        M = (M + M.T) / 2
        try:
            fac = sla.cho_factor(M, lower=True)

            def solve(r):
                return sla.cho_solve(fac, r)
        except np.linalg.LinAlgError:
            Mp = M + 1e-14 * np.trace(M) / K * np.eye(K)

            def solve(r):
                return np.linalg.lstsq(Mp, r, rcond=None)[0]

        XRZ = [x @ r @ zi for x, r, zi in zip(X, Rd, Zinv)]
        base = b + op_A(XRZ)

        # predictor
        dy = solve(base)
        dZa = [r - aty for r, aty in zip(Rd, op_At(dy))]
        dXa = [_sym(-x - x @ dz @ zi) for x, dz, zi in zip(X, dZa, Zinv)]
        ap = min(1.0, min(_max_step(x, dx) for x, dx in zip(X, dXa)))
        ad = min(1.0, min(_max_step(z, dz) for z, dz in zip(Z, dZa)))
        mu_aff = sum(np.sum((x + ap * dx) * (z + ad * dz)) for x, dx, z, dz in zip(X, dXa, Z, dZa)) / n_tot
        sigma = float(np.clip((mu_aff / mu) ** 3, 0.0, 1.0)) if mu > 0 else 0.0

        # corrector
        corr = [dx @ dz @ zi for dx, dz, zi in zip(dXa, dZa, Zinv)]
        rhs = base - sigma * mu * op_A(Zinv) + op_A(corr)
        dy = solve(rhs)
        dZ = [r - aty for r, aty in zip(Rd, op_At(dy))]
        dX = [_sym(sigma * mu * zi - x - x @ dz @ zi - c) for x, dz, zi, c in zip(X, dZ, Zinv, corr)]
        gamma = 0.9 + 0.09 * min(step_p, step_d)
        step_p = min(1.0, gamma * min(_max_step(x, dx) for x, dx in zip(X, dX)))
        step_d = min(1.0, gamma * min(_max_step(z, dz) for z, dz in zip(Z, dZ)))
        if step_p < 1e-12 and step_d < 1e-12:
            status = "stalled"
            break
        X = [_sym(x + step_p * dx) for x, dx in zip(X, dX)]
        y = y + step_d * dy
        Z = [_sym(z + step_d * dz) for z, dz in zip(Z, dZ)]

    if status != "optimal" and best is not None:
        _, y, X, pobj, dobj, relgap, pinf, dinf, _ = best
    mults = [_unembed(x) if cplx else x for x, cplx in zip(X, complex_block)]
    return LMISolution(
        y=y,
        multipliers=mults,
        primal_value=float(b @ y),
        dual_value=pobj,
        status=status,
        iterations=it,
        primal_infeasibility=pinf,
        dual_infeasibility=dinf,
        relative_gap=relgap,
        history=history,
    )


def hermitian_basis(n: int, real: bool = False) -> np.ndarray:
    """Orthonormal (Hilbert-Schmidt) basis of n x n Hermitian matrices, shape (K, n, n).

    With ``real=True`` only the real symmetric part of the basis is returned.
    """
    mats = []
    s = 1.0 / np.sqrt(2.0)
    for a in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[a, a] = 1.0
        mats.append(E)
    for a in range(n):
        for c in range(a + 1, n):
            E = np.zeros((n, n), dtype=complex)
            E[a, c] = E[c, a] = s
            mats.append(E)
            if not real:
                F = np.zeros((n, n), dtype=complex)
                F[a, c] = -1j * s
                F[c, a] = 1j * s
                mats.append(F)
    if not mats:
        return np.zeros((0, n, n), dtype=complex)
    return np.array(mats)
