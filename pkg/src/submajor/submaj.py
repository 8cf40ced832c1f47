"""Single-shot relative submajorization between boxes.

``A >= B`` holds when some completely positive trace-nonincreasing map ``T``
satisfies ``T(rho_i) >= rho'_i`` for every ``i`` and ``T(sigma) <= sigma'``.
It is decided by maximizing a uniform slack ``lam`` with

    J >= 0,  Tr_out J <= I,  T_J(rho_i) - rho'_i >= lam I,  sigma' - T_J(sigma) >= lam I

and declaring the relation when ``lam >= -tol``.

Choi convention: ``J = sum_{jk} |j><k| (x) T(|j><k|)``, input factor first, so
``T(X) = Tr_in[(X^T (x) I) J]`` and ``T^*(I) = (Tr_out J)^T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy.optimize import linprog

from . import hermat
from .boxes import Box, classical_vectors, is_classical
from .errors import DomainError, SolverError
from .sdp import LMIBlock, hermitian_basis, solve_lmi

DEFAULT_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    dim_in: int
    dim_out: int
    J: np.ndarray

    def __post_init__(self):
        J = hermat.as_hermitian(self.J, herm_tol=1e-7)
        if J.shape[0] != self.dim_in * self.dim_out:
            raise DomainError(f"Choi matrix has dimension {J.shape[0]}, expected {self.dim_in * self.dim_out}")
        object.__setattr__(self, "J", J)

    def apply(self, X) -> np.ndarray:
        return apply_choi(self, X)

    def trace_out(self) -> np.ndarray:
        """Partial trace over the output factor."""
        return hermat.partial_trace(self.J, (self.dim_in, self.dim_out), keep=1)

    def is_cptn(self, tol: float = 1e-9) -> bool:
        return hermat.is_psd(self.J, tol) and hermat.psd_leq(self.trace_out(), np.eye(self.dim_in), tol)

    def to_json(self) -> dict:
        return {"dim_in": self.dim_in, "dim_out": self.dim_out, "J": hermat.matrix_to_json(self.J)}

    @classmethod
    def from_json(cls, obj, path: str = "choi") -> "ChoiMatrix":
        if not isinstance(obj, dict):
            raise DomainError(f"{path}: expected an object")
        for key in ("dim_in", "dim_out", "J"):
            if key not in obj:
                raise DomainError(f"{path}.{key}: missing")
        return cls(int(obj["dim_in"]), int(obj["dim_out"]), hermat.matrix_from_json(obj["J"], f"{path}.J"))


def apply_choi(choi: ChoiMatrix, X) -> np.ndarray:
    X = hermat.as_matrix(X)
    if X.shape[0] != choi.dim_in:
        raise DomainError(f"input has dimension {X.shape[0]}, map expects {choi.dim_in}")
    J4 = choi.J.reshape(choi.dim_in, choi.dim_out, choi.dim_in, choi.dim_out)
    return np.einsum("pa,pbae->be", X, J4)


def choi_of(channel: Callable[[np.ndarray], np.ndarray], dim_in: int, dim_out: int | None = None) -> ChoiMatrix:
    """Choi matrix of a linear map given as a Python callable."""
    blocks = []
    for j in range(dim_in):
        row = []
        for k in range(dim_in):
            E = np.zeros((dim_in, dim_in), dtype=complex)
            E[j, k] = 1.0
            row.append(np.asarray(channel(E), dtype=complex))
        blocks.append(row)
    if dim_out is None:
        dim_out = blocks[0][0].shape[0] if dim_in else 0
    return ChoiMatrix(dim_in, dim_out, np.block(blocks) if dim_in else np.zeros((0, 0)))


def identity_choi(d: int) -> ChoiMatrix:
    return choi_of(lambda X: X, d)


def trace_choi(d: int) -> ChoiMatrix:
    return ChoiMatrix(d, 1, np.eye(d))


def tensor_choi(first: ChoiMatrix, second: ChoiMatrix) -> ChoiMatrix:
    """Choi matrix of ``T1 (x) T2`` (inputs and outputs ordered first, second)."""
    a, b, c, d = first.dim_in, first.dim_out, second.dim_in, second.dim_out
    J = np.kron(first.J, second.J).reshape(a, b, c, d, a, b, c, d)
    J = J.transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(a * c * b * d, a * c * b * d)
    return ChoiMatrix(a * c, b * d, J)


@dataclass
class SeparationCertificate:
    """Dual multipliers proving an upper bound on the achievable slack.

    For PSD ``Y_i``, ``W``, ``V`` with ``sum Tr Y_i + Tr W = 1`` and
    ``V (x) I >= sum_i rho_i^T (x) Y_i - sigma^T (x) W``, every feasible map has
    slack at most ``Tr V - sum_i <Y_i, rho'_i> + <W, sigma'>``.
    """

    Y: list
    W: np.ndarray
    V: np.ndarray

    def bound(self, A: Box, B: Box) -> float:
        """Re-verify the multipliers and return the certified slack bound."""
        Y = [_psd_part(y) for y in self.Y]
        W = _psd_part(self.W)
        V = _psd_part(self.V)
        s = sum(hermat.trace(y) for y in Y) + hermat.trace(W)
        if s <= 0:
            return np.inf
        Y, W, V = [y / s for y in Y], W / s, V / s
        G = sum(np.kron(r.T, y) for r, y in zip(A.rhos, Y)) - np.kron(A.sigma.T, W)
        shift = max(0.0, -hermat.min_eig(np.kron(V, np.eye(B.dim)) - G))
        V = V + shift * np.eye(A.dim)
        return (
            hermat.trace(V)
            - sum(float(np.real(np.vdot(y, r))) for y, r in zip(Y, B.rhos))
            + float(np.real(np.vdot(W, B.sigma)))
        )

    def to_json(self) -> dict:
        return {
            "Y": [hermat.matrix_to_json(y) for y in self.Y],
            "W": hermat.matrix_to_json(self.W),
            "V": hermat.matrix_to_json(self.V),
        }


def _psd_part(M) -> np.ndarray:
    w, V = np.linalg.eigh(hermat.as_hermitian(M, herm_tol=1e-6))
    return (V * np.clip(w, 0.0, None)) @ V.conj().T


@dataclass
class FeasibilityResult:
    feasible: bool
    slack: float
    witness: Any = None
    certificate: Any = None
    solver_stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"feasible": self.feasible, "slack": self.slack, "solver_stats": _jsonable(self.solver_stats)}
        w = self.witness
        if isinstance(w, ChoiMatrix):
            out["witness"] = w.to_json()
        elif isinstance(w, list):
            out["witness"] = [hermat.matrix_to_json(p) for p in w]
        elif w is not None:
            out["witness"] = hermat.matrix_to_json(w)
        c = self.certificate
        if isinstance(c, SeparationCertificate):
            out["certificate"] = c.to_json()
        elif c is not None:
            out["certificate"] = _jsonable(c)
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def constraint_margins(choi: ChoiMatrix, A: Box, B: Box) -> dict:
    """Smallest eigenvalue of every constraint of the submajorization system."""
    return {
        "cp": hermat.min_eig(choi.J),
        "trace_nonincreasing": hermat.min_eig(np.eye(choi.dim_in) - choi.trace_out()),
        "rho": [hermat.min_eig(apply_choi(choi, r) - rp) for r, rp in zip(A.rhos, B.rhos)],
        "sigma": hermat.min_eig(B.sigma - apply_choi(choi, A.sigma)),
    }


def witness_margin(choi: ChoiMatrix, A: Box, B: Box) -> float:
    """Uniform slack achieved by a map on the target inequalities."""
    mg = constraint_margins(choi, A, B)
    return min(mg["rho"] + [mg["sigma"]])


def _check_pair(A: Box, B: Box):
    if A.m != B.m:
        raise DomainError(f"boxes have different m ({A.m} vs {B.m})")
    if A.dim < 1 or B.dim < 1:
        raise DomainError("both boxes need dimension at least 1")


def _map_basis(A: Box, d_out: int, real: bool):
    d_in = A.dim
    basis = hermitian_basis(d_in * d_out, real=real)
    K = basis.shape[0]
    B4 = basis.reshape(K, d_in, d_out, d_in, d_out)
    return basis, B4


def _apply_basis(B4: np.ndarray, X: np.ndarray) -> np.ndarray:
    return np.einsum("pa,kpbae->kbe", X, B4)


def _clean_witness(J: np.ndarray, d_in: int, d_out: int) -> ChoiMatrix:
    J = _psd_part(J)
    t = hermat.op_norm(hermat.partial_trace(J, (d_in, d_out), keep=1))
    if t > 1.0:
        J = J / t
    return ChoiMatrix(d_in, d_out, J)


def check_submajorization(A: Box, B: Box, tol: float = DEFAULT_TOL, **solver_opts) -> FeasibilityResult:
    """Decide ``A >= B`` by uniform-slack maximization over Choi matrices.

    Returns a cleaned witness map (exactly CP and trace-nonincreasing) when
    feasible and a :class:`SeparationCertificate` otherwise.  Raises
    :class:`SolverError` if the interior-point iteration does not converge.
    """
    _check_pair(A, B)
    d_in, d_out = A.dim, B.dim
    real = all(not np.any(c.imag) for c in A.components + B.components)
    basis, B4 = _map_basis(A, d_out, real)
    K = basis.shape[0]

    def with_slack(coeffs, lam_coeff):
        n = coeffs.shape[-1]
        return np.concatenate([coeffs, lam_coeff * np.eye(n)[None]], axis=0)

    blocks = [
        LMIBlock(np.zeros((d_in * d_out,) * 2, dtype=complex), with_slack(basis, 0.0)),
        LMIBlock(np.eye(d_in, dtype=complex), with_slack(-np.einsum("kabcb->kac", B4), 0.0)),
    ]
    for r, rp in zip(A.rhos, B.rhos):
        blocks.append(LMIBlock(-rp, with_slack(_apply_basis(B4, r), -1.0)))
    blocks.append(LMIBlock(B.sigma.astype(complex), with_slack(-_apply_basis(B4, A.sigma), -1.0)))
    b = np.zeros(K + 1)
    b[-1] = 1.0
    sol = solve_lmi(b, blocks, **solver_opts)
    stats = sol.stats()
    if not sol.converged:
        raise SolverError(f"submajorization SDP did not converge ({sol.status})", stats)
    slack = sol.primal_value
    J = np.einsum("k,kab->ab", sol.y[:K], basis)
    witness = _clean_witness(J, d_in, d_out)
    stats["witness_margin"] = witness_margin(witness, A, B)
    stats["marginal"] = abs(slack) < tol
    stats["tol"] = tol
    feasible = slack >= -tol
    cert = SeparationCertificate(list(sol.multipliers[2:-1]), sol.multipliers[-1], sol.multipliers[1])
    if feasible:
        return FeasibilityResult(True, slack, witness, None, stats)
    stats["certified_bound"] = cert.bound(A, B)
    return FeasibilityResult(False, slack, None, cert, stats)


def classical_submaj_lp(A: Box, B: Box, tol: float = DEFAULT_TOL) -> FeasibilityResult:
    """Decide ``A >= B`` for classical boxes by linear programming.

    Looks for an entrywise nonnegative, column-substochastic ``T`` with
    ``T p_i - p'_i >= lam`` and ``q' - T q >= lam`` entrywise, maximizing ``lam``.
    The optimal slack coincides with that of :func:`check_submajorization`.
    """
    _check_pair(A, B)
    if not (is_classical(A, 1e-8) and is_classical(B, 1e-8)):
        raise DomainError("classical_submaj_lp needs classical boxes")
    ps, q = classical_vectors(A)
    pps, qq = classical_vectors(B)
    d, dd = A.dim, B.dim
    nv = dd * d + 1

    def row_T(weights_out_in):
        return weights_out_in.reshape(-1)

    rows, rhs = [], []
    for p, pp in zip(ps, pps):
        for x in range(dd):
            W = np.zeros((dd, d))
            W[x] = -p
            rows.append(np.append(row_T(W), 1.0))
            rhs.append(-pp[x])
    for x in range(dd):
        W = np.zeros((dd, d))
        W[x] = q
        rows.append(np.append(row_T(W), 1.0))
        rhs.append(qq[x])
    for x in range(d):
        W = np.zeros((dd, d))
        W[:, x] = 1.0
        rows.append(np.append(row_T(W), 0.0))
        rhs.append(1.0)
    A_ub, b_ub = np.array(rows), np.array(rhs)
    c = np.zeros(nv)
    c[-1] = -1.0
    bounds = [(0, None)] * (nv - 1) + [(None, None)]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0:
        raise SolverError(f"linear program failed: {res.message}", {"status": res.status})
    slack = float(-res.fun)
    T = res.x[:-1].reshape(dd, d)
    mult = np.clip(-res.ineqlin.marginals, 0.0, None)
    stats = {"status": "optimal", "objective": slack, "marginal": abs(slack) < tol, "tol": tol}
    certificate = {"multipliers": mult, "bound": float(b_ub @ mult)}
    feasible = slack >= -tol
    witness = _classical_witness(A, B, T) if feasible else None
    return FeasibilityResult(feasible, slack, witness, None if feasible else certificate, stats)


def _classical_witness(A: Box, B: Box, T: np.ndarray) -> ChoiMatrix:
    from .boxes import common_eigenbasis

    def basis_of(X: Box):
        if all(np.allclose(c, np.diag(np.diag(c)), atol=1e-8) for c in X.components):
            return np.eye(X.dim)
        return common_eigenbasis(X)

    U, Up = basis_of(A), basis_of(B)

    def channel(X):
        diag = np.einsum("ai,ab,bi->i", U.conj(), X, U)
        return (Up * (T @ diag)) @ Up.conj().T

    return choi_of(channel, A.dim, B.dim)


def upgrade_map(choi: ChoiMatrix, A: Box, B: Box, tol: float = 1e-8) -> ChoiMatrix:
    """Modify a feasible map so that it sends ``sigma`` exactly to ``sigma'``.

    Implements ``T~(X) = T(X) + [Tr X - Tr T(X)] tau`` with
    ``tau = (sigma' - T(sigma)) / (Tr sigma - Tr T(sigma))``; when ``T`` already
    preserves the trace of ``sigma``, ``tau = sigma' / Tr sigma'``.  If
    ``Tr sigma = Tr sigma'`` the result is trace preserving.
    """
    _check_pair(A, B)
    if (choi.dim_in, choi.dim_out) != (A.dim, B.dim):
        raise DomainError("map dimensions do not match the boxes")
    tr_s, tr_sp = hermat.trace(A.sigma), hermat.trace(B.sigma)
    if tr_s < tr_sp - tol * max(1.0, tr_sp):
        raise DomainError(f"Tr sigma = {tr_s:.6g} is smaller than Tr sigma' = {tr_sp:.6g}")
    mg = constraint_margins(choi, A, B)
    worst = min([mg["cp"], mg["trace_nonincreasing"], mg["sigma"]] + mg["rho"])
    if worst < -tol:
        raise DomainError(f"map does not satisfy the submajorization constraints (margin {worst:.3e})")
    T_sigma = apply_choi(choi, A.sigma)
    deficit = tr_s - hermat.trace(T_sigma)
    if deficit > 1e-12 * max(1.0, tr_s):
        tau = (B.sigma - T_sigma) / deficit
    else:
        tau = B.sigma / tr_sp
    J = choi.J + np.kron(np.eye(A.dim) - choi.trace_out(), tau)
    return ChoiMatrix(A.dim, B.dim, J)
