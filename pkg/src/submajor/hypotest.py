"""Hypothesis testing and state discrimination on normalized boxes.

A test ``0 <= Pi <= I`` has type-I errors ``1 - Tr rho_i Pi`` (significance
level: their maximum) and type-II error ``Tr sigma Pi``.  Error pairs
``(alpha, beta)`` are achievable exactly when the box submajorizes the scalar
box ``(1-alpha, ..., 1-alpha, beta)``; :func:`test_to_map` and
:func:`map_to_test` translate between tests and the maps witnessing that.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import hermat
from .boxes import Box, normalize_check
from .errors import DomainError, SolverError
from .sdp import LMIBlock, hermitian_basis, solve_lmi
from .submaj import DEFAULT_TOL, ChoiMatrix, FeasibilityResult, check_submajorization

TEST_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Test:
    Pi: np.ndarray

    def __post_init__(self):
        Pi = hermat.as_hermitian(self.Pi)
        d = Pi.shape[0]
        if d and (hermat.min_eig(Pi) < -TEST_TOL or hermat.min_eig(np.eye(d) - Pi) < -TEST_TOL):
            raise DomainError("a test must satisfy 0 <= Pi <= I")
        object.__setattr__(self, "Pi", Pi)

    @property
    def dim(self) -> int:
        return self.Pi.shape[0]


@dataclass(frozen=True)
class DiscriminationSpec:
    a: tuple
    b: tuple

    def __post_init__(self):
        a, b = tuple(map(float, self.a)), tuple(map(float, self.b))
        if len(a) != len(b):
            raise DomainError("a and b must have the same length")
        if any(not 0.0 <= v <= 1.0 for v in a + b):
            raise DomainError("a and b entries must lie in [0, 1]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def m(self) -> int:
        return len(self.a)


def _check_dims(B: Box, t: Test):
    if B.dim != t.dim:
        raise DomainError(f"test has dimension {t.dim}, box has {B.dim}")


def _tr(X, Y) -> float:
    return float(np.real(np.vdot(X, Y)))


def type1_errors(B: Box, t: Test) -> tuple[np.ndarray, float]:
    """Per-hypothesis type-I errors and the significance level (their maximum)."""
    _check_dims(B, t)
    errs = np.array([1.0 - _tr(r, t.Pi) for r in B.rhos])
    return errs, float(errs.max())


def type2_error(B: Box, t: Test) -> float:
    _check_dims(B, t)
    return _tr(B.sigma, t.Pi)


def test_to_map(t: Test) -> ChoiMatrix:
    """Choi matrix of ``X -> Tr(X Pi)``; it equals ``Pi^T``."""
    return ChoiMatrix(t.dim, 1, t.Pi.T)


def map_to_test(choi: ChoiMatrix) -> Test:
    """``Pi = T^*(1)`` for a map into ``C``."""
    if choi.dim_out != 1:
        raise DomainError(f"map_to_test needs a map into C, got output dimension {choi.dim_out}")
    return Test(choi.J.T)


def scalar_target(significance: float, beta: float, m: int) -> Box:
    from .boxes import scalar_box

    return scalar_box([1.0 - significance] * m, beta)


def _require_normalized(B: Box):
    if not normalize_check(B, 1e-8):
        raise DomainError("box must be normalized")


def _real_box(B: Box) -> bool:
    return all(not np.any(c.imag) for c in B.components)


def _test_problem(B: Box, alpha_budget: float):
    d = B.dim
    basis = hermitian_basis(d, real=_real_box(B))
    K = basis.shape[0]
    traces_rho = [np.real(np.einsum("kab,ba->k", basis, r)) for r in B.rhos]
    blocks = [
        LMIBlock(np.zeros((d, d), dtype=complex), basis),
        LMIBlock(np.eye(d, dtype=complex), -basis),
    ]
    for tr in traces_rho:
        blocks.append(LMIBlock(np.array([[-(1.0 - alpha_budget)]]), tr[:, None, None]))
    c = -np.real(np.einsum("kab,ba->k", basis, B.sigma))
    return basis, K, blocks, c


def optimal_type2(B: Box, alpha_budget: float, **solver_opts) -> tuple[float, Test]:
    """Minimum type-II error over tests with significance level at most ``alpha_budget``."""
    _require_normalized(B)
    if not 0.0 <= alpha_budget <= 1.0:
        raise DomainError("alpha_budget must lie in [0, 1]")
    if alpha_budget == 1.0:
        return 0.0, Test(np.zeros((B.dim, B.dim)))
    basis, K, blocks, c = _test_problem(B, alpha_budget)
    sol = solve_lmi(c, blocks, **solver_opts)
    if not sol.converged and not (sol.relative_gap < 1e-6 and sol.primal_infeasibility < 1e-7):
        raise SolverError(f"type-II SDP did not converge ({sol.status})", sol.stats())
    Pi = np.einsum("k,kab->ab", sol.y, basis)
    w, V = np.linalg.eigh((Pi + Pi.conj().T) / 2)
    Pi = (V * np.clip(w, 0.0, 1.0)) @ V.conj().T
    return max(0.0, -sol.primal_value), Test(Pi)


def tradeoff_curve(B: Box, budgets) -> list[tuple[float, float]]:
    """``(alpha, beta*(alpha))`` for each significance level in ``budgets``, sorted by alpha.

    The optimal type-II error is nonincreasing in the budget; tiny solver
    noise against that order is removed by a running minimum.
    """
    budgets = sorted(float(a) for a in budgets)
    out, prev = [], np.inf
    for a in budgets:
        beta, _ = optimal_type2(B, a)
        prev = min(prev, beta)
        out.append((a, prev))
    return out


def curve_csv(curve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["alpha", "beta"])
    for a, b in curve:
        w.writerow([repr(a), repr(b)])
    return buf.getvalue()


def standard_box(spec: DiscriminationSpec) -> Box:
    """The target box ``(a_1 |1><1|, ..., a_m |m><m|, diag(b))``; needs every ``b_i > 0``."""
    if min(spec.b) <= 0:
        raise DomainError("every b_i must be positive to form the standard box")
    m = spec.m
    rhos = []
    for i, a in enumerate(spec.a):
        R = np.zeros((m, m))
        R[i, i] = a
        rhos.append(R)
    return Box(tuple(rhos), np.diag(spec.b))


def std_box_power(spec: DiscriminationSpec, n: int) -> Box:
    """``(a_1^n |1><1|, ..., a_m^n |m><m|, diag(b)^n)``."""
    if n < 1:
        raise DomainError("n must be at least 1")
    return standard_box(DiscriminationSpec([a ** n for a in spec.a], [b ** n for b in spec.b]))


def discrimination_feasible(
    B: Box, spec: DiscriminationSpec, tol: float = DEFAULT_TOL, cross_check: bool = False, **solver_opts
) -> FeasibilityResult:
    """Search for a POVM ``(Pi_1, ..., Pi_m, I - sum Pi_i)`` with ``Tr rho_i Pi_i >= a_i`` and ``Tr sigma Pi_i <= b_i``.

    Solved directly in the POVM elements with a uniform slack on the ``2m``
    trace constraints.  The witness is the list ``[Pi_1, ..., Pi_m]``.  With
    ``cross_check`` the decision is compared with
    :func:`check_submajorization` against :func:`standard_box` (when all
    ``b_i > 0``) and recorded in ``solver_stats``.
    """
    _require_normalized(B)
    if spec.m != B.m:
        raise DomainError(f"spec has {spec.m} entries, box has m={B.m}")
    d, m = B.dim, B.m
    basis = hermitian_basis(d, real=_real_box(B))
    K = basis.shape[0]
    nv = m * K + 1
    blocks = []

    def coeffs_for(i, mats):
        C = np.zeros((nv,) + mats.shape[1:], dtype=complex)
        C[i * K:(i + 1) * K] = mats
        return C

    for i in range(m):
        blocks.append(LMIBlock(np.zeros((d, d), dtype=complex), coeffs_for(i, basis)))
    total = np.zeros((nv, d, d), dtype=complex)
    for i in range(m):
        total[i * K:(i + 1) * K] = -basis
    blocks.append(LMIBlock(np.eye(d, dtype=complex), total))
    tr_sigma = np.real(np.einsum("kab,ba->k", basis, B.sigma))
    for i in range(m):
        tr_rho = np.real(np.einsum("kab,ba->k", basis, B.rhos[i]))
        c1 = coeffs_for(i, tr_rho[:, None, None])
        c1[-1] = -1.0
        blocks.append(LMIBlock(np.array([[-spec.a[i]]]), c1))
        c2 = coeffs_for(i, -tr_sigma[:, None, None])
        c2[-1] = -1.0
        blocks.append(LMIBlock(np.array([[spec.b[i]]]), c2))
    obj = np.zeros(nv)
    obj[-1] = 1.0
    sol = solve_lmi(obj, blocks, **solver_opts)
    stats = sol.stats()
    if not sol.converged:
        raise SolverError(f"POVM SDP did not converge ({sol.status})", stats)
    povm = []
    for i in range(m):
        P = np.einsum("k,kab->ab", sol.y[i * K:(i + 1) * K], basis)
        w, V = np.linalg.eigh((P + P.conj().T) / 2)
        povm.append((V * np.clip(w, 0.0, None)) @ V.conj().T)
    top = hermat.op_norm(sum(povm))
    if top > 1.0:
        povm = [P / top for P in povm]
    slack = sol.primal_value
    feasible = slack >= -tol
    stats["marginal"] = abs(slack) < tol
    stats["tol"] = tol
    if cross_check and min(spec.b) > 0:
        other = check_submajorization(B, standard_box(spec), tol=tol)
        stats["cross_check"] = {"feasible": other.feasible, "slack": other.slack, "agrees": other.feasible == feasible}
    return FeasibilityResult(feasible, slack, povm if feasible else None, None if feasible else sol.multipliers, stats)


def povm_to_map(povm, m: int | None = None) -> ChoiMatrix:
    """Choi matrix of ``X -> sum_j Tr(X Pi_j) |j><j|``."""
    d = povm[0].shape[0]
    m = len(povm) if m is None else m
    J = np.zeros((d * m, d * m), dtype=complex)
    for j, P in enumerate(povm):
        E = np.zeros((m, m))
        E[j, j] = 1.0
        J += np.kron(P.T, E)
    return ChoiMatrix(d, m, J)


# keep pytest from collecting these as tests when imported into test modules
Test.__test__ = False
test_to_map.__test__ = False
