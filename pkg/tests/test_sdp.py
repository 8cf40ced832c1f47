import numpy as np
import pytest

from submajor.sampling import random_hermitian, random_psd
from submajor.sdp import LMIBlock, hermitian_basis, solve_lmi

cp = pytest.importorskip("cvxpy")


def test_scalar_bound():
    sol = solve_lmi(np.array([1.0]), [LMIBlock(np.array([[1.0]]), np.array([[[-1.0]]]))])
    assert sol.converged
    assert sol.y[0] == pytest.approx(1.0, abs=1e-7)


def test_min_eigenvalue_complex(rng):
    Hm = random_hermitian(rng, 4)
    sol = solve_lmi(np.array([1.0]), [LMIBlock(Hm, -np.eye(4)[None].astype(complex))])
    assert sol.converged
    assert sol.y[0] == pytest.approx(np.linalg.eigvalsh(Hm)[0], abs=1e-7)
    # the multiplier is the projector onto the bottom eigenvector
    X = sol.multipliers[0]
    v = np.linalg.eigh(Hm)[1][:, 0]
    assert np.abs(X - np.outer(v, v.conj())).max() < 1e-4


def test_weak_duality_and_multiplier_equations(rng):
    K, n = 3, 3
    F = np.array([random_hermitian(rng, n) for _ in range(K)])
    F0 = random_psd(rng, n) + np.eye(n)
    # box constraints keep the problem bounded
    blocks = [LMIBlock(F0, F)]
    for k in range(K):
        e = np.zeros((K, 1, 1))
        e[k] = -1.0
        blocks.append(LMIBlock(np.array([[1.0]]), e))
    b = rng.standard_normal(K)
    sol = solve_lmi(b, blocks)
    assert sol.converged
    assert sol.primal_value <= sol.dual_value + 1e-7
    lhs = sum(np.real(np.einsum("kab,ba->k", blk.coeffs, X)) for blk, X in zip(blocks, sol.multipliers))
    assert np.allclose(lhs, -b, atol=1e-7)
    for X in sol.multipliers:
        assert np.linalg.eigvalsh(X).min() >= -1e-9


def test_against_clarabel(rng):
    for trial in range(5):
        K, n = 4, 3
        F = np.array([random_hermitian(rng, n, real=True) for _ in range(K)])
        F0 = random_psd(rng, n, real=True) + np.eye(n)
        b = rng.standard_normal(K)
        blocks = [LMIBlock(F0, F)]
        for k in range(K):
            e = np.zeros((K, 1, 1))
            e[k] = -1.0
            blocks.append(LMIBlock(np.array([[2.0]]), e))
            blocks.append(LMIBlock(np.array([[2.0]]), -e))
        sol = solve_lmi(b, blocks)

        y = cp.Variable(K)
        M = F0 + sum(y[k] * F[k] for k in range(K))
        prob = cp.Problem(cp.Maximize(b @ y), [(M + M.T) / 2 >> 0, cp.abs(y) <= 2])
        prob.solve(solver="CLARABEL")
        assert sol.converged
        assert sol.primal_value == pytest.approx(prob.value, abs=1e-6)


def test_unbounded_is_reported():
    sol = solve_lmi(np.array([1.0]), [LMIBlock(np.array([[0.0]]), np.array([[[1.0]]]))])
    assert not sol.converged
    assert sol.status in ("diverged", "max_iter", "stalled")


def test_hermitian_basis_is_orthonormal():
    for real in (False, True):
        B = hermitian_basis(3, real=real)
        assert B.shape[0] == (6 if real else 9)
        G = np.real(np.einsum("kab,lba->kl", B, B))
        assert np.allclose(G, np.eye(B.shape[0]))
        assert np.allclose(B, np.conj(np.swapaxes(B, 1, 2)))
