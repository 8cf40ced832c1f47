"""Random instances for experiments and tests.

Every generator takes a ``numpy.random.Generator`` so runs are reproducible.
"""

from __future__ import annotations

import numpy as np

from .boxes import Box
from .submaj import ChoiMatrix


def ginibre(rng: np.random.Generator, rows: int, cols: int, real: bool = False) -> np.ndarray:
    G = rng.standard_normal((rows, cols))
    if not real:
        G = G + 1j * rng.standard_normal((rows, cols))
    return G


def random_psd(rng, d: int, rank: int | None = None, real: bool = False) -> np.ndarray:
    G = ginibre(rng, d, d if rank is None else rank, real)
    return G @ G.conj().T


def random_density(rng, d: int, rank: int | None = None, real: bool = False) -> np.ndarray:
    P = random_psd(rng, d, rank, real)
    return P / np.trace(P).real


def random_hermitian(rng, d: int, real: bool = False) -> np.ndarray:
    G = ginibre(rng, d, d, real)
    return (G + G.conj().T) / 2


def random_unitary(rng, d: int) -> np.ndarray:
    Q, R = np.linalg.qr(ginibre(rng, d, d))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_box(rng, m: int, d: int, normalized: bool = True, real: bool = False, rank: int | None = None) -> Box:
    """Box of random density matrices (or unnormalized PSD operators) with full-rank ``sigma``."""
    if normalized:
        rhos = [random_density(rng, d, rank, real) for _ in range(m)]
        sigma = random_density(rng, d, None, real)
    else:
        rhos = [random_psd(rng, d, rank, real) / d for _ in range(m)]
        sigma = random_psd(rng, d, None, real) / d
    # keep sigma away from singular; renormalize so the trace is unchanged
    tr = np.trace(sigma).real
    sigma = (sigma + 1e-3 * tr * np.eye(d)) / (1 + 1e-3 * d)
    return Box(tuple(rhos), sigma)


def random_classical_box(rng, m: int, d: int, normalized: bool = False) -> Box:
    ps = rng.random((m, d)) * (rng.random((m, d)) > 0.2)
    q = rng.random(d) + 0.05
    if normalized:
        ps = ps / np.maximum(ps.sum(axis=1, keepdims=True), 1e-300)
        q = q / q.sum()
    return Box(tuple(np.diag(p) for p in ps), np.diag(q))


def random_channel(rng, d_in: int, d_out: int, kraus: int = 2, trace_preserving: bool = True) -> ChoiMatrix:
    """Random CP map from Kraus operators; trace preserving or scaled to be trace nonincreasing."""
    Ks = [ginibre(rng, d_out, d_in) for _ in range(kraus)]
    S = sum(K.conj().T @ K for K in Ks)
    w, V = np.linalg.eigh(S)
    if trace_preserving:
        inv_sqrt = (V / np.sqrt(w)) @ V.conj().T
        Ks = [K @ inv_sqrt for K in Ks]
    else:
        Ks = [K / np.sqrt(w[-1]) * np.sqrt(rng.uniform(0.5, 1.0)) for K in Ks]
    J = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for K in Ks:
        v = K.T.reshape(-1)  # vec with input index first
        J += np.outer(v, v.conj())
    return ChoiMatrix(d_in, d_out, J)


def random_test(rng, d: int, real: bool = False) -> np.ndarray:
    """Random operator ``0 <= Pi <= I``."""
    U = random_unitary(rng, d) if not real else np.linalg.qr(rng.standard_normal((d, d)))[0]
    return (U * rng.random(d)) @ U.conj().T
