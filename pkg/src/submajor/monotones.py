"""Monotone homomorphisms on boxes and the Renyi quantities built from them.

For ``alpha`` in ``[1, inf)`` and ``i`` in ``1..m`` the real-valued monotones are

    f_{alpha,i}(box) = Tr (sigma^{(1-alpha)/2alpha} rho_i sigma^{(1-alpha)/2alpha})^alpha

and the tropical ones (``alpha = inf``) are ``|| sigma^{-1/2} rho_i sigma^{-1/2} ||_inf``.
On commuting data these reduce to ``sum_x p_x^alpha q_x^(1-alpha)`` and
``max_x p_x / q_x``.  Logarithms are base 2 throughout.

Indices ``i`` are 1-based, matching the JSON and CLI conventions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import hermat
from .boxes import Box
from .errors import DomainError

INF = math.inf
PINCH_DIM_LIMIT = 4096


@dataclass(frozen=True)
class MonotoneIndex:
    i: int
    alpha: float

    def __post_init__(self):
        if not (self.alpha >= 1):
            raise DomainError(f"alpha must lie in [1, inf], got {self.alpha}")
        if self.i < 1:
            raise DomainError(f"index i is 1-based, got {self.i}")

    @property
    def tropical(self) -> bool:
        return math.isinf(self.alpha)

    def to_json(self) -> dict:
        return {"i": self.i, "alpha": "inf" if self.tropical else self.alpha}


@dataclass(frozen=True)
class MonotoneValue:
    value: float
    kind: str  # "real" or "tropical"

    def __float__(self) -> float:
        return self.value


def alpha_from_s(s):
    """Map ``s = (alpha - 1) / alpha`` in ``[0, 1]`` to ``alpha`` (``s = 1`` gives inf)."""
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(s >= 1.0, np.inf, 1.0 / (1.0 - np.minimum(s, 1.0)))


def s_from_alpha(alpha):
    alpha = np.asarray(alpha, dtype=float)
    with np.errstate(invalid="ignore"):
        return np.where(np.isinf(alpha), 1.0, (alpha - 1.0) / alpha)


def default_alpha_grid() -> np.ndarray:
    """``s in {0, 0.01, ..., 0.99}`` mapped to alpha, plus ``alpha = inf``."""
    s = np.round(np.arange(100) * 0.01, 12)
    return np.append(alpha_from_s(s), np.inf)


def classical_f(ps: Sequence[Sequence[float]], q: Sequence[float], idx: MonotoneIndex) -> float:
    q = np.asarray(q, dtype=float)
    if np.any(q <= 0):
        raise DomainError("q must be strictly positive")
    if not 1 <= idx.i <= len(ps):
        raise DomainError(f"index {idx.i} out of range for m={len(ps)}")
    p = np.asarray(ps[idx.i - 1], dtype=float)
    if p.shape != q.shape:
        raise DomainError("p and q must have equal length")
    if idx.tropical:
        return float(np.max(p / q)) if p.size else 0.0
    return float(np.sum(p ** idx.alpha * q ** (1.0 - idx.alpha)))


def _check_index(B: Box, i: int):
    if not 1 <= i <= B.m:
        raise DomainError(f"index {i} out of range for m={B.m}")


def _sandwich_spectra(B: Box, i: int, alphas: np.ndarray) -> np.ndarray:
    """Eigenvalues of ``sigma^p rho_i sigma^p`` with ``p = (1-alpha)/(2 alpha)``, one row per alpha."""
    w, V = np.linalg.eigh(B.sigma)
    if w[0] <= 0:
        raise DomainError("sigma must be positive definite")
    R = V.conj().T @ B.rhos[i - 1] @ V
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(np.isinf(alphas), -0.5, (1.0 - alphas) / (2.0 * alphas))
    P = w[None, :] ** p[:, None]
    X = P[:, :, None] * R[None, :, :] * P[:, None, :]
    X = (X + np.conj(np.swapaxes(X, 1, 2))) / 2
    return np.clip(np.linalg.eigvalsh(X), 0.0, None)


def log_sandwiched(B: Box, i: int, alphas) -> np.ndarray:
    """``log2`` of the monotone values for every alpha in ``alphas`` (``-inf`` for zero)."""
    _check_index(B, i)
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    if np.any(alphas < 1):
        raise DomainError("alpha must lie in [1, inf]")
    if B.dim == 0:
        return np.full(alphas.shape, -np.inf)
    lam = _sandwich_spectra(B, i, alphas)
    top = lam.max(axis=1)
    out = np.full(alphas.shape, -np.inf)
    pos = top > 0
    for k in np.flatnonzero(pos):
        a = alphas[k]
        if math.isinf(a):
            out[k] = math.log2(top[k])
        else:
            ratio = lam[k] / top[k]
            out[k] = a * math.log2(top[k]) + math.log2(np.sum(ratio ** a))
    return out


def sandwiched_f(B: Box, idx: MonotoneIndex) -> MonotoneValue:
    """Value of the monotone ``idx`` on ``B`` (sandwiched or max-divergence form)."""
    lv = log_sandwiched(B, idx.i, [idx.alpha])[0]
    return MonotoneValue(float(2.0 ** lv), "tropical" if idx.tropical else "real")


def relative_entropy(rho, sigma) -> float:
    """Umegaki relative entropy ``Tr rho (log2 rho - log2 sigma)`` for full-rank sigma."""
    w_r, V_r = np.linalg.eigh(hermat.as_hermitian(rho))
    w_s, V_s = np.linalg.eigh(hermat.as_hermitian(sigma))
    pos = w_r > hermat.SUPPORT_CUTOFF * max(w_r.max(), 0.0)
    ent = float(np.sum(w_r[pos] * np.log2(w_r[pos])))
    log_sigma = (V_s * np.log2(w_s)) @ V_s.conj().T
    cross = float(np.real(np.trace(hermat.as_hermitian(rho) @ log_sigma)))
    return ent - cross


def sandwiched_divergence(B: Box, idx: MonotoneIndex) -> float:
    """Sandwiched Renyi divergence ``D_alpha(rho_i || sigma)`` in bits.

    Computed as ``log2(f) / (alpha - 1)`` for finite ``alpha > 1`` and
    ``log2(f)`` at ``alpha = inf``.  At ``alpha = 1`` the limit is returned:
    the Umegaki relative entropy when ``Tr rho_i = 1`` and ``+-inf`` otherwise.
    """
    _check_index(B, idx.i)
    rho = B.rhos[idx.i - 1]
    if B.dim == 0 or hermat.trace(rho) <= 0:
        raise DomainError(f"rho_{idx.i} is zero; its divergence is undefined")
    if idx.alpha == 1:
        tr = hermat.trace(rho)
        if abs(tr - 1.0) > 1e-9:
            return INF if tr > 1 else -INF
        return relative_entropy(rho, B.sigma)
    lv = float(log_sandwiched(B, idx.i, [idx.alpha])[0])
    return lv if idx.tropical else lv / (idx.alpha - 1.0)


def divergence_curve(B: Box, i: int, alphas) -> np.ndarray:
    """Vectorized :func:`sandwiched_divergence` over alphas > 1 (and inf)."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    out = np.empty(alphas.shape)
    rest = alphas > 1
    lv = log_sandwiched(B, i, alphas[rest]) if rest.any() else np.zeros(0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out[rest] = np.where(np.isinf(alphas[rest]), lv, lv / (alphas[rest] - 1.0))
    for k in np.flatnonzero(~rest):
        out[k] = sandwiched_divergence(B, MonotoneIndex(i, 1.0))
    return out


def _tensor_power_spectrum(sigma: np.ndarray, n: int):
    w, V = np.linalg.eigh(sigma)
    vals, vecs = np.ones(1), np.ones((1, 1), dtype=complex)
    for _ in range(n):
        vals = np.kron(vals, w)
        vecs = np.kron(vecs, V)
    return vals, vecs


def pinched_bounds(B: Box, i: int, alpha: float, n: int) -> tuple[float, float]:
    """Two-sided bounds on the monotone from the pinching of ``rho_i^(x)n`` by ``sigma^(x)n``.

    ``lower`` is the n-th root of the classical monotone evaluated on the
    commuting pair (pinched ``rho_i^(x)n``, ``sigma^(x)n``); ``upper`` multiplies
    it by ``|spectrum(sigma^(x)n)|^(alpha/n)`` (exponent ``1/n`` at ``alpha = inf``).
    """
    _check_index(B, i)
    if n < 1:
        raise DomainError("n must be a positive integer")
    if alpha < 1:
        raise DomainError("alpha must lie in [1, inf]")
    if B.dim ** n > PINCH_DIM_LIMIT:
        raise DomainError(f"dim^n = {B.dim ** n} exceeds the dense limit {PINCH_DIM_LIMIT}")
    vals, vecs = _tensor_power_spectrum(B.sigma, n)
    rho = B.rhos[i - 1]
    rho_n = hermat.tensor(*([rho] * n)) if n > 1 else rho
    R = vecs.conj().T @ rho_n @ vecs
    order = np.argsort(-vals)
    tol = hermat.MERGE_TOL * vals.max()
    groups = [[order[0]]]
    for k in order[1:]:
        if vals[groups[-1][-1]] - vals[k] <= tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    tropical = math.isinf(alpha)
    total = 0.0
    for g in groups:
        lam = float(np.mean(vals[g]))
        blk = R[np.ix_(g, g)]
        ev = np.clip(np.linalg.eigvalsh((blk + blk.conj().T) / 2), 0.0, None)
        if tropical:
            total = max(total, ev.max() / lam)
        else:
            total += lam ** (1.0 - alpha) * float(np.sum(ev ** alpha))
    lower = total ** (1.0 / n)
    exponent = (1.0 if tropical else alpha) / n
    return lower, lower * len(groups) ** exponent


def spectrum_size(M) -> int:
    return len(hermat.eig_decompose(M))
