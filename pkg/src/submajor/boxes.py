"""Boxes ``(rho_1, ..., rho_m, sigma)`` and their semiring operations.

A box lives on a single Hilbert space of dimension ``dim``: ``m`` positive
semidefinite matrices ``rhos`` and a positive definite ``sigma``.  Addition is
the componentwise direct sum, multiplication the componentwise tensor product.
The zero box has ``dim == 0``; the unit box is ``(1, ..., 1, 1)`` on ``C``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from . import hermat
from .errors import DomainError

PSD_TOL = 1e-10
PD_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Box:
    rhos: tuple
    sigma: np.ndarray

    def __post_init__(self):
        rhos = tuple(hermat.as_hermitian(r) for r in self.rhos)
        sigma = hermat.as_hermitian(self.sigma)
        if not rhos:
            raise DomainError("a box needs at least one rho component")
        d = sigma.shape[0]
        for i, r in enumerate(rhos, start=1):
            if r.shape[0] != d:
                raise DomainError(f"rho_{i} has dimension {r.shape[0]}, sigma has {d}")
        if d:
            for i, r in enumerate(rhos, start=1):
                lo = hermat.min_eig(r)
                if lo < -PSD_TOL * max(1.0, hermat.op_norm(r)):
                    raise DomainError(f"rho_{i} is not positive semidefinite (eigenvalue {lo:.3e})")
            lo = hermat.min_eig(sigma)
            if lo <= PD_RTOL * hermat.op_norm(sigma):
                raise DomainError(f"sigma must be positive definite (min eigenvalue {lo:.3e})")
        for a in rhos + (sigma,):
            a.setflags(write=False)
        object.__setattr__(self, "rhos", rhos)
        object.__setattr__(self, "sigma", sigma)

    @property
    def m(self) -> int:
        return len(self.rhos)

    @property
    def dim(self) -> int:
        return self.sigma.shape[0]

    @property
    def components(self) -> tuple:
        return self.rhos + (self.sigma,)

    def __add__(self, other: "Box") -> "Box":
        return box_add(self, other)

    def __mul__(self, other: "Box") -> "Box":
        return box_mul(self, other)

    def __pow__(self, n: int) -> "Box":
        return box_pow(self, n)

    def __repr__(self) -> str:
        return f"Box(m={self.m}, dim={self.dim})"


def zero_box(m: int) -> Box:
    z = np.zeros((0, 0))
    return Box((z,) * m, z)


def scalar_box(rho_values: Sequence[float], sigma_value: float) -> Box:
    """Box on ``C`` with the given component values."""
    return Box(tuple(np.array([[v]]) for v in rho_values), np.array([[sigma_value]]))


def unit_box(m: int) -> Box:
    return scalar_box([1.0] * m, 1.0)


def power_universal(m: int) -> Box:
    """The power universal box ``u = (2, ..., 2, 1)`` on ``C``."""
    if m < 1:
        raise DomainError("m must be at least 1")
    return scalar_box([2.0] * m, 1.0)


def _check_m(A: Box, B: Box):
    if A.m != B.m:
        raise DomainError(f"boxes have different m ({A.m} vs {B.m})")


def box_add(A: Box, B: Box) -> Box:
    _check_m(A, B)
    return Box(
        tuple(hermat.direct_sum(a, b) for a, b in zip(A.rhos, B.rhos)),
        hermat.direct_sum(A.sigma, B.sigma),
    )


def box_mul(A: Box, B: Box) -> Box:
    _check_m(A, B)
    return Box(
        tuple(hermat.tensor(a, b) for a, b in zip(A.rhos, B.rhos)),
        hermat.tensor(A.sigma, B.sigma),
    )


def box_pow(A: Box, n: int) -> Box:
    """n-fold tensor power, built left to right; ``n = 0`` gives the unit box."""
    if n < 0:
        raise DomainError("power must be a natural number")
    return reduce(box_mul, [A] * n, unit_box(A.m))


def box_scale(A: Box, rho_factor: float, sigma_factor: float = 1.0) -> Box:
    return Box(tuple(rho_factor * r for r in A.rhos), sigma_factor * A.sigma)


def is_classical(A: Box, tol: float = 1e-10) -> bool:
    """True iff all components pairwise commute (max-norm of commutators <= tol)."""
    comps = A.components
    return all(
        hermat.commutator_norm(comps[j], comps[k]) <= tol
        for j in range(len(comps))
        for k in range(j + 1, len(comps))
    )


def common_eigenbasis(A: Box, seed: int = 0) -> np.ndarray:
    """Unitary diagonalizing every component of a classical box.

    A generic real combination of commuting Hermitian matrices has the joint
    eigenspaces as its eigenspaces, so its eigenvectors diagonalize them all.
    """
    rng = np.random.default_rng(seed)
    weights = rng.uniform(0.5, 1.5, size=len(A.components))
    norms = [max(hermat.op_norm(c), 1e-300) for c in A.components]
    H = sum(w * c / s for w, c, s in zip(weights, A.components, norms))
    _, V = np.linalg.eigh(H)
    return V


def classical_vectors(A: Box, tol: float = 1e-8) -> tuple[list[np.ndarray], np.ndarray]:
    """Diagonal data ``([p_1, ..., p_m], q)`` of a classical box in a common eigenbasis."""
    if not is_classical(A, tol):
        raise DomainError("box is not classical")
    if all(np.allclose(c, np.diag(np.diag(c)), atol=tol) for c in A.components):
        V = np.eye(A.dim)
    else:
        V = common_eigenbasis(A)
    diag = [np.real(np.einsum("ai,ab,bi->i", V.conj(), c, V)) for c in A.components]
    return [np.clip(p, 0.0, None) for p in diag[:-1]], diag[-1]


def classical_box(ps: Sequence[Sequence[float]], q: Sequence[float]) -> Box:
    return Box(tuple(np.diag(np.asarray(p, dtype=float)) for p in ps), np.diag(np.asarray(q, dtype=float)))


def normalize_check(A: Box, tol: float = 1e-9) -> bool:
    return all(abs(hermat.trace(c) - 1.0) <= tol for c in A.components)


def box_to_json(A: Box) -> dict:
    if A.dim == 0:
        return {"m": A.m, "dim": 0}
    return {
        "m": A.m,
        "dim": A.dim,
        "rhos": [hermat.matrix_to_json(r) for r in A.rhos],
        "sigma": hermat.matrix_to_json(A.sigma),
    }


def box_from_json(obj, path: str = "box") -> Box:
    if not isinstance(obj, dict):
        raise DomainError(f"{path}: expected an object")
    for key in ("m", "dim"):
        if key not in obj:
            raise DomainError(f"{path}.{key}: missing")
        v = obj[key]
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise DomainError(f"{path}.{key}: expected a nonnegative integer, got {v!r}")
    m, d = obj["m"], obj["dim"]
    if m < 1:
        raise DomainError(f"{path}.m: must be at least 1")
    if d == 0:
        return zero_box(m)
    rhos = obj.get("rhos")
    if not isinstance(rhos, list):
        raise DomainError(f"{path}.rhos: expected a list of {m} matrices")
    if len(rhos) != m:
        raise DomainError(f"{path}.rhos: expected {m} matrices, got {len(rhos)}")
    if "sigma" not in obj:
        raise DomainError(f"{path}.sigma: missing")
    mats = [hermat.matrix_from_json(r, f"{path}.rhos[{k}]") for k, r in enumerate(rhos)]
    sigma = hermat.matrix_from_json(obj["sigma"], f"{path}.sigma")
    for k, M in enumerate(mats + [sigma]):
        if M.shape[0] != d:
            where = f"rhos[{k}]" if k < m else "sigma"
            raise DomainError(f"{path}.{where}.dim: {M.shape[0]} does not match box dim {d}")
    try:
        return Box(tuple(mats), sigma)
    except DomainError as exc:
        raise DomainError(f"{path}: {exc}") from None
