"""Dense Hermitian / positive semidefinite linear algebra.

Matrices are plain ``numpy`` arrays of shape ``(d, d)``.  Every public function
accepts anything ``np.asarray`` understands and returns complex arrays, except
for scalar-valued helpers.  A zero-dimensional matrix (shape ``(0, 0)``) is
allowed throughout; it represents operators on the zero space.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

DEFAULT_HERM_TOL = 1e-9
SUPPORT_CUTOFF = 1e-12
MERGE_TOL = 1e-10


def _scale(M: np.ndarray) -> float:
    return float(np.abs(M).max()) if M.size else 0.0


def as_matrix(M) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {A.shape}")
    return A


def as_hermitian(M, herm_tol: float = DEFAULT_HERM_TOL) -> np.ndarray:
    """Validate conjugate symmetry and return the exactly symmetrized matrix.

    ``herm_tol`` bounds ``max |M - M^dagger|`` relative to ``max(1, max|M|)``.
    """
    A = as_matrix(M)
    dev = _scale(A - A.conj().T)
    if dev > herm_tol * max(1.0, _scale(A)):
        raise DomainError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return (A + A.conj().T) / 2


def is_hermitian(M, herm_tol: float = DEFAULT_HERM_TOL) -> bool:
    try:
        as_hermitian(M, herm_tol)
    except DomainError:
        return False
    return True


def _eigh(M: np.ndarray):
    w, V = np.linalg.eigh(M)
    return w[::-1], V[:, ::-1]


def _fix_phases(V: np.ndarray) -> np.ndarray:
    # first component with non-negligible magnitude made real positive
    V = V.copy()
    for k in range(V.shape[1]):
        col = V[:, k]
        j = int(np.argmax(np.abs(col) > 1e-12 * max(np.abs(col).max(), 1e-300)))
        if abs(col[j]) > 0:
            V[:, k] = col * (abs(col[j]) / col[j])
    return V


@dataclass(frozen=True)
class Spectrum:
    """Spectral decomposition ``M = sum_k eigenvalues[k] * projectors[k]``.

    Eigenvalues are distinct (after merging within ``multiplicity_tol``) and
    sorted in descending order.  ``bases[k]`` holds an orthonormal basis of the
    k-th eigenspace as columns.
    """

    eigenvalues: np.ndarray
    projectors: list = field(repr=False)
    bases: list = field(repr=False)
    multiplicity_tol: float = 0.0

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        d = self.projectors[0].shape[0] if self.projectors else 0
        out = np.zeros((d, d), dtype=complex)
        for lam, P in zip(self.eigenvalues, self.projectors):
            out += lam * P
        return out


def eig_decompose(M, multiplicity_tol: float | None = None, herm_tol: float = DEFAULT_HERM_TOL) -> Spectrum:
    """Spectral decomposition with near-degenerate eigenvalues merged.

    Consecutive eigenvalues (in sorted order) closer than ``multiplicity_tol``
    are grouped into one eigenspace; the default threshold is
    ``1e-10 * ||M||_inf``.  Eigenvectors follow a fixed phase convention (first
    non-negligible component real positive) so output is reproducible.
    """
    A = as_hermitian(M, herm_tol)
    d = A.shape[0]
    if d == 0:
        return Spectrum(np.zeros(0), [], [], 0.0)
    w, V = _eigh(A)
    if multiplicity_tol is None:
        multiplicity_tol = MERGE_TOL * max(abs(w[0]), abs(w[-1]))
    V = _fix_phases(V)
    groups = [[0]]
    for k in range(1, d):
        if w[groups[-1][-1]] - w[k] <= multiplicity_tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    eigenvalues, projectors, bases = [], [], []
    for g in groups:
        B = V[:, g]
        eigenvalues.append(float(np.mean(w[g])))
        bases.append(B)
        projectors.append(B @ B.conj().T)
    return Spectrum(np.array(eigenvalues), projectors, bases, float(multiplicity_tol))


def eigvalsh(M) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix in descending order."""
    A = as_hermitian(M)
    if A.shape[0] == 0:
        return np.zeros(0)
    return np.linalg.eigvalsh(A)[::-1]


def min_eig(M) -> float:
    A = as_hermitian(M)
    if A.shape[0] == 0:
        return np.inf
    return float(np.linalg.eigvalsh(A)[0])


def op_norm(M) -> float:
    """Largest eigenvalue magnitude of a Hermitian matrix."""
    w = eigvalsh(M)
    return float(np.abs(w).max()) if w.size else 0.0


def trace(M) -> float:
    return float(np.trace(as_matrix(M)).real)


def mat_power(M, p: float, support_cutoff: float | None = None, psd_tol: float = 1e-10) -> np.ndarray:
    """Matrix power of a PSD matrix through its spectral decomposition.

    Eigenvalues at or below ``support_cutoff`` (default ``1e-12 * ||M||_inf``)
    are treated as zero, so negative powers are taken on the support.  ``p = 0``
    gives the support projector.
    """
    A = as_hermitian(M)
    d = A.shape[0]
    if d == 0:
        return np.zeros((0, 0), dtype=complex)
    w, V = np.linalg.eigh(A)
    top = max(abs(w[0]), abs(w[-1]))
    if w[0] < -psd_tol * max(top, 1.0):
        raise DomainError(f"matrix is not positive semidefinite (eigenvalue {w[0]:.3e})")
    if support_cutoff is None:
        support_cutoff = SUPPORT_CUTOFF * top
    on = w > support_cutoff
    f = np.zeros_like(w)
    f[on] = w[on] ** p
    out = (V * f) @ V.conj().T
    return (out + out.conj().T) / 2


def psd_leq(A, B, tol: float = 0.0) -> bool:
    """``A <= B`` in the semidefinite order, up to ``tol`` on the smallest eigenvalue."""
    A, B = as_hermitian(A), as_hermitian(B)
    if A.shape != B.shape:
        raise DomainError(f"dimension mismatch: {A.shape[0]} vs {B.shape[0]}")
    return min_eig(B - A) >= -tol


def is_psd(M, tol: float = 0.0) -> bool:
    return min_eig(M) >= -tol


def tensor(A, B, *more) -> np.ndarray:
    """Kronecker product, associated left to right for more than two factors."""
    out = np.kron(as_matrix(A), as_matrix(B))
    for C in more:
        out = np.kron(out, as_matrix(C))
    return out


def direct_sum(A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    a, b = A.shape[0], B.shape[0]
    out = np.zeros((a + b, a + b), dtype=complex)
    out[:a, :a] = A
    out[a:, a:] = B
    return out


def partial_trace(M, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Partial trace over one factor of ``C^d1 (x) C^d2``.

    ``keep=1`` traces out the second factor, ``keep=2`` the first.
    """
    A = as_matrix(M)
    d1, d2 = dims
    if d1 * d2 != A.shape[0]:
        raise DomainError(f"dims {dims} do not factor a {A.shape[0]}-dimensional matrix")
    T = A.reshape(d1, d2, d1, d2)
    if keep == 1:
        return np.einsum("ajbj->ab", T)
    if keep == 2:
        return np.einsum("jajb->ab", T)
    raise DomainError(f"keep must be 1 or 2, got {keep}")


def pinching(A, X, multiplicity_tol: float | None = None) -> np.ndarray:
    """Pinching of ``X`` by the spectral projectors of ``A``."""
    A, X = as_hermitian(A), as_matrix(X)
    if A.shape != X.shape:
        raise DomainError(f"dimension mismatch: {A.shape[0]} vs {X.shape[0]}")
    spec = eig_decompose(A, multiplicity_tol)
    return sum((P @ X @ P for P in spec.projectors), np.zeros_like(X))


def commutator_norm(A, B) -> float:
    A, B = as_matrix(A), as_matrix(B)
    return _scale(A @ B - B @ A)


def matrix_to_json(M) -> dict:
    A = as_matrix(M)
    return {"dim": A.shape[0], "re": A.real.tolist(), "im": A.imag.tolist()}


def matrix_from_json(obj, path: str = "matrix") -> np.ndarray:
    """Decode ``{"dim": d, "re": [[...]], "im": [[...]]}``; ``im`` may be omitted."""
    if not isinstance(obj, dict):
        raise DomainError(f"{path}: expected an object with keys dim/re/im")
    if "dim" not in obj:
        raise DomainError(f"{path}.dim: missing")
    d = obj["dim"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 0:
        raise DomainError(f"{path}.dim: expected a nonnegative integer, got {d!r}")
    parts = []
    for key in ("re", "im"):
        if key not in obj:
            if key == "im":
                parts.append(np.zeros((d, d)))
                continue
            if d == 0:
                parts.append(np.zeros((0, 0)))
                continue
            raise DomainError(f"{path}.{key}: missing")
        try:
            arr = np.array(obj[key], dtype=float)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"{path}.{key}: non-numeric entries ({exc})") from None
        if d == 0 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.shape != (d, d):
            raise DomainError(f"{path}.{key}: expected shape ({d}, {d}), got {arr.shape}")
        parts.append(arr)
    return parts[0] + 1j * parts[1]
