"""Asymptotic, many-copy and catalytic comparisons through the monotone family.

``A`` asymptotically submajorizes ``B`` iff every real monotone (``alpha`` in
``[1, inf)``, every ``i``) is at least as large on ``A`` as on ``B``.  The
quantifier over ``alpha`` is discharged on a grid in ``s = (alpha-1)/alpha``
followed by golden-section refinement around the worst grid point; decisions
therefore carry their grid resolution rather than a proof.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import hermat
from .boxes import Box, normalize_check
from .errors import DomainError
from .monotones import MonotoneIndex, alpha_from_s, divergence_curve, log_sandwiched

DEFAULT_GRID = 128
DECISION_TOL = 1e-9
STRICT_TOL = 1e-9
GOLDEN_ITERS = 60
_PHI = (math.sqrt(5.0) - 1.0) / 2.0
S_MAX = 1.0 - 1e-9


def golden_max(fn, a: float, b: float, iters: int = GOLDEN_ITERS) -> tuple[float, float]:
    """Golden-section search for the maximum of a unimodal ``fn`` on ``[a, b]``."""
    c, d = b - _PHI * (b - a), a + _PHI * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _PHI * (b - a)
            fd = fn(d)
    return (c, fc) if fc >= fd else (d, fd)


def relative_margin(log_a, log_b):
    """``(f_A - f_B) / max(f_A, f_B)`` from base-2 logarithms of the values."""
    la, lb = np.broadcast_arrays(np.asarray(log_a, float), np.asarray(log_b, float))
    out = np.zeros(la.shape)
    both_zero = np.isneginf(la) & np.isneginf(lb)
    with np.errstate(invalid="ignore", over="ignore"):
        d = la - lb
        out = np.where(d >= 0, -np.expm1(-d * math.log(2)), np.expm1(d * math.log(2)))
    out = np.where(both_zero, 0.0, out)
    return out


def s_grid(n: int = DEFAULT_GRID) -> np.ndarray:
    """``n`` points ``k/n`` in ``[0, 1)``; ``s = 0`` is ``alpha = 1``."""
    return np.arange(n) / n


def _exp2(x):
    with np.errstate(over="ignore"):
        return float(np.exp2(x))


@dataclass
class GridPoint:
    index: MonotoneIndex
    f_A: float
    f_B: float
    margin: float

    def to_json(self) -> dict:
        return {**self.index.to_json(), "f_A": self.f_A, "f_B": self.f_B, "margin": self.margin}


@dataclass
class AsymptoticDecision:
    holds: bool
    worst_margin: float
    worst_index: MonotoneIndex
    grid: list = field(repr=False)
    resolution: int = DEFAULT_GRID
    refined: bool = True
    decision_tol: float = DECISION_TOL

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "worst_margin": self.worst_margin,
            "worst_index": self.worst_index.to_json(),
            "grid_resolution": self.resolution,
            "refined": self.refined,
            "decision_tol": self.decision_tol,
            "grid": [g.to_json() for g in self.grid],
        }

    def to_csv(self) -> str:
        return grid_csv(self.grid)


def grid_csv(grid) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["i", "alpha", "f_A", "f_B", "margin"])
    for g in grid:
        a = "inf" if g.index.tropical else repr(float(g.index.alpha))
        w.writerow([g.index.i, a, repr(g.f_A), repr(g.f_B), repr(g.margin)])
    return buf.getvalue()


@dataclass
class StrictCertificate:
    all_strict: bool
    min_gap_finite: float
    gap_at_infinity: float
    strict_tol: float = STRICT_TOL
    resolution: int = DEFAULT_GRID

    def to_json(self) -> dict:
        return {
            "all_strict": self.all_strict,
            "min_gap_finite": self.min_gap_finite,
            "gap_at_infinity": self.gap_at_infinity,
            "strict_tol": self.strict_tol,
            "grid_resolution": self.resolution,
            "certifies": "many-copy and catalytic submajorization" if self.all_strict else None,
        }


def _check_pair(A: Box, B: Box):
    if A.m != B.m:
        raise DomainError(f"boxes have different m ({A.m} vs {B.m})")


def _margin_fn(A: Box, B: Box, i: int):
    def fn(s: float) -> float:
        a = float(alpha_from_s(s))
        return float(relative_margin(log_sandwiched(A, i, [a])[0], log_sandwiched(B, i, [a])[0]))

    return fn


def _scan(A: Box, B: Box, grid: int, refine: bool, include_inf: bool):
    """Per index: grid points and the refined minimum of the relative margin over finite alpha."""
    s = s_grid(grid)
    alphas = alpha_from_s(s)
    if include_inf:
        alphas = np.append(alphas, np.inf)
    points, minima = [], []
    for i in range(1, A.m + 1):
        la, lb = log_sandwiched(A, i, alphas), log_sandwiched(B, i, alphas)
        marg = relative_margin(la, lb)
        for a, x, y, mg in zip(alphas, la, lb, marg):
            points.append(GridPoint(MonotoneIndex(i, float(a)), _exp2(x), _exp2(y), float(mg)))
        fin = marg[: len(s)]
        k = int(np.argmin(fin))
        best_s, best = float(s[k]), float(fin[k])
        if refine:
            lo = s[k - 1] if k > 0 else 0.0
            hi = s[k + 1] if k + 1 < len(s) else S_MAX
            fn = _margin_fn(A, B, i)
            x, v = golden_max(lambda t: -fn(t), lo, hi)
            if -v < best:
                best_s, best = x, -v
        minima.append((i, best_s, best))
    return points, minima


def asymptotic_geq(
    A: Box, B: Box, decision_tol: float = DECISION_TOL, grid: int = DEFAULT_GRID, refine: bool = True
) -> AsymptoticDecision:
    """Decide ``A >~ B`` by comparing every monotone on the s-grid.

    The tropical values (``alpha = inf``) are compared as well; that inequality
    is the large-alpha limit of the finite family, so including it only
    sharpens the grid near ``s = 1``.
    """
    _check_pair(A, B)
    points, minima = _scan(A, B, grid, refine, include_inf=True)
    worst_i, worst_s, worst = min(minima, key=lambda t: t[2])
    worst_idx = MonotoneIndex(worst_i, float(alpha_from_s(worst_s)))
    for g in points:
        if g.index.tropical and g.margin < worst:
            worst, worst_idx = g.margin, g.index
    return AsymptoticDecision(worst >= -decision_tol, worst, worst_idx, points, grid, refine, decision_tol)


def strict_certificate(
    A: Box, B: Box, strict_tol: float = STRICT_TOL, grid: int = DEFAULT_GRID, refine: bool = True
) -> StrictCertificate:
    """Check the strict inequalities that guarantee many-copy and catalytic submajorization.

    ``all_strict`` requires every finite-alpha relative gap (grid plus
    refinement) and every tropical gap to exceed ``strict_tol``.
    """
    _check_pair(A, B)
    points, minima = _scan(A, B, grid, refine, include_inf=True)
    finite = min(v for _, _, v in minima)
    at_inf = min(g.margin for g in points if g.index.tropical)
    return StrictCertificate(finite > strict_tol and at_inf > strict_tol, finite, at_inf, strict_tol, grid)


def _ceil_nat(x: float) -> int:
    return max(0, math.ceil(x - 1e-9))


def power_universal_exponent(A: Box) -> tuple[int, int, int]:
    """Exponents ``(k, k1, k2)`` with ``u^k >= A`` and ``u^k A >= 1``.

    ``k1`` makes ``x -> 2^{-k1/2} x sigma`` a valid map from ``u^k1``;
    ``k2`` makes ``x -> 2^{-k2/2} Tr x / Tr sigma`` one into the unit box.
    """
    if A.dim == 0:
        raise DomainError("the zero box has no power universal bound")
    tr_s = hermat.trace(A.sigma)
    tr_r = [hermat.trace(r) for r in A.rhos]
    if min(tr_r) <= 0:
        raise DomainError("every rho_i must be nonzero")
    f_inf = [float(log_sandwiched(A, i, [np.inf])[0]) for i in range(1, A.m + 1)]
    k1 = _ceil_nat(max([2 * math.log2(tr_s)] + [2 * v for v in f_inf]))
    k2 = _ceil_nat(max([-2 * math.log2(tr_s)] + [2 * math.log2(tr_s / t) for t in tr_r]))
    return max(k1, k2), k1, k2


@dataclass
class ExponentResult:
    value: float
    argmax_alpha: float
    per_index: list
    per_index_alpha: list

    def to_json(self) -> dict:
        def enc(a):
            return "inf" if math.isinf(a) else a

        return {
            "value": self.value,
            "argmax_alpha": enc(self.argmax_alpha),
            "per_index": self.per_index,
            "per_index_alpha": [enc(a) for a in self.per_index_alpha],
        }


def _index_exponent(A: Box, i: int, r: float, grid: int) -> tuple[float, float]:
    """``sup_{s in (0,1]} s (r - D_{1/(1-s)})`` and its maximizing alpha (alpha=1 when 0)."""
    s = np.append(np.arange(1, grid) / grid, 1.0)
    D = divergence_curve(A, i, alpha_from_s(s))
    g = s * (r - D)
    k = int(np.argmax(g))
    best_s, best = float(s[k]), float(g[k])

    def fn(t: float) -> float:
        return t * (r - float(divergence_curve(A, i, [float(alpha_from_s(t))])[0]))

    lo = s[k - 1] if k > 0 else 0.0
    hi = s[k + 1] if k + 1 < len(s) - 1 else S_MAX
    if k == len(s) - 1:
        lo = s[-2]
    x, v = golden_max(fn, lo, hi)
    if v > best:
        best_s, best = x, v
    if best <= 0:
        return 0.0, 1.0
    return best, float(alpha_from_s(best_s))


def strong_converse_exponent(A: Box, r: float, grid: int = DEFAULT_GRID) -> ExponentResult:
    """Optimal strong-converse rate ``R*(r) = max_i sup_{alpha>1} (alpha-1)/alpha [r - D_alpha(rho_i||sigma)]``."""
    if not normalize_check(A, 1e-8):
        raise DomainError("strong_converse_exponent needs a normalized box")
    if r < 0:
        raise DomainError("r must be nonnegative")
    per = [_index_exponent(A, i, r, grid) for i in range(1, A.m + 1)]
    k = int(np.argmax([v for v, _ in per]))
    return ExponentResult(per[k][0], per[k][1], [v for v, _ in per], [a for _, a in per])


@dataclass
class RegionResult:
    achievable: bool
    margins: list
    thresholds: list

    def to_json(self) -> dict:
        return {"achievable": self.achievable, "margins": self.margins, "thresholds": self.thresholds}


def exponent_region_check(A: Box, R, r, tol: float = DECISION_TOL, grid: int = DEFAULT_GRID) -> RegionResult:
    """Check that the exponent pairs ``(R_i, r_i)`` are achievable for multiple-hypothesis discrimination."""
    R, r = list(map(float, R)), list(map(float, r))
    if len(R) != A.m or len(r) != A.m:
        raise DomainError(f"need {A.m} values of R and r, got {len(R)} and {len(r)}")
    if not normalize_check(A, 1e-8):
        raise DomainError("exponent_region_check needs a normalized box")
    if min(R + r) < 0:
        raise DomainError("rates must be nonnegative")
    thresholds = [_index_exponent(A, i, r[i - 1], grid)[0] for i in range(1, A.m + 1)]
    margins = [Ri - t for Ri, t in zip(R, thresholds)]
    return RegionResult(all(mg >= -tol for mg in margins), margins, thresholds)
