"""Dense eigen- and singular-value kernels with fixed ordering contracts.

All three kernels delegate to LAPACK through numpy/scipy: ``syevd`` for the
symmetric case, Hessenberg reduction plus shifted QR (``geev``) for the
general case and ``gesdd`` for singular values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import NoConvergence, NotSymmetric

SYMMETRY_TOL = 1e-12
# decimals kept in the modulus when sorting, so conjugate pairs that differ
# only by rounding in |z| tie and fall back to the argument
_SORT_DECIMALS = 12


@dataclass(frozen=True, eq=False)
class SymmetricSpectrum:
    """Eigenvalues sorted descending and the matching orthonormal columns."""

    lambdas: np.ndarray
    vectors: np.ndarray

    def __len__(self) -> int:
        return len(self.lambdas)


@dataclass(frozen=True, eq=False)
class ComplexSpectrum:
    """Eigenvalues sorted by descending modulus, then ascending argument."""

    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


def sort_complex(values) -> np.ndarray:
    values = np.asarray(values, dtype=complex).ravel()
    mod = np.round(np.abs(values), _SORT_DECIMALS)
    order = np.lexsort((np.angle(values), -mod))
    return values[order]


def sym_eig(M) -> SymmetricSpectrum:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSymmetric("matrix must be square")
    if M.size and np.max(np.abs(M - M.T)) > SYMMETRY_TOL:
        raise NotSymmetric(f"asymmetry {np.max(np.abs(M - M.T)):.3e} exceeds {SYMMETRY_TOL}")
    try:
        w, v = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    # stable so that ties keep LAPACK's column order (zero matrix -> identity)
    order = np.argsort(-w, kind="stable")
    return SymmetricSpectrum(w[order], v[:, order])


def gen_eig(M) -> ComplexSpectrum:
    """All eigenvalues of a general square matrix.

    LAPACK caps the QR sweeps itself (30 iterations per eigenvalue, well
    inside 100 * dim); a non-converged run surfaces as :class:`NoConvergence`.
    """
    M = np.asarray(M)
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    try:
        w = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return ComplexSpectrum(sort_complex(w))


def svdvals(M) -> np.ndarray:
    M = np.asarray(M)
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    try:
        s = scipy.linalg.svdvals(M)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return np.sort(s)[::-1]


def bottleneck_matching(a, b) -> float:
    """Smallest ``r`` such that the multisets ``a`` and ``b`` can be paired
    one-to-one with every pair within distance ``r``.

    Binary search over the sorted pairwise distances with a maximum
    bipartite matching as the feasibility test.
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if len(a) != len(b):
        raise ValueError(f"multisets differ in size: {len(a)} vs {len(b)}")
    if len(a) == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    greedy = _greedy_matching(a, b, cost)
    # each point of a must reach some point of b, and vice versa
    lower = max(cost.min(axis=1).max(), cost.min(axis=0).max())
    if greedy <= lower:
        return float(greedy)
    cand = np.unique(cost[(cost >= lower) & (cost <= greedy)])
    lo, hi = 0, len(cand) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect(cost <= cand[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(cand[lo])


def _greedy_matching(a, b, cost) -> float:
    # nearest available partner, largest-modulus points first
    taken = np.zeros(len(b), dtype=bool)
    worst = 0.0
    for i in np.argsort(-np.abs(a), kind="stable"):
        row = np.where(taken, np.inf, cost[i])
        j = int(np.argmin(row))
        taken[j] = True
        worst = max(worst, float(row[j]))
    return worst


def _perfect(mask: np.ndarray) -> bool:
    match = maximum_bipartite_matching(csr_matrix(mask), perm_type="column")
    return bool(np.all(match >= 0))
