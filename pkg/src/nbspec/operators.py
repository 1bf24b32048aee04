"""Non-backtracking matrix B and the 2n x 2n operators built from A and D."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import DegenerateScale, GraphDisconnected, MinDegreeTooLow, TooLarge
from .graph import DirectedEdgeIndex, Graph, directed_edges
from .spectral import bottleneck_matching, gen_eig

MAX_ORACLE_EDGES = 2000


def build_B(g: Graph, idx: DirectedEdgeIndex | None = None) -> np.ndarray:
    """Dense 2m x 2m matrix with B[i->j, k->l] = 1 iff j == k and i != l."""
    if idx is None:
        idx = directed_edges(g)
    size = len(idx)
    B = np.zeros((size, size))
    for k, (i, j) in enumerate(idx.arcs):
        B[k, idx.offsets[j]:idx.offsets[j + 1]] = 1.0
        B[k, idx.index(j, i)] = 0.0
    return B


def scale_alpha(n: int, p: float) -> float:
    """alpha = (n - 1) p - 1."""
    return (n - 1) * p - 1.0


def nb_spectrum_operator(g: Graph) -> np.ndarray:
    """H = [[A, I - D], [I, 0]]."""
    n = g.n
    H = np.zeros((2 * n, 2 * n))
    H[:n, :n] = g.adjacency
    H[np.arange(n), n + np.arange(n)] = 1.0 - g.degrees
    H[n + np.arange(n), np.arange(n)] = 1.0
    return H


def partly_averaged_operator(g: Graph, p: float) -> np.ndarray:
    """H0 = [[A, -alpha I], [I, 0]]."""
    n = g.n
    H0 = np.zeros((2 * n, 2 * n))
    H0[:n, :n] = g.adjacency
    H0[np.arange(n), n + np.arange(n)] = -scale_alpha(n, p)
    H0[n + np.arange(n), np.arange(n)] = 1.0
    return H0


@dataclass(frozen=True, eq=False)
class OperatorBundle:
    """H, H0, tH, tH0 and E for one graph and edge probability.

    Matrices are assembled on first access and then cached.
    """

    graph: Graph
    p: float
    alpha: float
    scale: float

    @property
    def n(self) -> int:
        return self.graph.n

    @cached_property
    def e_diagonal(self) -> np.ndarray:
        """Diagonal of the upper-right block of E, ((n-1)p - d_i) / alpha."""
        return ((self.n - 1) * self.p - self.graph.degrees) / self.alpha

    @cached_property
    def scaled_adjacency(self) -> np.ndarray:
        return self.graph.adjacency / self.scale

    @cached_property
    def H(self) -> np.ndarray:
        return nb_spectrum_operator(self.graph)

    @cached_property
    def H0(self) -> np.ndarray:
        return partly_averaged_operator(self.graph, self.p)

    @cached_property
    def tH0(self) -> np.ndarray:
        n = self.n
        M = np.zeros((2 * n, 2 * n))
        M[:n, :n] = self.scaled_adjacency
        M[np.arange(n), n + np.arange(n)] = -1.0
        M[n + np.arange(n), np.arange(n)] = 1.0
        return M

    @cached_property
    def E(self) -> np.ndarray:
        n = self.n
        M = np.zeros((2 * n, 2 * n))
        M[np.arange(n), n + np.arange(n)] = self.e_diagonal
        return M

    @cached_property
    def tH(self) -> np.ndarray:
        # summed rather than built from (I - D)/alpha, so tH - tH0 - E is identically zero
        return self.tH0 + self.E


def build_operators(g: Graph, p: float) -> OperatorBundle:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    alpha = scale_alpha(g.n, p)
    if not alpha > 0:
        raise DegenerateScale(f"alpha = (n-1)p - 1 = {alpha!r} <= 0 at n={g.n}, p={p}")
    return OperatorBundle(g, p, alpha, float(np.sqrt(alpha)))


def e_operator_norm(bundle: OperatorBundle) -> float:
    """||E||: E is a single shifted diagonal, so the norm is its largest entry."""
    return float(np.max(np.abs(bundle.e_diagonal))) if bundle.n else 0.0


@dataclass(frozen=True)
class OracleReport:
    passed: bool
    max_match_error: float
    multiplicity: int
    tol: float


def ihara_bass_oracle(g: Graph, tol: float = 1e-7) -> OracleReport:
    """Compare spectrum(B) with {+1, -1} x (m - n) united with spectrum(H).

    The comparison is a bottleneck (min-max) matching between the two
    multisets of 2m eigenvalues.
    """
    if g.m > MAX_ORACLE_EDGES:
        raise TooLarge(f"m = {g.m} exceeds {MAX_ORACLE_EDGES} for a dense 2m x 2m eigensolve")
    if g.n < 3 or g.degrees.min() < 2:
        raise MinDegreeTooLow(f"minimum degree {int(g.degrees.min())} < 2")
    if not g.is_connected():
        raise GraphDisconnected("graph is not connected")
    k = g.m - g.n
    spec_B = gen_eig(build_B(g)).values
    spec_H = gen_eig(nb_spectrum_operator(g)).values
    predicted = np.concatenate([spec_H, np.ones(k), -np.ones(k)])
    err = bottleneck_matching(spec_B, predicted)
    return OracleReport(err <= tol, err, k, tol)


def dump_matrix_csv(M: np.ndarray, path) -> None:
    """Dense row-major CSV, 17 significant digits; complex entries as ``a+bj``."""
    M = np.asarray(M)
    if np.iscomplexobj(M):
        fmt = lambda z: f"{z.real:.17g}{z.imag:+.17g}j"  # noqa: E731
    else:
        fmt = lambda x: f"{x:.17g}"  # noqa: E731
    rows = [",".join(fmt(x) for x in row) for row in M]
    Path(path).write_text("\n".join(rows) + "\n")


def load_matrix_csv(path) -> np.ndarray:
    rows = [ln.split(",") for ln in Path(path).read_text().splitlines() if ln.strip()]
    if any("j" in cell for row in rows for cell in row):
        return np.array([[complex(c) for c in row] for row in rows])
    return np.array([[float(c) for c in row] for row in rows])
