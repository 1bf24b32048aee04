"""Erdos-Renyi sampling, degrees and the directed-edge index.

Graphs are dense: the adjacency matrix is held as an ``n x n`` uint8 array
because every consumer downstream is a dense eigensolver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Union

import numpy as np
from scipy.sparse.csgraph import connected_components

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One step of the splitmix64 finalizer on a 64-bit integer."""
    z = (x + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix_seed(seed: int, stream: int) -> int:
    """Derive the 64-bit state for ``(seed, stream)``.

    ``splitmix64((splitmix64(seed) + stream * 0x9E3779B97F4A7C15) mod 2**64)``,
    i.e. output ``stream`` of a splitmix64 sequence keyed by the seed.
    """
    key = splitmix64(seed & _MASK64)
    return splitmix64((key + (stream & _MASK64) * _GOLDEN) & _MASK64)


@dataclass(frozen=True)
class SeededRng:
    """A reproducible random stream identified by ``(seed, stream)``.

    Every call to :meth:`generator` returns a fresh PCG64 generator in the
    same initial state, so the same pair always yields the same draws.
    """

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(mix_seed(self.seed, self.stream)))

    def child(self, index: int) -> "SeededRng":
        """Independent sub-stream, e.g. for resampling attempts inside a trial."""
        return SeededRng(mix_seed(self.seed, self.stream), index)


RngLike = Union[SeededRng, np.random.Generator, int]


def _as_generator(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, SeededRng):
        return rng.generator()
    return SeededRng(int(rng)).generator()


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``edges`` is an ``(m, 2)`` int array of pairs ``i < j`` in lexicographic
    order; ``degrees`` is the length-``n`` degree vector.
    """

    n: int
    edges: np.ndarray
    degrees: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.edges.setflags(write=False)
        self.degrees.setflags(write=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "Graph":
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise ValueError("self-loops are not allowed")
        arr = np.sort(arr, axis=1)
        arr = np.unique(arr, axis=0) if arr.size else arr
        degrees = np.bincount(arr.ravel(), minlength=n).astype(np.int64)
        return cls(n, arr, degrees)

    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> "Graph":
        adj = np.asarray(adj)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be square")
        if np.any(np.diag(adj)) or not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric with zero diagonal")
        i, j = np.nonzero(np.triu(adj, 1))
        return cls.from_edges(adj.shape[0], np.column_stack([i, j]))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=np.uint8)
        if self.m:
            adj[self.edges[:, 0], self.edges[:, 1]] = 1
            adj[self.edges[:, 1], self.edges[:, 0]] = 1
        adj.setflags(write=False)
        return adj

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        ncomp, _ = connected_components(self.adjacency, directed=False)
        return ncomp == 1


def sample_gnp(n: int, p: float, rng: RngLike) -> Graph:
    """Sample G(n, p).

    One uniform draw per unordered pair ``i < j``, consumed in row-major
    order, with the edge present when the draw is below ``p``.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    gen = _as_generator(rng)
    iu, ju = np.triu_indices(n, 1)
    keep = gen.random(iu.size) < p
    edges = np.column_stack([iu[keep], ju[keep]]).astype(np.int64)
    degrees = np.bincount(edges.ravel(), minlength=n).astype(np.int64)
    return Graph(n, edges, degrees)


@dataclass(frozen=True, eq=False)
class DirectedEdgeIndex:
    """Both orientations of every edge, sorted by ``(source, target)``."""

    arcs: np.ndarray
    _lookup: dict = field(repr=False)
    # offsets[v]:offsets[v+1] is the block of arcs leaving v
    offsets: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.arcs)

    def index(self, i: int, j: int) -> int:
        return self._lookup[(int(i), int(j))]

    def lookup(self, k: int) -> tuple[int, int]:
        i, j = self.arcs[k]
        return int(i), int(j)


def directed_edges(g: Graph) -> DirectedEdgeIndex:
    arcs = np.concatenate([g.edges, g.edges[:, ::-1]]) if g.m else np.zeros((0, 2), np.int64)
    order = np.lexsort((arcs[:, 1], arcs[:, 0]))
    arcs = np.ascontiguousarray(arcs[order])
    arcs.setflags(write=False)
    lookup = {(int(i), int(j)): k for k, (i, j) in enumerate(arcs)}
    offsets = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(np.bincount(arcs[:, 0], minlength=g.n), out=offsets[1:])
    return DirectedEdgeIndex(arcs, lookup, offsets)


def degree_extremes(g: Graph) -> tuple[int, int]:
    """``(d_max, d_min)``, the first and last order statistics of the degrees."""
    return int(g.degrees.max()), int(g.degrees.min())


def write_edge_list(g: Graph, path) -> None:
    """Header line ``"n m"`` followed by one ``"i j"`` line per edge, 0-indexed."""
    lines = [f"{g.n} {g.m}"] + [f"{i} {j}" for i, j in g.edges]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path) -> Graph:
    rows = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 2:
        raise ValueError(f"{path}: missing 'n m' header")
    n, m = int(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != m:
        raise ValueError(f"{path}: header declares {m} edges, found {len(body)}")
    g = Graph.from_edges(n, [(int(a), int(b)) for a, b in body])
    if g.m != m:
        raise ValueError(f"{path}: duplicate edges")
    return g
