"""Graph containers, egocentric row sampling, and spectral diagnostics.

All matrix containers are immutable after construction: the wrapped arrays
are marked read-only, so instances can be shared freely across threads.
Node ids are 0-based contiguous integers; external string labels are mapped
at the file-ingestion boundary (see :mod:`egolink.fileio`).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InvalidArgumentError, UndefinedValueError


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Symmetric binary N x N adjacency matrix with zero diagonal.

    Self-loops in the input are silently dropped (the diagonal is forced
    to zero); asymmetry or non-binary entries are rejected.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidArgumentError("adjacency must be a nonempty square matrix")
        if not np.isfinite(m).all():
            raise InvalidArgumentError("adjacency entries must be finite")
        if not np.isin(m, (0.0, 1.0)).all():
            raise InvalidArgumentError("adjacency entries must be 0 or 1")
        m = m.copy()
        np.fill_diagonal(m, 0.0)
        if not np.array_equal(m, m.T):
            raise InvalidArgumentError("adjacency must be symmetric")
        object.__setattr__(self, "entries", _frozen(m))

    @property
    def n_nodes(self) -> int:
        return self.entries.shape[0]

    @property
    def n_edges(self) -> int:
        """Number of undirected edges (half the sum of entries)."""
        return int(round(self.entries.sum())) // 2

    @property
    def average_degree(self) -> float:
        return 2.0 * self.n_edges / self.n_nodes


@dataclass(frozen=True)
class ProbabilityMatrix:
    """Symmetric real N x N matrix of edge probabilities, zero diagonal."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidArgumentError("probability matrix must be a nonempty square matrix")
        if not np.isfinite(m).all():
            raise InvalidArgumentError("probability entries must be finite")
        if m.min() < 0.0 or m.max() > 1.0:
            raise InvalidArgumentError("probability entries must lie in [0, 1]")
        if not np.allclose(m, m.T, rtol=0.0, atol=1e-12):
            raise InvalidArgumentError("probability matrix must be symmetric")
        m = 0.5 * (m + m.T)
        np.fill_diagonal(m, 0.0)
        object.__setattr__(self, "entries", _frozen(m))

    @property
    def n_nodes(self) -> int:
        return self.entries.shape[0]

    @property
    def expected_average_degree(self) -> float:
        return float(self.entries.sum()) / self.n_nodes


@dataclass(frozen=True)
class ScoreMatrix:
    """Symmetric real N x N matrix of predicted link scores.

    Symmetry is enforced by explicit symmetrization on construction; entries
    are otherwise unconstrained because every consumer is rank-based.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidArgumentError("score matrix must be a nonempty square matrix")
        m = 0.5 * (m + m.T)
        object.__setattr__(self, "entries", _frozen(m))

    @property
    def n_nodes(self) -> int:
        return self.entries.shape[0]

    def clamped(self, lo: float = 0.0, hi: float = 1.0) -> "ScoreMatrix":
        """Optional clamp for callers that want probability-like values.

        The raw scores are kept unclipped everywhere else: both metrics are
        rank-based and clipping destroys order information at the boundary.
        """
        return ScoreMatrix(np.clip(self.entries, lo, hi))


@dataclass(frozen=True)
class EgoSample:
    """A set of sampled node indices plus the observed rows of the matrix.

    ``row_block`` holds one full row per sampled node, in the order of
    ``indices``. Rows are binary when drawn from an adjacency matrix, but
    real-valued rows (e.g. probability rows for noiseless experiments) are
    accepted; the only structural requirement is that the in-sample block
    ``row_block[:, indices]`` is exactly symmetric.
    """

    n_total: int
    indices: np.ndarray
    row_block: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=int)
        rows = np.asarray(self.row_block, dtype=float)
        n_total = int(self.n_total)
        if idx.ndim != 1 or idx.size < 1:
            raise InvalidArgumentError("indices must be a nonempty 1-d array")
        if idx.min() < 0 or idx.max() >= n_total:
            raise InvalidArgumentError("indices out of range")
        if np.unique(idx).size != idx.size:
            raise InvalidArgumentError("indices must be distinct")
        if rows.shape != (idx.size, n_total):
            raise InvalidArgumentError(
                f"row block must have shape ({idx.size}, {n_total}), got {rows.shape}"
            )
        if not np.isfinite(rows).all():
            raise InvalidArgumentError("row block entries must be finite")
        block = rows[:, idx]
        if not np.array_equal(block, block.T):
            raise InvalidArgumentError("in-sample block must be symmetric")
        object.__setattr__(self, "n_total", n_total)
        idx = idx.copy()
        idx.flags.writeable = False
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "row_block", _frozen(rows))

    @classmethod
    def from_adjacency(cls, a: AdjacencyMatrix, indices) -> "EgoSample":
        idx = np.asarray(indices, dtype=int)
        return cls(n_total=a.n_nodes, indices=idx, row_block=a.entries[idx, :])

    @property
    def n_sampled(self) -> int:
        return self.indices.size

    @property
    def sampling_rate(self) -> float:
        return self.n_sampled / self.n_total

    @property
    def in_sample_block(self) -> np.ndarray:
        """The n x n block between sampled nodes, ordered like ``indices``."""
        return self.row_block[:, self.indices]

    @property
    def out_indices(self) -> np.ndarray:
        """Node ids outside the sample, ascending."""
        mask = np.ones(self.n_total, dtype=bool)
        mask[self.indices] = False
        return np.flatnonzero(mask)

    def drop_row(self, position: int) -> "EgoSample":
        """Sample with the row at ``position`` (0-based within the sample) removed."""
        return EgoSample(
            n_total=self.n_total,
            indices=np.delete(self.indices, position),
            row_block=np.delete(self.row_block, position, axis=0),
        )


def sample_ego(a: AdjacencyMatrix, n: int, rng: np.random.Generator) -> EgoSample:
    """Sample ``n`` nodes uniformly without replacement and record their rows.

    The same seed always yields the same sample; the drawn order of the
    indices is preserved.
    """
    if not 1 <= n <= a.n_nodes:
        raise InvalidArgumentError(f"sample size must be in [1, {a.n_nodes}], got {n}")
    idx = rng.choice(a.n_nodes, size=n, replace=False)
    return EgoSample.from_adjacency(a, idx)


def numerical_rank(a: "AdjacencyMatrix | np.ndarray") -> float:
    """Squared Frobenius norm over squared spectral norm.

    Accepts an :class:`AdjacencyMatrix` or a raw 2-d array. The value lies
    in [1, N] and measures how flat the spectrum is.
    """
    m = a.entries if isinstance(a, AdjacencyMatrix) else np.asarray(a, dtype=float)
    fro2 = float((m * m).sum())
    if fro2 == 0.0:
        raise UndefinedValueError("numerical rank is undefined for an all-zero matrix")
    if m.shape[0] == m.shape[1] and np.array_equal(m, m.T):
        spec = float(np.abs(np.linalg.eigvalsh(m)).max())
    else:
        spec = float(np.linalg.svd(m, compute_uv=False)[0])
    return fro2 / (spec * spec)


def unobserved_pairs(s: EgoSample) -> Iterator[tuple[int, int]]:
    """Unordered node pairs (i, j), i < j, with both endpoints unsampled.

    Yields exactly C(N - n, 2) pairs, each once, in lexicographic order.
    """
    return itertools.combinations(s.out_indices.tolist(), 2)
