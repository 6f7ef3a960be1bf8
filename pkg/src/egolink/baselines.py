"""Benchmark link-prediction methods adapted to egocentric masks.

Four comparison methods: the plain row/column plug-in (CUR), universal
singular value thresholding (USVT), nuclear-norm matrix completion via
iterative soft-thresholding, and neighborhood smoothing with the row-block
cross-product standing in for the squared adjacency.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConvergenceWarning, DegenerateSampleError, InvalidArgumentError
from .linalg import pseudo_inverse
from .network import AdjacencyMatrix, EgoSample, ScoreMatrix


@dataclass(frozen=True)
class MaskedMatrix:
    """A square matrix together with a symmetric entry-observation mask."""

    entries: np.ndarray
    observed: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        mask = np.asarray(self.observed, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidArgumentError("masked matrix must be square and nonempty")
        if mask.shape != m.shape:
            raise InvalidArgumentError("mask shape must match entries")
        if not np.array_equal(mask, mask.T):
            raise InvalidArgumentError("mask must be symmetric")
        if not np.isfinite(m[mask]).all():
            raise InvalidArgumentError("observed entries must be finite")
        m = m.copy()
        m[~mask] = 0.0
        m.flags.writeable = False
        mask = mask.copy()
        mask.flags.writeable = False
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "observed", mask)

    @property
    def n_nodes(self) -> int:
        return self.entries.shape[0]

    @property
    def observed_fraction(self) -> float:
        return float(self.observed.mean())

    @classmethod
    def from_ego_sample(cls, s: EgoSample) -> "MaskedMatrix":
        """Egocentric mask: entry (i, j) is observed iff i or j was sampled."""
        n = s.n_total
        entries = np.zeros((n, n))
        entries[s.indices, :] = s.row_block
        entries[:, s.indices] = s.row_block.T
        in_sample = np.zeros(n, dtype=bool)
        in_sample[s.indices] = True
        observed = in_sample[:, None] | in_sample[None, :]
        return cls(entries=entries, observed=observed)

    @classmethod
    def from_iid_pairs(cls, a: AdjacencyMatrix, rho: float, rng: np.random.Generator) -> "MaskedMatrix":
        """Uniform pair sampling: each unordered off-diagonal pair is observed
        independently with probability ``rho``; the zero diagonal is known."""
        if not 0 < rho <= 1:
            raise InvalidArgumentError(f"observation rate must be in (0, 1], got {rho}")
        n = a.n_nodes
        observed = np.eye(n, dtype=bool)
        iu = np.triu_indices(n, k=1)
        hits = rng.random(iu[0].size) < rho
        observed[iu] = hits
        observed = observed | observed.T
        return cls(entries=a.entries, observed=observed)


def cur_estimate(s: EgoSample) -> ScoreMatrix:
    """Row/column plug-in with the raw pseudo-inverse as the linking matrix.

    Zero in-sample reconstruction error whenever the in-sample block spans
    the row block, which is exactly why it overfits as a link predictor.
    """
    a11 = s.in_sample_block
    if not a11.any():
        raise DegenerateSampleError("in-sample block is all zero")
    link = pseudo_inverse(a11)
    return ScoreMatrix(s.row_block.T @ link @ s.row_block)


def usvt_estimate(m: MaskedMatrix, threshold_mult: float = 2.02) -> ScoreMatrix:
    """Universal singular value thresholding on the zero-filled matrix.

    Keeps singular values above ``threshold_mult * sqrt(N * p_hat)`` where
    ``p_hat`` is the observed fraction, rescales the reconstruction by
    1/p_hat, and clips to [0, 1].
    """
    if not m.observed.any():
        raise InvalidArgumentError("USVT needs at least one observed entry")
    p_hat = m.observed_fraction
    u, sv, vt = np.linalg.svd(m.entries, full_matrices=False)
    keep = sv > threshold_mult * np.sqrt(m.n_nodes * p_hat)
    rec = (u[:, keep] * sv[keep]) @ vt[keep, :] / p_hat
    return ScoreMatrix(np.clip(rec, 0.0, 1.0))


def _soft_threshold_svd(z: np.ndarray, lam: float) -> tuple[np.ndarray, float]:
    u, sv, vt = np.linalg.svd(z, full_matrices=False)
    shrunk = np.maximum(sv - lam, 0.0)
    nz = shrunk > 0
    return (u[:, nz] * shrunk[nz]) @ vt[nz, :], float(shrunk.sum())


def _soft_impute(
    m: MaskedMatrix, lam: float, tol: float, max_iter: int
) -> tuple[np.ndarray, list[float], bool]:
    """Iterative singular-value soft-thresholding with imputation.

    Minimizes lam * ||X||_* + 0.5 * ||observed part of (X - A)||_F^2; each
    sweep rebuilds the working matrix from observed data plus the current
    iterate's unobserved entries, then soft-thresholds the spectrum. The
    objective is nonincreasing across sweeps.
    """
    observed = m.observed
    data = m.entries
    x = np.zeros_like(data)
    objectives: list[float] = []
    converged = False
    for _ in range(max_iter):
        z = np.where(observed, data, x)
        x_new, nuclear = _soft_threshold_svd(z, lam)
        resid = (x_new - data)[observed]
        objectives.append(lam * nuclear + 0.5 * float(resid @ resid))
        denom = max(float(np.linalg.norm(x)), 1.0)
        change = float(np.linalg.norm(x_new - x)) / denom
        x = x_new
        if change < tol:
            converged = True
            break
    return x, objectives, converged


def mc_nuclear_estimate(
    m: MaskedMatrix,
    lam: Optional[float] = None,
    tol: float = 1e-4,
    max_iter: int = 200,
) -> ScoreMatrix:
    """Nuclear-norm-regularized completion of the observed entries.

    ``lam`` defaults to sqrt(N). If the iteration cap is reached before the
    relative iterate change drops below ``tol``, the best (last) iterate is
    returned and a :class:`ConvergenceWarning` is emitted.
    """
    if lam is None:
        lam = float(np.sqrt(m.n_nodes))
    if not lam > 0:
        raise InvalidArgumentError(f"lam must be positive, got {lam}")
    if not tol > 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol}")
    x, _, converged = _soft_impute(m, lam, tol, max_iter)
    if not converged:
        warnings.warn(
            f"soft-impute did not reach tol={tol} within {max_iter} iterations",
            ConvergenceWarning,
            stacklevel=2,
        )
    return ScoreMatrix(x)


def ns_estimate(s: EgoSample, bandwidth_mult: float = 1.0) -> ScoreMatrix:
    """Neighborhood smoothing driven by the row-block cross-product.

    Pairwise dissimilarity between nodes i and j is the largest difference,
    over reference nodes k distinct from both, between columns i and j of
    the similarity matrix A_in.T @ A_in (which equals A^2 under full
    sampling). Each node is smoothed over the observed rows of the nodes
    within the h-quantile of its dissimilarities,
    h = bandwidth_mult * sqrt(log N / N); a node whose neighborhood contains
    no sampled rows falls back to the mean observed row. The two directed
    smoothings are averaged.
    """
    if s.n_sampled < 2:
        raise InvalidArgumentError("neighborhood smoothing needs at least 2 sampled rows")
    n = s.n_total
    sim = s.row_block.T @ s.row_block / s.n_sampled
    h = min(1.0, bandwidth_mult * np.sqrt(np.log(n) / n))

    row_of = np.full(n, -1, dtype=int)
    row_of[s.indices] = np.arange(s.n_sampled)
    mean_row = s.row_block.mean(axis=0)

    smoothed = np.empty((n, n))
    ar = np.arange(n)
    for i in range(n):
        diff = np.abs(sim[i][None, :] - sim)  # row j, reference column k
        diff[:, i] = 0.0  # drop k = i
        diff[ar, ar] = 0.0  # drop k = j
        dis = diff.max(axis=1)
        others = dis[ar != i]
        cutoff = np.quantile(others, h)
        neighbors = np.flatnonzero((dis <= cutoff) & (ar != i))
        rows = row_of[neighbors]
        rows = rows[rows >= 0]
        if rows.size == 0:
            smoothed[i] = mean_row
        else:
            smoothed[i] = s.row_block[rows].mean(axis=0)
    return ScoreMatrix(smoothed)
