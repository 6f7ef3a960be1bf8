"""Row-space (subspace) estimator for egocentrically sampled networks.

The estimator works in two stages: truncate the observed row block to its
best rank-r approximation, then plug the pseudo-inverse of the truncated
in-sample block into a quadratic form that extends the rows to the full
matrix. The approximation rank is the single tuning parameter; it can be
chosen by row-resampling cross-validation (:func:`select_rank`).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateCVError, DegenerateSampleError, InvalidArgumentError
from .linalg import SvdTriple, pseudo_inverse, truncated_svd
from .metrics import auc_score, UndefinedMetricError
from .network import EgoSample, ScoreMatrix

DEFAULT_MAX_GRID_RANK = 20


@dataclass(frozen=True)
class SeConfig:
    """Estimator configuration.

    ``rank=None`` means the caller will pick the rank (e.g. via
    :func:`select_rank`); the fitting entry points require an explicit rank.
    ``cv_rank_grid=None`` defaults to 1..min(n-1, 20) at selection time.
    The effective number of held-out rows is min(cv_holdout_rows, n).
    """

    rank: Optional[int] = None
    cv_holdout_rows: int = 30
    cv_rank_grid: Optional[Sequence[int]] = None
    pinv_rel_tol: float = 1e-10

    def __post_init__(self):
        if self.rank is not None and self.rank < 1:
            raise InvalidArgumentError(f"rank must be positive, got {self.rank}")
        if self.cv_holdout_rows < 1:
            raise InvalidArgumentError("cv_holdout_rows must be positive")
        if self.cv_rank_grid is not None and len(self.cv_rank_grid) == 0:
            raise InvalidArgumentError("cv_rank_grid must be nonempty")
        if not self.pinv_rel_tol > 0:
            raise InvalidArgumentError("pinv_rel_tol must be positive")

    def with_rank(self, rank: int) -> "SeConfig":
        return SeConfig(
            rank=rank,
            cv_holdout_rows=self.cv_holdout_rows,
            cv_rank_grid=self.cv_rank_grid,
            pinv_rel_tol=self.pinv_rel_tol,
        )


@dataclass(frozen=True)
class Embedding:
    """Factorization scores = positions.T @ form @ positions.

    ``positions`` is r x N (one column per node); ``form`` is the r x r
    symmetric matrix representing the inner product of the embedding space.
    """

    positions: np.ndarray
    form: np.ndarray

    @property
    def rank(self) -> int:
        return self.form.shape[0]

    def reconstruct(self) -> np.ndarray:
        return self.positions.T @ self.form @ self.positions


def _require_rank(cfg: SeConfig, n: int) -> int:
    if cfg.rank is None:
        raise InvalidArgumentError("an explicit rank is required (run select_rank first)")
    if not 1 <= cfg.rank <= n:
        raise InvalidArgumentError(f"rank must be in [1, {n}], got {cfg.rank}")
    return cfg.rank


def _symmetrized_block_pinv(p_in: np.ndarray, indices: np.ndarray, rel_tol: float) -> np.ndarray:
    """0.5 * (pinv(P11) + pinv(P11.T)) for P11 = in-sample columns of P_in."""
    p11 = p_in[:, indices]
    scale = np.abs(p_in).max()
    if scale == 0.0 or np.abs(p11).max() <= 1e-13 * scale:
        raise DegenerateSampleError("in-sample block of the truncated rows is zero")
    inv = pseudo_inverse(p11, rel_tol)
    return 0.5 * (inv + inv.T)


def se_estimate(sample: EgoSample, cfg: SeConfig) -> ScoreMatrix:
    """Fit the two-stage row-space estimator at the configured rank.

    Returns the full N x N score matrix (rank at most r), symmetrized to
    absorb floating-point asymmetry. The in-sample block is returned as
    estimated, not overwritten with observed values: evaluation restricts
    itself to unobserved pairs, keeping fitting and scoring orthogonal.
    """
    r = _require_rank(cfg, sample.n_sampled)
    svd = truncated_svd(sample.row_block, r)
    p_in = svd.reconstruct()
    x_hat = _symmetrized_block_pinv(p_in, sample.indices, cfg.pinv_rel_tol)
    return ScoreMatrix(p_in.T @ x_hat @ p_in)


def extract_embedding(sample: EgoSample, cfg: SeConfig) -> Embedding:
    """Node embedding whose quadratic form reproduces :func:`se_estimate`.

    Positions are the top right-singular directions of the row block; the
    form matrix folds the singular values and the in-sample pseudo-inverse
    together, so positions.T @ form @ positions equals the score matrix up
    to floating-point error.
    """
    r = _require_rank(cfg, sample.n_sampled)
    svd = truncated_svd(sample.row_block, r)
    p_in = svd.reconstruct()
    x_hat = _symmetrized_block_pinv(p_in, sample.indices, cfg.pinv_rel_tol)
    core = svd.u.T @ x_hat @ svd.u
    form = svd.d[:, None] * core * svd.d[None, :]
    form = 0.5 * (form + form.T)
    return Embedding(positions=svd.v.T, form=form)


def _holdout_row_scores(
    svd: SvdTriple, r: int, sub_indices: np.ndarray, held_out: int,
    score_columns: np.ndarray, rel_tol: float,
) -> Optional[np.ndarray]:
    """Scores the rank-r fit assigns to pairs (held_out, score_columns).

    Equivalent to fitting se_estimate on the reduced sample and reading one
    row of the result, but computed without materializing the N x N matrix.
    Returns None when the reduced fit is degenerate at this rank.
    """
    u, d, v = svd.u[:, :r], svd.d[:r], svd.v[:, :r]
    p11 = (u * d) @ v[sub_indices].T
    scale = np.abs(d[0]) if d.size else 0.0
    if scale == 0.0 or np.abs(p11).max() <= 1e-13 * scale:
        return None
    inv = pseudo_inverse(p11, rel_tol)
    x_hat = 0.5 * (inv + inv.T)
    col_k = (u * d) @ v[held_out]
    w = u.T @ (x_hat @ col_k)
    return (v[score_columns] * d) @ w


def select_rank(sample: EgoSample, cfg: SeConfig, rng: np.random.Generator) -> int:
    """Choose the approximation rank by row-resampling cross-validation.

    Repeatedly hold out one sampled row, refit on the remaining rows at each
    candidate rank, and score AUC of the predictions for that row against
    its observed out-of-sample entries (entries are treated as positive when
    nonzero). Returns the candidate with the best mean AUC; exact ties go to
    the smallest rank.
    """
    n = sample.n_sampled
    if n < 3:
        raise InvalidArgumentError("rank selection needs at least 3 sampled rows")
    if cfg.cv_rank_grid is not None:
        grid = sorted(set(int(g) for g in cfg.cv_rank_grid))
    else:
        grid = list(range(1, min(n - 1, DEFAULT_MAX_GRID_RANK) + 1))
    if not grid:
        raise InvalidArgumentError("candidate rank grid is empty")
    if grid[0] < 1 or grid[-1] >= n:
        raise InvalidArgumentError(f"candidate ranks must lie in [1, {n - 1}]")

    out_cols = sample.out_indices
    if out_cols.size < 2:
        raise DegenerateCVError("not enough out-of-sample columns to score holdout rows")
    n_holdouts = min(cfg.cv_holdout_rows, n)
    positions = rng.choice(n, size=n_holdouts, replace=False)

    r_max = grid[-1]
    aucs = np.full((n_holdouts, len(grid)), np.nan)
    for t, pos in enumerate(positions):
        labels = sample.row_block[pos, out_cols] > 0
        if not labels.any() or labels.all():
            continue  # AUC undefined for this row
        sub_rows = np.delete(sample.row_block, pos, axis=0)
        sub_indices = np.delete(sample.indices, pos)
        svd = truncated_svd(sub_rows, min(r_max, sub_rows.shape[0]))
        for gi, r in enumerate(grid):
            if r > svd.rank:
                continue
            scores = _holdout_row_scores(
                svd, r, sub_indices, int(sample.indices[pos]), out_cols, cfg.pinv_rel_tol
            )
            if scores is None:
                continue
            try:
                aucs[t, gi] = auc_score(scores, labels)
            except UndefinedMetricError:  # pragma: no cover - labels checked above
                continue
    if np.isnan(aucs).all():
        raise DegenerateCVError("no holdout row produced a defined AUC")

    best_rank, best_mean = None, -np.inf
    for gi, r in enumerate(grid):
        col = aucs[:, gi]
        if np.isnan(col).all():
            continue
        mean = float(np.nanmean(col))
        if mean > best_mean:
            best_rank, best_mean = r, mean
    if best_rank is None:  # pragma: no cover - guarded by the all-nan check
        raise DegenerateCVError("no candidate rank could be scored")
    return best_rank
