"""Dense linear-algebra kernels shared by all estimators.

Everything here wraps LAPACK through numpy: at the target problem sizes
(N up to a few thousand) a full dense SVD is cheap and exact, and the
function boundaries allow swapping in a randomized SVD later without any
API change.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class SvdTriple:
    """Truncated SVD factors: ``u`` (n x r), ``d`` (r,), ``v`` (N x r).

    Columns of ``u`` and ``v`` are orthonormal, ``d`` is nonincreasing and
    nonnegative, and each left singular vector is sign-normalized so that
    its largest-magnitude entry is positive.
    """

    u: np.ndarray
    d: np.ndarray
    v: np.ndarray

    @property
    def rank(self) -> int:
        return self.d.size

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.d) @ self.v.T

    def head(self, r: int) -> "SvdTriple":
        """The leading ``r`` singular triples (no recomputation)."""
        if not 1 <= r <= self.rank:
            raise InvalidArgumentError(f"rank must be in [1, {self.rank}], got {r}")
        return SvdTriple(u=self.u[:, :r], d=self.d[:r], v=self.v[:, :r])


def _check_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise InvalidArgumentError("expected a nonempty 2-d matrix")
    if not np.isfinite(m).all():
        raise InvalidArgumentError("matrix entries must be finite")
    return m


def truncated_svd(m, r: int) -> SvdTriple:
    """Leading ``r`` singular triples of ``m``.

    Reconstruction of the result is the Frobenius-optimal rank-r
    approximation. Deterministic: the sign of each singular vector pair is
    fixed by making the largest-magnitude entry of the left vector positive.
    """
    m = _check_matrix(m)
    if not 1 <= r <= min(m.shape):
        raise InvalidArgumentError(f"rank must be in [1, {min(m.shape)}], got {r}")
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    u, s, v = u[:, :r], s[:r], vt[:r].T
    # Fix signs so repeated runs (and row-resampled refits) agree.
    for k in range(r):
        pivot = np.argmax(np.abs(u[:, k]))
        if u[pivot, k] < 0:
            u[:, k] = -u[:, k]
            v[:, k] = -v[:, k]
    return SvdTriple(u=u, d=s, v=v)


def best_rank_r(m, r: int) -> np.ndarray:
    """The Frobenius-optimal rank-``r`` approximation of ``m``."""
    return truncated_svd(m, r).reconstruct()


def pseudo_inverse(m, rel_tol: float = 1e-10) -> np.ndarray:
    """Moore-Penrose pseudo-inverse via SVD.

    Singular values below ``rel_tol`` times the largest one are treated as
    zero. The result satisfies the four Penrose conditions on the retained
    subspace.
    """
    m = _check_matrix(m)
    if not rel_tol > 0:
        raise InvalidArgumentError(f"rel_tol must be positive, got {rel_tol}")
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    cutoff = rel_tol * (s[0] if s.size else 0.0)
    inv = np.zeros_like(s)
    keep = s > cutoff
    inv[keep] = 1.0 / s[keep]
    return (vt.T * inv) @ u.T
