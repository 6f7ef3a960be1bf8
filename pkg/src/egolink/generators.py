"""Synthetic network models with average-degree calibration.

Three latent-variable families:

* ``distance``: 5-d standard normal positions, logistic decay of distance.
* ``product``: 5 i.i.d. Beta(0.5, 1) coordinates, plain inner product
  (kernel rank 5).
* ``sbm``: uniform block label in {1..5}; within-block probability
  0.05 + (b - 0.3)/6 for block b, 0.05 between blocks (kernel rank 5).

Each family produces a kernel matrix f(X_i, X_j); a global coefficient phi
scales it so that the expected average degree matches a target, with
probabilities truncated at 1 after scaling.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError
from .network import AdjacencyMatrix, ProbabilityMatrix

FAMILIES = ("distance", "product", "sbm")
LATENT_DIM = 5
SBM_BLOCKS = 5
SBM_BASE_PROB = 0.05


@dataclass(frozen=True)
class ModelSpec:
    """One synthetic-model cell: family, size, and target average degree.

    ``seed`` is provenance metadata used by the CLI when no generator is
    supplied explicitly; library calls always take an injected RNG.
    """

    family: str
    n_nodes: int
    target_degree: float
    seed: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidArgumentError(f"unknown family {self.family!r}, expected one of {FAMILIES}")
        if self.n_nodes < 2:
            raise InvalidArgumentError("need at least 2 nodes")
        if not 0 < self.target_degree <= self.n_nodes - 1:
            raise InvalidArgumentError(
                f"target degree must be in (0, {self.n_nodes - 1}], got {self.target_degree}"
            )


def sbm_within_probability(block: int) -> float:
    """Within-block connection kernel value for block label in 1..5."""
    if not 1 <= block <= SBM_BLOCKS:
        raise InvalidArgumentError(f"block label must be in [1, {SBM_BLOCKS}]")
    return SBM_BASE_PROB + (block - 0.3) / 6.0


def kernel_matrix(spec: ModelSpec, rng: np.random.Generator) -> np.ndarray:
    """Draw latent positions and return the full N x N kernel f(X_i, X_j).

    The diagonal is included (f evaluated at i = j); downstream probability
    construction zeroes it. For the product and SBM families this matrix has
    rank exactly 5.
    """
    n = spec.n_nodes
    if spec.family == "distance":
        x = rng.standard_normal((n, LATENT_DIM))
        sq = (x * x).sum(axis=1)
        d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * x @ x.T, 0.0)
        f = 1.0 / (1.0 + np.exp(np.sqrt(d2)))
    elif spec.family == "product":
        x = rng.beta(0.5, 1.0, size=(n, LATENT_DIM))
        f = x @ x.T
    else:  # sbm
        labels = rng.integers(1, SBM_BLOCKS + 1, size=n)
        boost = (labels - 0.3) / 6.0
        same = labels[:, None] == labels[None, :]
        f = np.where(same, SBM_BASE_PROB + boost[:, None], SBM_BASE_PROB)
    return 0.5 * (f + f.T)


def calibrate_phi(f_matrix: np.ndarray, target_degree: float, tol: float = 1e-6) -> float:
    """Coefficient phi with expected average degree of min(phi * f, 1) equal
    to ``target_degree`` within ``tol``, found by monotone bisection.

    The expected average degree is (2/N) * sum over unordered off-diagonal
    pairs of the truncated probabilities.
    """
    f = np.asarray(f_matrix, dtype=float)
    if f.ndim != 2 or f.shape[0] != f.shape[1]:
        raise InvalidArgumentError("kernel matrix must be square")
    n = f.shape[0]
    tri = f[np.triu_indices(n, k=1)]
    if tri.min() < 0:
        raise InvalidArgumentError("kernel matrix must be nonnegative")
    if not tri.any():
        raise InvalidArgumentError("kernel matrix has no positive off-diagonal entries")
    if target_degree > n - 1:
        raise InvalidArgumentError(f"target degree {target_degree} exceeds N - 1 = {n - 1}")

    def realized(phi: float) -> float:
        return 2.0 / n * float(np.minimum(phi * tri, 1.0).sum())

    max_degree = 2.0 / n * float((tri > 0).sum())
    if target_degree > max_degree + tol:
        raise InvalidArgumentError(
            f"target degree {target_degree} unreachable (max {max_degree:.6g} at saturation)"
        )

    hi = 1.0
    while realized(hi) < target_degree and hi < 1e18:
        hi *= 2.0
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        value = realized(mid)
        if abs(value - target_degree) <= tol:
            return mid
        if value < target_degree:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def generate_probability(spec: ModelSpec, rng: np.random.Generator) -> ProbabilityMatrix:
    """Kernel draw plus degree calibration, truncated at 1, zero diagonal."""
    f = kernel_matrix(spec, rng)
    phi = calibrate_phi(f, spec.target_degree)
    p = np.minimum(phi * f, 1.0)
    np.fill_diagonal(p, 0.0)
    return ProbabilityMatrix(p)


def sample_adjacency(p: ProbabilityMatrix, rng: np.random.Generator) -> AdjacencyMatrix:
    """Independent Bernoulli draw of each upper-triangle entry, mirrored."""
    n = p.n_nodes
    iu = np.triu_indices(n, k=1)
    hits = rng.random(iu[0].size) < p.entries[iu]
    a = np.zeros((n, n))
    a[iu] = hits
    a = a + a.T
    return AdjacencyMatrix(a)
