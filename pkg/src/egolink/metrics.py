"""Ranking metrics restricted to the unobserved block.

Both metrics are computed over unordered node pairs (i, j), i < j, with
neither endpoint sampled. Restricting the original ordered-4-tuple sums to
unordered pairs changes nothing: every term appears with the same
multiplicity in numerator and denominator.

The fast implementations run in O(M log M) via rank statistics and
inversion counting; the brute-force O(M^2) oracles live alongside them and
are used by the test suite to verify exact agreement.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import rankdata

from .errors import UndefinedMetricError
from .network import AdjacencyMatrix, EgoSample, ProbabilityMatrix, ScoreMatrix, unobserved_pairs


@dataclass(frozen=True)
class EvalResult:
    """Metric values for one fitted score matrix; None where undefined."""

    auc: Optional[float]
    kendall_tau: Optional[float]
    n_pairs: int
    n_positive: int


def _unobserved_pair_vectors(matrix: np.ndarray, sample_indices) -> np.ndarray:
    """Entries of ``matrix`` at unordered pairs with both endpoints unsampled."""
    n = matrix.shape[0]
    keep = np.ones(n, dtype=bool)
    keep[np.asarray(sample_indices, dtype=int)] = False
    sub = matrix[np.ix_(keep, keep)]
    iu = np.triu_indices(sub.shape[0], k=1)
    return sub[iu]


def _masked_pair_vectors(matrix: np.ndarray, observed: np.ndarray) -> np.ndarray:
    """Entries of ``matrix`` at unordered pairs whose mask entry is zero."""
    iu = np.triu_indices(matrix.shape[0], k=1)
    unobs = ~observed.astype(bool)[iu]
    return matrix[iu][unobs]


def auc_score(scores: np.ndarray, labels: np.ndarray) -> float:
    """Mann-Whitney AUC of binary ``labels`` under ``scores``, ties counted 1/2."""
    labels = np.asarray(labels, dtype=bool)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("AUC needs at least one positive and one negative pair")
    ranks = rankdata(np.asarray(scores, dtype=float))
    u = ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def _count_inversions(a: np.ndarray) -> int:
    """Number of index pairs i < j with a[i] > a[j] (strict), exact."""
    n = a.size
    if n < 2:
        return 0
    mid = n // 2
    left, right = a[:mid], a[mid:]
    total = _count_inversions(left) + _count_inversions(right)
    left_sorted = np.sort(left)
    # For each element of the right half, count strictly larger left elements.
    pos = np.searchsorted(left_sorted, np.sort(right), side="right")
    total += int((left_sorted.size - pos).sum())
    return total


def _tie_couples(values: np.ndarray) -> int:
    _, counts = np.unique(values, return_counts=True)
    return int((counts * (counts - 1) // 2).sum())


def _strict_concordance_tau(truth: np.ndarray, scores: np.ndarray) -> float:
    """2 * #{couples with truth and score both strictly increasing} over
    #{couples with truth strictly ordered}, minus 1."""
    m = truth.size
    total = m * (m - 1) // 2
    comparable = total - _tie_couples(truth)
    if comparable == 0:
        raise UndefinedMetricError("Kendall tau needs at least one strictly ordered truth pair")
    order = np.lexsort((scores, truth))
    s_sorted = scores[order]
    # After sorting by (truth asc, score asc), strict score descents can only
    # occur across strictly increasing truth values, so they are exactly the
    # discordant couples.
    discordant = _count_inversions(s_sorted)
    joint = np.stack([truth, scores], axis=1)
    _, joint_counts = np.unique(joint, axis=0, return_counts=True)
    joint_ties = int((joint_counts * (joint_counts - 1) // 2).sum())
    score_tied = _tie_couples(scores) - joint_ties  # score tied, truth distinct
    concordant = comparable - discordant - score_tied
    return 2.0 * concordant / comparable - 1.0


def predictive_auc(scores: ScoreMatrix, a: AdjacencyMatrix, sample_indices) -> float:
    """AUC of the scores against true edges over unobserved pairs.

    Equals the probability that a uniformly chosen unobserved true edge is
    scored above a uniformly chosen unobserved non-edge, ties counted 1/2.
    """
    s = _unobserved_pair_vectors(scores.entries, sample_indices)
    y = _unobserved_pair_vectors(a.entries, sample_indices)
    return auc_score(s, y > 0)


def predictive_kendall_tau(scores: ScoreMatrix, p: ProbabilityMatrix, sample_indices) -> float:
    """Strict-concordance Kendall's tau between scores and true probabilities
    over unobserved pairs.

    Couples with tied true probabilities are excluded from the denominator;
    couples the scores leave tied or invert count against concordance.
    """
    s = _unobserved_pair_vectors(scores.entries, sample_indices)
    t = _unobserved_pair_vectors(p.entries, sample_indices)
    return _strict_concordance_tau(t, s)


def masked_predictive_auc(scores: ScoreMatrix, a: AdjacencyMatrix, observed: np.ndarray) -> float:
    """AUC over unordered pairs unobserved under an arbitrary symmetric mask."""
    s = _masked_pair_vectors(scores.entries, observed)
    y = _masked_pair_vectors(a.entries, observed)
    return auc_score(s, y > 0)


def masked_predictive_kendall_tau(
    scores: ScoreMatrix, p: ProbabilityMatrix, observed: np.ndarray
) -> float:
    """Kendall's tau over unordered pairs unobserved under an arbitrary mask."""
    s = _masked_pair_vectors(scores.entries, observed)
    t = _masked_pair_vectors(p.entries, observed)
    return _strict_concordance_tau(t, s)


def evaluate(
    scores: ScoreMatrix,
    a: AdjacencyMatrix,
    sample_indices,
    p: Optional[ProbabilityMatrix] = None,
) -> EvalResult:
    """AUC (and tau when the true probability matrix is known), with metric
    values left absent where undefined."""
    y = _unobserved_pair_vectors(a.entries, sample_indices)
    n_pairs = int(y.size)
    n_positive = int((y > 0).sum())
    try:
        auc = predictive_auc(scores, a, sample_indices)
    except UndefinedMetricError:
        auc = None
    tau = None
    if p is not None:
        try:
            tau = predictive_kendall_tau(scores, p, sample_indices)
        except UndefinedMetricError:
            tau = None
    return EvalResult(auc=auc, kendall_tau=tau, n_pairs=n_pairs, n_positive=n_positive)


def predictive_auc_bruteforce(
    scores: ScoreMatrix, a: AdjacencyMatrix, sample_indices, tie_value: float = 0.5
) -> float:
    """O(M^2) double loop over (positive, negative) pair couples.

    ``tie_value`` is the credit a tied couple receives: 0.5 is the
    Mann-Whitney convention reported everywhere in this package, 0.0 is the
    strict-indicator convention.
    """
    idx = np.asarray(sample_indices, dtype=int)
    s = EgoSample(n_total=a.n_nodes, indices=idx, row_block=a.entries[idx, :])
    pos, neg = [], []
    for i, j in unobserved_pairs(s):
        (pos if a.entries[i, j] > 0 else neg).append(scores.entries[i, j])
    if not pos or not neg:
        raise UndefinedMetricError("AUC needs at least one positive and one negative pair")
    num = 0.0
    for sp in pos:
        for sn in neg:
            if sp > sn:
                num += 1.0
            elif sp == sn:
                num += tie_value
    return num / (len(pos) * len(neg))


def predictive_kendall_tau_bruteforce(
    scores: ScoreMatrix, p: ProbabilityMatrix, sample_indices
) -> float:
    """O(M^2) double loop evaluating the strict-concordance tau directly."""
    idx = np.asarray(sample_indices, dtype=int)
    s = EgoSample(n_total=p.n_nodes, indices=idx, row_block=p.entries[idx, :])
    pairs = list(unobserved_pairs(s))
    truth = [p.entries[i, j] for i, j in pairs]
    pred = [scores.entries[i, j] for i, j in pairs]
    comparable = 0
    concordant = 0
    for x in range(len(pairs)):
        for y in range(len(pairs)):
            if truth[x] > truth[y]:
                comparable += 1
                if pred[x] > pred[y]:
                    concordant += 1
    if comparable == 0:
        raise UndefinedMetricError("Kendall tau needs at least one strictly ordered truth pair")
    return 2.0 * concordant / comparable - 1.0
