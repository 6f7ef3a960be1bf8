"""File formats: edge lists, dense matrix CSV, and ego-sample files.

Edge list: one edge per line, two whitespace-separated node labels;
``#``-prefixed lines are comments; duplicate and reversed edges are
deduplicated, directed inputs symmetrized, self-loops dropped. Labels may
be arbitrary strings and are mapped to 0-based contiguous ids in first-seen
order.

Matrix CSV: a one-line header holding N, then N comma-separated rows.

Ego-sample file: header line ``N,n``, a line of comma-separated sampled
indices, then the n x N row block in CSV.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import IngestionError
from .network import AdjacencyMatrix, EgoSample

FLOAT_FMT = "%.17g"


def load_edge_list(path) -> tuple[AdjacencyMatrix, list[str]]:
    """Parse an edge-list file into an adjacency matrix plus the label map.

    Returns the matrix and the list of labels, indexed by node id. Malformed
    lines raise :class:`IngestionError` carrying the 1-based line number.
    """
    path = Path(path)
    labels: dict[str, int] = {}
    edges: set[tuple[int, int]] = set()
    try:
        text = path.read_text()
    except OSError as exc:
        raise IngestionError(f"cannot read edge list: {exc}", path=str(path)) from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise IngestionError(
                f"expected two whitespace-separated labels, got {len(parts)}",
                path=str(path),
                line_number=lineno,
            )
        ids = []
        for token in parts:
            if token not in labels:
                labels[token] = len(labels)
            ids.append(labels[token])
        u, v = ids
        if u == v:
            continue  # self-loop
        edges.add((min(u, v), max(u, v)))
    if not edges:
        raise IngestionError("no edges found", path=str(path))
    n = len(labels)
    a = np.zeros((n, n))
    rows, cols = zip(*edges)
    a[rows, cols] = 1.0
    a[cols, rows] = 1.0
    return AdjacencyMatrix(a), [label for label, _ in sorted(labels.items(), key=lambda kv: kv[1])]


def save_edge_list(a: AdjacencyMatrix, path, labels: "list[str] | None" = None) -> None:
    """Write the upper triangle of ``a`` as an edge list (ids or labels)."""
    path = Path(path)
    if labels is None:
        labels = [str(i) for i in range(a.n_nodes)]
    rows, cols = np.nonzero(np.triu(a.entries, k=1))
    with path.open("w") as fh:
        fh.write(f"# undirected edge list, N={a.n_nodes}\n")
        for i, j in zip(rows.tolist(), cols.tolist()):
            fh.write(f"{labels[i]} {labels[j]}\n")


def save_matrix_csv(m: np.ndarray, path) -> None:
    """Dense CSV with a one-line header holding N."""
    m = np.asarray(m, dtype=float)
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"{m.shape[0]}\n")
        np.savetxt(fh, m, fmt=FLOAT_FMT, delimiter=",")


def load_matrix_csv(path) -> np.ndarray:
    path = Path(path)
    try:
        with path.open() as fh:
            header = fh.readline().strip()
            n = int(header)
            m = np.loadtxt(fh, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise IngestionError(f"cannot parse matrix CSV: {exc}", path=str(path)) from exc
    if m.shape != (n, n):
        raise IngestionError(
            f"header says {n}x{n} but body has shape {m.shape}", path=str(path)
        )
    return m


def save_ego_sample(s: EgoSample, path) -> None:
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"{s.n_total},{s.n_sampled}\n")
        fh.write(",".join(str(int(i)) for i in s.indices) + "\n")
        np.savetxt(fh, s.row_block, fmt=FLOAT_FMT, delimiter=",")


def load_ego_sample(path) -> EgoSample:
    path = Path(path)
    try:
        with path.open() as fh:
            n_total, n = (int(tok) for tok in fh.readline().strip().split(","))
            indices = np.array([int(tok) for tok in fh.readline().strip().split(",")])
            rows = np.loadtxt(fh, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise IngestionError(f"cannot parse ego sample: {exc}", path=str(path)) from exc
    if indices.size != n or rows.shape != (n, n_total):
        raise IngestionError("ego sample header inconsistent with body", path=str(path))
    return EgoSample(n_total=n_total, indices=indices, row_block=rows)
