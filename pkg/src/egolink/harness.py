"""Experiment orchestration: declarative specs, seeded replication, CSV.

A spec file (YAML) names a synthetic model or a dataset, a sampling scheme
with its rate grid, the methods to fit, and the replication count. Every
replication derives its random streams from
``SeedSequence([base_seed, cell_index, replication_index, stage])``, so
results are reproducible bit-for-bit, cells never share streams, and
dropping a method from the spec does not shift any other method's draws.

Result rows are emitted in (cell, replication, method) order regardless of
the worker count, so output CSVs are byte-identical across runs. Wall times
are recorded in memory for every fit but written only to the optional
timings file: timing is inherently nondeterministic and would break the
byte-identity contract of the main results CSV.
"""
from __future__ import annotations

import csv
import functools
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional

import numpy as np
import yaml

from .baselines import MaskedMatrix, cur_estimate, mc_nuclear_estimate, ns_estimate, usvt_estimate
from .errors import InvalidArgumentError, UndefinedMetricError
from .fileio import load_edge_list
from .generators import FAMILIES, ModelSpec, generate_probability, sample_adjacency
from .metrics import evaluate, masked_predictive_auc, masked_predictive_kendall_tau
from .network import AdjacencyMatrix, ProbabilityMatrix, sample_ego
from .subspace import SeConfig, se_estimate, select_rank

METHODS = ("se", "cur", "usvt", "mc", "ns")
IID_METHODS = ("usvt", "mc")
SCHEMES = ("egocentric", "iid")
RESULT_COLUMNS = (
    "model", "method", "rho", "degree", "replication",
    "seed", "auc", "kendall_tau", "selected_rank",
)
TIMING_COLUMNS = ("model", "method", "rho", "degree", "replication", "wall_time_ms")

_STAGE_GENERATE = 0
_STAGE_SAMPLE = 1
_STAGE_RANK = 2


@dataclass(frozen=True)
class ExperimentSpec:
    """One declarative experiment grid."""

    scheme: str
    rho_grid: tuple[float, ...]
    methods: tuple[str, ...]
    base_seed: int
    replications: int = 100
    model_family: Optional[str] = None
    n_nodes: Optional[int] = None
    degree_grid: tuple[float, ...] = ()
    dataset: Optional[str] = None
    rank_policy: str = "auto"
    fixed_rank: Optional[int] = None
    cv_holdout_rows: int = 30
    cv_rank_grid: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise InvalidArgumentError(f"sampling scheme must be one of {SCHEMES}")
        if not self.rho_grid:
            raise InvalidArgumentError("rho grid must be nonempty")
        for rho in self.rho_grid:
            if not 0.0 < rho < 1.0:
                raise InvalidArgumentError(f"sampling rates must lie in (0, 1), got {rho}")
        if not self.methods:
            raise InvalidArgumentError("methods must be nonempty")
        for m in self.methods:
            if m not in METHODS:
                raise InvalidArgumentError(f"unknown method {m!r}, expected subset of {METHODS}")
        if self.scheme == "iid":
            bad = [m for m in self.methods if m not in IID_METHODS]
            if bad:
                raise InvalidArgumentError(
                    f"methods {bad} need egocentric sampling; iid masks support {IID_METHODS}"
                )
        if self.replications < 1:
            raise InvalidArgumentError("replications must be at least 1")
        if (self.dataset is None) == (self.model_family is None):
            raise InvalidArgumentError("specify exactly one of a model family or a dataset path")
        if self.model_family is not None:
            if self.model_family not in FAMILIES:
                raise InvalidArgumentError(f"unknown model family {self.model_family!r}")
            if self.n_nodes is None:
                raise InvalidArgumentError("synthetic models need n_nodes")
            if not self.degree_grid:
                raise InvalidArgumentError("synthetic models need a nonempty degree_grid")
        if self.dataset is not None and self.degree_grid:
            raise InvalidArgumentError("datasets take no degree grid")
        if self.rank_policy not in ("auto", "fixed"):
            raise InvalidArgumentError("rank_policy must be 'auto' or 'fixed'")
        if self.rank_policy == "fixed" and (self.fixed_rank is None or self.fixed_rank < 1):
            raise InvalidArgumentError("fixed rank policy needs a positive rank")

    @property
    def model_label(self) -> str:
        if self.model_family is not None:
            return self.model_family
        return Path(self.dataset).stem

    def cells(self) -> list[tuple[float, Optional[float]]]:
        """(rho, degree) grid cells in deterministic order; degree is None
        for dataset runs."""
        if self.dataset is not None:
            return [(rho, None) for rho in self.rho_grid]
        return list(itertools.product(self.rho_grid, self.degree_grid))

    def se_config(self) -> SeConfig:
        return SeConfig(
            rank=self.fixed_rank if self.rank_policy == "fixed" else None,
            cv_holdout_rows=self.cv_holdout_rows,
            cv_rank_grid=self.cv_rank_grid,
        )


@dataclass(frozen=True)
class ResultRow:
    """One method fit on one replication of one grid cell."""

    model: str
    method: str
    rho: float
    degree: Optional[float]
    replication: int
    seed: int
    auc: Optional[float]
    kendall_tau: Optional[float]
    selected_rank: Optional[int]
    wall_time_ms: float


def load_experiment_spec(path) -> ExperimentSpec:
    """Read a YAML experiment spec; raises InvalidArgumentError on bad specs."""
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read spec file {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise InvalidArgumentError(f"malformed spec file {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise InvalidArgumentError("spec file must hold a mapping")
    return experiment_spec_from_dict(raw)


def experiment_spec_from_dict(raw: dict) -> ExperimentSpec:
    known = {
        "model", "sampling", "degree_grid", "methods",
        "replications", "base_seed", "rank_policy",
    }
    unknown = set(raw) - known
    if unknown:
        raise InvalidArgumentError(f"unknown spec keys: {sorted(unknown)}")
    model = raw.get("model")
    if not isinstance(model, dict):
        raise InvalidArgumentError("spec needs a 'model' mapping")
    sampling = raw.get("sampling")
    if not isinstance(sampling, dict):
        raise InvalidArgumentError("spec needs a 'sampling' mapping")
    policy = raw.get("rank_policy", {"kind": "auto"})
    if not isinstance(policy, dict) or "kind" not in policy:
        raise InvalidArgumentError("rank_policy must be a mapping with a 'kind'")
    grid = policy.get("rank_grid")
    try:
        return ExperimentSpec(
            scheme=sampling.get("scheme", "egocentric"),
            rho_grid=tuple(float(r) for r in sampling.get("rho_grid", ())),
            methods=tuple(raw.get("methods", ())),
            base_seed=int(raw.get("base_seed", 0)),
            replications=int(raw.get("replications", 100)),
            model_family=model.get("family"),
            n_nodes=int(model["n_nodes"]) if "n_nodes" in model else None,
            degree_grid=tuple(float(d) for d in raw.get("degree_grid", ())),
            dataset=model.get("dataset"),
            rank_policy=policy["kind"],
            fixed_rank=int(policy["rank"]) if "rank" in policy else None,
            cv_holdout_rows=int(policy.get("holdout_rows", 30)),
            cv_rank_grid=tuple(int(g) for g in grid) if grid is not None else None,
        )
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"malformed spec value: {exc}") from exc


@functools.lru_cache(maxsize=8)
def _cached_dataset(path: str) -> AdjacencyMatrix:
    return load_edge_list(path)[0]


def _stage_rng(base_seed: int, cell: int, rep: int, stage: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([base_seed, cell, rep, stage])))


def replication_seed(base_seed: int, cell: int, rep: int) -> int:
    """Stable integer identifying one replication's stream family."""
    return int(np.random.SeedSequence([base_seed, cell, rep]).generate_state(1)[0])


def _fit_method(
    method: str,
    ego,
    masked: MaskedMatrix,
    cfg: SeConfig,
    rank_rng: Optional[np.random.Generator],
):
    """Returns (scores, selected_rank)."""
    if method == "se":
        rank = cfg.rank
        if rank is None:
            rank = select_rank(ego, cfg, rank_rng)
        return se_estimate(ego, cfg.with_rank(rank)), rank
    if method == "cur":
        return cur_estimate(ego), None
    if method == "usvt":
        return usvt_estimate(masked), None
    if method == "mc":
        return mc_nuclear_estimate(masked), None
    if method == "ns":
        return ns_estimate(ego), None
    raise InvalidArgumentError(f"unknown method {method!r}")  # pragma: no cover


def _replication_rows(spec: ExperimentSpec, cell_index: int, rep_index: int) -> list[ResultRow]:
    rho, degree = spec.cells()[cell_index]
    p: Optional[ProbabilityMatrix] = None
    if spec.dataset is not None:
        a = _cached_dataset(spec.dataset)
    else:
        gen_rng = _stage_rng(spec.base_seed, cell_index, rep_index, _STAGE_GENERATE)
        p = generate_probability(
            ModelSpec(spec.model_family, spec.n_nodes, float(degree)), gen_rng
        )
        a = sample_adjacency(p, gen_rng)

    sample_rng = _stage_rng(spec.base_seed, cell_index, rep_index, _STAGE_SAMPLE)
    ego = None
    if spec.scheme == "egocentric":
        n = int(round(rho * a.n_nodes))
        if not 1 <= n <= a.n_nodes - 2:
            raise InvalidArgumentError(
                f"rho={rho} gives sample size {n}, outside [1, N-2] for N={a.n_nodes}"
            )
        ego = sample_ego(a, n, sample_rng)
        masked = MaskedMatrix.from_ego_sample(ego)
    else:
        masked = MaskedMatrix.from_iid_pairs(a, rho, sample_rng)

    seed = replication_seed(spec.base_seed, cell_index, rep_index)
    cfg = spec.se_config()
    rows = []
    for method in (m for m in METHODS if m in spec.methods):
        rank_rng = _stage_rng(spec.base_seed, cell_index, rep_index, _STAGE_RANK)
        start = time.perf_counter()
        scores, selected = _fit_method(method, ego, masked, cfg, rank_rng)
        elapsed_ms = (time.perf_counter() - start) * 1e3
        if spec.scheme == "egocentric":
            result = evaluate(scores, a, ego.indices, p)
            auc, tau = result.auc, result.kendall_tau
        else:
            try:
                auc = masked_predictive_auc(scores, a, masked.observed)
            except UndefinedMetricError:
                auc = None
            tau = None
            if p is not None:
                try:
                    tau = masked_predictive_kendall_tau(scores, p, masked.observed)
                except UndefinedMetricError:
                    tau = None
        rows.append(
            ResultRow(
                model=spec.model_label, method=method, rho=rho, degree=degree,
                replication=rep_index, seed=seed, auc=auc, kendall_tau=tau,
                selected_rank=selected, wall_time_ms=elapsed_ms,
            )
        )
    return rows


def _task(args: tuple) -> list[ResultRow]:
    spec, cell_index, rep_index = args
    return _replication_rows(spec, cell_index, rep_index)


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> Iterator[ResultRow]:
    """Run the full grid, yielding rows in deterministic (cell, replication,
    method) order regardless of ``workers``."""
    tasks = [
        (spec, cell_index, rep_index)
        for cell_index in range(len(spec.cells()))
        for rep_index in range(spec.replications)
    ]
    if workers <= 1:
        for t in tasks:
            yield from _task(t)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for rows in pool.map(_task, tasks):
            yield from rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_results_csv(rows: Iterable[ResultRow], fh, timings_fh=None) -> None:
    """Emit the deterministic results CSV, optionally mirroring wall times
    (which are nondeterministic) to a separate timings CSV."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    timing_writer = None
    if timings_fh is not None:
        timing_writer = csv.writer(timings_fh, lineterminator="\n")
        timing_writer.writerow(TIMING_COLUMNS)
    for row in rows:
        writer.writerow([
            row.model, row.method, _fmt(row.rho), _fmt(row.degree), row.replication,
            row.seed, _fmt(row.auc), _fmt(row.kendall_tau), _fmt(row.selected_rank),
        ])
        if timing_writer is not None:
            timing_writer.writerow([
                row.model, row.method, _fmt(row.rho), _fmt(row.degree),
                row.replication, _fmt(row.wall_time_ms),
            ])


def read_results_csv(path) -> list[ResultRow]:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            rows.append(
                ResultRow(
                    model=rec["model"],
                    method=rec["method"],
                    rho=float(rec["rho"]),
                    degree=float(rec["degree"]) if rec["degree"] else None,
                    replication=int(rec["replication"]),
                    seed=int(rec["seed"]),
                    auc=float(rec["auc"]) if rec["auc"] else None,
                    kendall_tau=float(rec["kendall_tau"]) if rec["kendall_tau"] else None,
                    selected_rank=int(rec["selected_rank"]) if rec["selected_rank"] else None,
                    wall_time_ms=0.0,
                )
            )
    return rows


@dataclass(frozen=True)
class SummaryRow:
    model: str
    method: str
    rho: float
    degree: Optional[float]
    count: int
    auc_mean: Optional[float]
    auc_se: Optional[float]
    tau_mean: Optional[float]
    tau_se: Optional[float]


def _mean_se(values: list[float]) -> tuple[Optional[float], Optional[float]]:
    if not values:
        return None, None
    mean = float(np.mean(values))
    if len(values) < 2:
        return mean, None
    se = float(np.std(values, ddof=1) / np.sqrt(len(values)))
    return mean, se


def summarize(rows: Iterable[ResultRow]) -> list[SummaryRow]:
    """Per-(model, method, rho, degree) means and standard errors, one plot
    curve per method."""
    rows = list(rows)
    if not rows:
        raise InvalidArgumentError("nothing to summarize")
    groups: dict[tuple, list[ResultRow]] = {}
    for row in rows:
        groups.setdefault((row.model, row.method, row.rho, row.degree), []).append(row)
    out = []
    for key in sorted(groups, key=lambda k: (k[0], k[1], k[2], -1.0 if k[3] is None else k[3])):
        members = groups[key]
        auc_mean, auc_se = _mean_se([r.auc for r in members if r.auc is not None])
        tau_mean, tau_se = _mean_se([r.kendall_tau for r in members if r.kendall_tau is not None])
        out.append(
            SummaryRow(
                model=key[0], method=key[1], rho=key[2], degree=key[3],
                count=len(members), auc_mean=auc_mean, auc_se=auc_se,
                tau_mean=tau_mean, tau_se=tau_se,
            )
        )
    return out


def write_summary_csv(summary: Iterable[SummaryRow], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(
        ("model", "method", "rho", "degree", "count",
         "auc_mean", "auc_se", "tau_mean", "tau_se")
    )
    for s in summary:
        writer.writerow([
            s.model, s.method, _fmt(s.rho), _fmt(s.degree), s.count,
            _fmt(s.auc_mean), _fmt(s.auc_se), _fmt(s.tau_mean), _fmt(s.tau_se),
        ])
