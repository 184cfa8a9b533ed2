"""Experiment orchestration: dataset runs, sweeps, metrics, serialization."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .balance import (
    BalancedState,
    FrustrationReport,
    OracleLimitError,
    current_balance_exact,
    max_balanced_heuristic,
)
from .graph import (
    GraphError,
    SignedGraph,
    induced_subgraph,
    k_core,
    largest_connected_component,
    load_edge_list,
)
from .optimize import (
    brute_force_opt,
    cascade_state,
    delta_exact_excluding,
    gamma_bounds,
    greedy,
    min_cep,
    peripheral_edges,
    random_baseline,
    randomized_greedy,
)
from .reports import DeletedEdge, SolutionReport
from .spectral import iterative_spectral, spectral_top

ALGORITHMS = ("greedy", "rg", "min-cep", "random", "spec-top", "isa")

CSV_HEADER = "dataset,selector,algorithm,b,n,m,delta0,delta_final,ib_pct,seconds,seed,gamma_II"


def compute_ib(delta_before: int, delta_after: int, n: int) -> float | None:
    """Percentage of the initially unbalanced nodes absorbed by the run.

    Undefined (None) when the subgraph started fully balanced.
    """
    if n < delta_before:
        raise ValueError(f"balance {delta_before} exceeds subgraph size {n}")
    if n == delta_before:
        return None
    return (delta_after - delta_before) / (n - delta_before) * 100.0


@dataclass(frozen=True)
class ExperimentConfig:
    """One optimization run: dataset, target subgraph, algorithm, budget."""

    dataset: str
    selector: str = "lcc"  # "lcc" or "kcore"
    k: int | None = None
    algorithm: str = "greedy"
    budget: int = 10
    candidates: str = "peripheral"  # "peripheral" or "all"
    seed: int | None = None
    sign_from_weight: bool = True
    exact_initial: bool = False
    oracle: bool = False
    oracle_max_nodes: int = 16
    oracle_max_subsets: int = 200_000
    timing: bool = True

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.selector not in ("lcc", "kcore"):
            raise ValueError(f"unknown selector {self.selector!r}")
        if self.selector == "kcore" and (self.k is None or self.k < 1):
            raise ValueError("kcore selector needs k >= 1")
        if self.candidates not in ("peripheral", "all"):
            raise ValueError(f"unknown candidate policy {self.candidates!r}")
        if self.budget < 0:
            raise ValueError("budget must be >= 0")
        if self.algorithm in ("rg", "random") and self.seed is None:
            raise ValueError(f"{self.algorithm} needs a seed")


@dataclass
class RunRecord:
    """Everything one experiment produced, serializable and replayable."""

    config: ExperimentConfig
    n: int
    m: int
    delta_initial: int
    delta_final: int
    ib_pct: float | None
    already_balanced: bool
    delta_source: str  # "heuristic" or "exact"
    seconds: float
    solution: SolutionReport
    delta_opt: int | None = None
    gamma_i: float | None = None
    oracle_note: str = ""

    @property
    def gamma_ii(self) -> float:
        return gamma_bounds(max(self.config.budget, 1), self.delta_final).gamma_ii

    def csv_row(self) -> str:
        ib = "" if self.ib_pct is None else f"{self.ib_pct:.6f}"
        seed = "" if self.config.seed is None else str(self.config.seed)
        seconds = f"{self.seconds:.3f}" if self.config.timing else "0.000"
        return (
            f"{self.config.dataset},{_selector_label(self.config)},"
            f"{self.config.algorithm},{self.config.budget},{self.n},{self.m},"
            f"{self.delta_initial},{self.delta_final},{ib},{seconds},{seed},"
            f"{self.gamma_ii:.8f}"
        )

    def to_dict(self) -> dict:
        return {
            "config": {
                "dataset": self.config.dataset,
                "selector": _selector_label(self.config),
                "algorithm": self.config.algorithm,
                "budget": self.config.budget,
                "candidates": self.config.candidates,
                "seed": self.config.seed,
                "exact_initial": self.config.exact_initial,
            },
            "n": self.n,
            "m": self.m,
            "delta_initial": self.delta_initial,
            "delta_final": self.delta_final,
            "ib_pct": self.ib_pct,
            "already_balanced": self.already_balanced,
            "delta_source": self.delta_source,
            "delta_opt": self.delta_opt,
            "gamma_i": self.gamma_i,
            "gamma_ii": self.gamma_ii,
            "oracle_note": self.oracle_note,
            "solution": self.solution.to_dict(timing=self.config.timing),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _selector_label(cfg: ExperimentConfig) -> str:
    return "lcc" if cfg.selector == "lcc" else f"kcore{cfg.k}"


def records_to_csv(records: list[RunRecord]) -> str:
    return "\n".join([CSV_HEADER] + [r.csv_row() for r in records]) + "\n"


def select_target(g: SignedGraph, cfg: ExperimentConfig) -> SignedGraph:
    """Cut the target subgraph out of the full graph.

    The k-core can be disconnected, so its largest component is taken to
    keep the balance machinery on connected input.
    """
    if cfg.selector == "kcore":
        core_nodes = k_core(g, cfg.k)
        g, _ = induced_subgraph(g, core_nodes)
    lcc = largest_connected_component(g)
    target, _ = induced_subgraph(g, lcc)
    return target


def _spectral_replay(
    g: SignedGraph, state: BalancedState, report: SolutionReport
) -> SolutionReport:
    """Fill the balance trajectory of a spectral run by replaying its
    deletions through the maintained-state cascade."""
    report.delta_initial = state.balanced_count
    deleted: list[int] = []
    trajectory = []
    gains = []
    prev = state.balanced_count
    for d in report.deleted:
        deleted.append(d.edge_id)
        after, _ = cascade_state(g, state, deleted)
        trajectory.append(after.balanced_count)
        gains.append(after.balanced_count - prev)
        prev = after.balanced_count
    report.delta_trajectory = trajectory
    report.gains = gains
    return report


def run_algorithm(
    g: SignedGraph, state: BalancedState, cfg: ExperimentConfig
) -> SolutionReport:
    """Dispatch one optimizer / heuristic run on a prepared target graph."""
    if cfg.candidates == "peripheral":
        pool = peripheral_edges(g, state)
    else:
        pool = list(range(g.m))
    b = cfg.budget
    if cfg.algorithm == "greedy":
        return greedy(g, state, pool, b)
    if cfg.algorithm == "rg":
        return randomized_greedy(g, state, pool, b, cfg.seed)
    if cfg.algorithm == "min-cep":
        return min_cep(g, state, pool, b)
    if cfg.algorithm == "random":
        return random_baseline(g, state, pool, b, cfg.seed)
    if cfg.algorithm == "spec-top":
        start = time.perf_counter()
        chosen = spectral_top(g, pool, min(b, len(pool)), seed=cfg.seed or 0)
        report = SolutionReport(algorithm="spec-top", budget=b, seed=cfg.seed)
        for eid in chosen:
            u, v, s = g.edge(eid)
            report.deleted.append(DeletedEdge(eid, u, v, s))
        report = _spectral_replay(g, state, report)
        report.elapsed_seconds = time.perf_counter() - start
        return report
    # isa
    report = iterative_spectral(g, pool, min(b, len(pool)), seed=cfg.seed or 0)
    report.budget = b
    return _spectral_replay(g, state, report)


def run_experiment_on_graph(g: SignedGraph, cfg: ExperimentConfig) -> RunRecord:
    """Run one experiment on an in-memory graph (no file loading)."""
    target = select_target(g, cfg)
    t0 = time.perf_counter()
    if cfg.exact_initial:
        state = current_balance_exact(target, max_nodes=cfg.oracle_max_nodes)
        source = "exact"
    else:
        state = max_balanced_heuristic(target)
        source = "heuristic"
    report = run_algorithm(target, state, cfg)
    seconds = time.perf_counter() - t0

    delta0 = report.delta_initial
    delta_final = report.delta_final
    ib = compute_ib(delta0, delta_final, target.n)
    record = RunRecord(
        config=cfg,
        n=target.n,
        m=target.m,
        delta_initial=delta0,
        delta_final=delta_final,
        ib_pct=ib,
        already_balanced=ib is None,
        delta_source=source,
        seconds=seconds if cfg.timing else 0.0,
        solution=report,
    )
    if cfg.oracle:
        pool = (
            peripheral_edges(target, state)
            if cfg.candidates == "peripheral"
            else list(range(target.m))
        )
        try:
            opt_set, delta_star = brute_force_opt(
                target,
                state,
                pool,
                cfg.budget,
                max_subsets=cfg.oracle_max_subsets,
                max_nodes=cfg.oracle_max_nodes,
            )
            record.delta_opt = delta_star
            # psi: summed marginals of the optimal set over the chosen set
            chosen = set(report.deleted_edge_ids())
            f_chosen = delta_exact_excluding(target, chosen, cfg.oracle_max_nodes)
            psi = sum(
                delta_exact_excluding(target, chosen | {e}, cfg.oracle_max_nodes)
                - f_chosen
                for e in opt_set
                if e not in chosen
            )
            bound = gamma_bounds(
                max(cfg.budget, 1),
                delta_final,
                delta_opt=delta_star,
                psi=psi if psi >= 1 else None,
            )
            record.gamma_i = bound.gamma_i
            record.solution.bound = bound
        except OracleLimitError as exc:
            record.oracle_note = f"oracle skipped: {exc}"
    return record


def run_experiment(cfg: ExperimentConfig) -> RunRecord:
    """Load the dataset file and run one configured experiment."""
    path = Path(cfg.dataset)
    if not path.exists():
        raise GraphError(f"dataset not found: {path}")
    with path.open("rb") as fh:
        g, _ = load_edge_list(fh, sign_from_weight=cfg.sign_from_weight)
    return run_experiment_on_graph(g, cfg)


def sweep(
    cfg: ExperimentConfig,
    budgets: list[int] | None = None,
    kcores: list[int] | None = None,
) -> tuple[list[RunRecord], list[str]]:
    """Cartesian runs over budgets and/or k values; errors don't stop the
    sweep. Returns (records, error strings)."""
    budgets = budgets if budgets is not None else [cfg.budget]
    records: list[RunRecord] = []
    errors: list[str] = []
    cells: list[ExperimentConfig] = []
    if kcores:
        for k in kcores:
            for b in budgets:
                cells.append(replace(cfg, selector="kcore", k=k, budget=b))
    else:
        for b in budgets:
            cells.append(replace(cfg, budget=b))
    for cell in cells:
        try:
            records.append(run_experiment(cell))
        except Exception as exc:  # noqa: BLE001 - cell errors are results
            errors.append(f"{_selector_label(cell)} b={cell.budget}: {exc}")
    return records, errors


# -- small text serializers for the state and frustration types ---------------


def state_to_text(g: SignedGraph, state: BalancedState) -> str:
    """Two columns: node label and side (1, 2, or 0 for outside)."""
    lines = [f"{g.label_of(u)} {int(state.labels[u])}" for u in range(g.n)]
    return "\n".join(lines) + "\n"


def state_from_text(g: SignedGraph, text: str) -> BalancedState:
    label_to_id = {g.label_of(u): u for u in range(g.n)}
    labels = np.zeros(g.n, dtype=np.int8)
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            name, side = line.split()
            labels[label_to_id[name]] = int(side)
        except (ValueError, KeyError) as exc:
            raise GraphError(f"bad state line {lineno}: {line!r}") from exc
    return BalancedState(labels)


def frustration_to_json(report: FrustrationReport) -> str:
    return json.dumps(
        {
            "nu": report.nu,
            "epsilon": report.epsilon,
            "witness_nodes": list(report.witness_nodes),
            "witness_edges": list(report.witness_edges),
        },
        sort_keys=True,
        indent=2,
    )
