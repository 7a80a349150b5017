"""Censoring benchmark: depth tuning, cross-validated sweeps, CSV output.

The protocol per dataset: fix a fold assignment, tune the tree depth once
on the fully observed data, compute the full-data test loss L0 per
strategy and fold, then for each censoring level q train on the censored
training folds and evaluate on the (possibly censored) test folds. The
reported excess loss is L_q / L0 - 1, so 0 means "as good as with
complete data". Everything except wall time is deterministic in the
config seed.
"""
from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass

import numpy as np

from .censor import SCENARIOS, CensorSpec, apply_scenario
from .data import Dataset, FoldAssignment, ValidationError, stratified_kfold
from .loss import loss_for
from .split import Strategy
from .tree import TrainConfig, Tree, evaluate, train

CSV_HEADER = ("dataset", "strategy", "scenario", "q", "fold", "loss", "excess_loss", "depth", "wall_ms")

#: fold index used for the per-(strategy, q) aggregate rows
AGGREGATE_FOLD = -1

ALL_STRATEGIES = (
    Strategy.MAJORITY,
    Strategy.MIA,
    Strategy.FC,
    Strategy.TRINARY,
    Strategy.TRINARY_MIA,
)


def default_q_grid() -> tuple[float, ...]:
    return tuple(round(0.1 * i, 10) for i in range(10))


@dataclass(frozen=True)
class ExperimentConfig:
    datasets: tuple[tuple[str, Dataset], ...]
    strategies: tuple[Strategy, ...] = ALL_STRATEGIES
    scenario: str = "mcar"
    q_grid: tuple[float, ...] = default_q_grid()
    folds: int = 10
    depth_grid_max: int = 5
    min_samples: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ValidationError(f"unknown scenario {self.scenario!r}")
        if not self.datasets:
            raise ValidationError("no datasets configured")
        if self.depth_grid_max < 1:
            raise ValidationError("depth grid must reach at least 1")
        for q in self.q_grid:
            if not 0.0 <= q <= 0.9:
                raise ValidationError("censoring levels must lie in [0, 0.9]")


@dataclass(frozen=True)
class ExperimentRecord:
    dataset: str
    strategy: str
    scenario: str
    q: float
    fold: int
    loss: float
    excess_loss: float
    depth: int
    wall_ms: float
    misclass: float | None = None  # in-memory diagnostic, not part of the CSV


def _fold_seed(seed: int, ds_index: int) -> int:
    return int(np.random.SeedSequence([seed, 100, ds_index]).generate_state(1)[0])


def _task_seed(seed: int, ds_index: int, scenario: str, q: float, fold: int) -> int:
    scen_code = SCENARIOS.index(scenario)
    return int(
        np.random.SeedSequence(
            [seed, 200, ds_index, scen_code, int(round(q * 1000)), fold]
        ).generate_state(1)[0]
    )


def _folds_for(ds: Dataset, cfg: ExperimentConfig, ds_index: int) -> FoldAssignment:
    return stratified_kfold(ds, cfg.folds, _fold_seed(cfg.seed, ds_index))


def tune_depth(ds: Dataset, cfg: ExperimentConfig, ds_index: int = 0) -> int:
    """Pick a tree depth by k-fold cross-validation on the full data.

    Depths 1..depth_grid_max are scored with the majority strategy (all
    strategies coincide on complete data); the smallest depth wins ties.
    """
    folds = _folds_for(ds, cfg, ds_index)
    kind = loss_for(ds)
    best_depth, best_loss = None, None
    for depth in range(1, cfg.depth_grid_max + 1):
        total = 0.0
        for f in range(cfg.folds):
            train_ds = ds.subset(folds.train_rows(f))
            test_ds = ds.subset(folds.test_rows(f))
            tree = train(train_ds, TrainConfig(Strategy.MAJORITY, kind, depth, cfg.min_samples))
            loss, _ = evaluate(tree, test_ds)
            total += loss
        if best_loss is None or total < best_loss:
            best_depth, best_loss = depth, total
    return best_depth


def _excess(loss: float, base: float) -> float:
    if base == 0.0:
        return 0.0 if loss == 0.0 else math.inf
    return loss / base - 1.0


def _run_task(train_ds: Dataset, test_ds: Dataset, strategy: Strategy, depth: int, min_samples: int):
    kind = loss_for(train_ds)
    t0 = time.perf_counter()
    tree = train(train_ds, TrainConfig(strategy, kind, depth, min_samples))
    loss, misclass = evaluate(tree, test_ds)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    return loss, misclass, wall_ms


def run_experiment(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """Run the full sweep and return per-fold records plus per-(strategy, q)
    aggregates (fold = -1, losses summed over folds)."""
    records: list[ExperimentRecord] = []
    for ds_index, (name, ds) in enumerate(cfg.datasets):
        folds = _folds_for(ds, cfg, ds_index)
        depth = tune_depth(ds, cfg, ds_index)
        pairs = [
            (ds.subset(folds.train_rows(f)), ds.subset(folds.test_rows(f)))
            for f in range(cfg.folds)
        ]
        test_sizes = [p[1].n_rows for p in pairs]

        # full-data reference: the q = 0 task (censoring at q = 0 is the
        # identity, so this is the uncensored pipeline)
        base: dict[Strategy, list[tuple[float, float | None, float]]] = {}
        for strategy in cfg.strategies:
            runs = []
            for f, (tr, te) in enumerate(pairs):
                spec = CensorSpec(cfg.scenario, 0.0, _task_seed(cfg.seed, ds_index, cfg.scenario, 0.0, f))
                ctr, cte = apply_scenario(tr, te, spec)
                runs.append(_run_task(ctr, cte, strategy, depth, cfg.min_samples))
            base[strategy] = runs

        for q in cfg.q_grid:
            for strategy in cfg.strategies:
                fold_runs = []
                for f, (tr, te) in enumerate(pairs):
                    if q == 0.0:
                        loss, misclass, wall = base[strategy][f]
                    else:
                        spec = CensorSpec(cfg.scenario, q, _task_seed(cfg.seed, ds_index, cfg.scenario, q, f))
                        ctr, cte = apply_scenario(tr, te, spec)
                        loss, misclass, wall = _run_task(ctr, cte, strategy, depth, cfg.min_samples)
                    fold_runs.append((loss, misclass, wall))
                    records.append(ExperimentRecord(
                        dataset=name,
                        strategy=strategy.value,
                        scenario=cfg.scenario,
                        q=q,
                        fold=f,
                        loss=loss,
                        excess_loss=_excess(loss, base[strategy][f][0]),
                        depth=depth,
                        wall_ms=wall,
                        misclass=misclass,
                    ))
                total = sum(r[0] for r in fold_runs)
                total_base = sum(r[0] for r in base[strategy])
                if fold_runs[0][1] is None:
                    agg_misclass = None
                else:
                    agg_misclass = float(
                        sum(r[1] * n for r, n in zip(fold_runs, test_sizes)) / sum(test_sizes)
                    )
                records.append(ExperimentRecord(
                    dataset=name,
                    strategy=strategy.value,
                    scenario=cfg.scenario,
                    q=q,
                    fold=AGGREGATE_FOLD,
                    loss=total,
                    excess_loss=_excess(total, total_base),
                    depth=depth,
                    wall_ms=sum(r[2] for r in fold_runs),
                    misclass=agg_misclass,
                ))
    records.sort(key=lambda r: (r.dataset, r.strategy, r.q, r.fold))
    return records


def emit_csv(records: list[ExperimentRecord], path: str) -> None:
    """Write records with the fixed header; floats use their shortest
    round-tripping representation, so identical runs give identical bytes
    (wall_ms aside)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow([
                r.dataset, r.strategy, r.scenario,
                repr(float(r.q)), r.fold,
                repr(float(r.loss)), repr(float(r.excess_loss)),
                r.depth, repr(float(r.wall_ms)),
            ])


def read_records(path: str) -> list[ExperimentRecord]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValidationError(f"unexpected header {header!r}")
        out = []
        for row in reader:
            out.append(ExperimentRecord(
                dataset=row[0], strategy=row[1], scenario=row[2],
                q=float(row[3]), fold=int(row[4]),
                loss=float(row[5]), excess_loss=float(row[6]),
                depth=int(row[7]), wall_ms=float(row[8]),
            ))
        return out


def aggregate_records(records: list[ExperimentRecord]) -> list[ExperimentRecord]:
    """Just the fold = -1 rows."""
    return [r for r in records if r.fold == AGGREGATE_FOLD]


def mean_excess_by_strategy(records: list[ExperimentRecord], q: float) -> dict[str, float]:
    """Unweighted mean of aggregate excess losses across datasets at one q."""
    per_strategy: dict[str, list[float]] = {}
    for r in aggregate_records(records):
        if r.q == q:
            per_strategy.setdefault(r.strategy, []).append(r.excess_loss)
    return {s: float(np.mean(v)) for s, v in per_strategy.items()}
