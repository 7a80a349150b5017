"""Deterministic cell censoring for the benchmark scenarios.

Three scenarios: ``mcar`` censors train and test uniformly at random
(independent streams), ``mcar_test`` leaves training data untouched and
censors only the test side, and ``im`` (informative missingness) censors
deterministically from the top of each feature. Responses are never
censored. Every censored feature column loses exactly round(q * n_rows)
cells (given a fully observed input column).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import CATEGORICAL, Dataset, FeatureColumn, ValidationError

MCAR = "mcar"
MCAR_TEST = "mcar_test"
IM = "im"

SCENARIOS = (MCAR, MCAR_TEST, IM)


@dataclass(frozen=True)
class CensorSpec:
    scenario: str
    q: float
    seed: int = 0

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ValidationError(f"unknown scenario {self.scenario!r}")
        if not 0.0 <= self.q <= 0.9:
            raise ValidationError("q must lie in [0, 0.9]")


def _n_censor(q: float, n: int) -> int:
    return int(round(q * n))


def _blank(column: FeatureColumn, idx: np.ndarray) -> FeatureColumn:
    values = column.values.copy()
    if column.kind == CATEGORICAL:
        values[idx] = -1
    else:
        values[idx] = np.nan
    return FeatureColumn(column.name, column.kind, values, column.categories)


def censor_mcar(ds: Dataset, q: float, seed: int) -> Dataset:
    """Censor exactly round(q*n) present cells per feature, uniformly at
    random, with an independent stream per (seed, column index)."""
    if not 0.0 <= q <= 1.0:
        raise ValidationError("q must lie in [0, 1]")
    columns = []
    for j, col in enumerate(ds.columns):
        m = _n_censor(q, ds.n_rows)
        present = np.flatnonzero(col.present_mask())
        m = min(m, present.size)
        if m == 0:
            columns.append(col)
            continue
        rng = np.random.default_rng([seed, j])
        chosen = rng.choice(present, size=m, replace=False)
        columns.append(_blank(col, chosen))
    return Dataset(tuple(columns), ds.response)


def _censor_im_numeric(col: FeatureColumn, m: int) -> FeatureColumn:
    present = np.flatnonzero(col.present_mask())
    m = min(m, present.size)
    if m == 0:
        return col
    values = col.values[present]
    # top m values by rank; ties broken by row index (lower index first)
    order = np.lexsort((present, -values))
    return _blank(col, present[order[:m]])


def _censor_im_categorical(col: FeatureColumn, m: int) -> FeatureColumn:
    present = np.flatnonzero(col.present_mask())
    m = min(m, present.size)
    if m == 0:
        return col
    codes = col.values[present]
    counts = np.bincount(codes, minlength=len(col.categories))
    observed = np.flatnonzero(counts > 0)
    # whole categories in descending frequency (ties by name), the last one
    # partially, lowest row indices first
    names = np.array(col.categories, dtype=object)[observed]
    order = observed[np.lexsort((names, -counts[observed]))]
    chosen: list[np.ndarray] = []
    remaining = m
    for cat in order:
        rows_of_cat = present[codes == cat]  # ascending row index
        if remaining >= rows_of_cat.size:
            chosen.append(rows_of_cat)
            remaining -= rows_of_cat.size
        else:
            chosen.append(rows_of_cat[:remaining])
            remaining = 0
        if remaining == 0:
            break
    return _blank(col, np.concatenate(chosen))


def censor_im(ds: Dataset, q: float) -> Dataset:
    """Informative censoring: the largest values (numeric) or the most
    frequent categories (categorical) go missing first. Deterministic."""
    if not 0.0 <= q <= 1.0:
        raise ValidationError("q must lie in [0, 1]")
    columns = []
    for col in ds.columns:
        m = _n_censor(q, ds.n_rows)
        if col.kind == CATEGORICAL:
            columns.append(_censor_im_categorical(col, m))
        else:
            columns.append(_censor_im_numeric(col, m))
    return Dataset(tuple(columns), ds.response)


def _derive_seed(seed: int, tag: int) -> int:
    return int(np.random.SeedSequence([seed, tag]).generate_state(1)[0])


def apply_scenario(train: Dataset, test: Dataset, spec: CensorSpec) -> tuple[Dataset, Dataset]:
    """Censor a train/test pair according to the scenario."""
    if spec.scenario == MCAR:
        return (
            censor_mcar(train, spec.q, _derive_seed(spec.seed, 0)),
            censor_mcar(test, spec.q, _derive_seed(spec.seed, 1)),
        )
    if spec.scenario == MCAR_TEST:
        return train, censor_mcar(test, spec.q, _derive_seed(spec.seed, 1))
    return censor_im(train, spec.q), censor_im(test, spec.q)
