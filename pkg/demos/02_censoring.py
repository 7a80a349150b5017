"""The three censoring scenarios the benchmark can apply.

A censoring scenario deletes feature cells from a fully observed table
so that strategies can be compared at a known missingness level q.
Exactly round(q * n) cells per column go missing, never the response.

Run: python3 demos/02_censoring.py
"""
import numpy as np

from nantree import (
    CensorSpec,
    Dataset,
    FeatureColumn,
    ResponseColumn,
    apply_scenario,
    censor_im,
    censor_mcar,
)
from nantree.data import CATEGORICAL, NUMERIC, REAL

rng = np.random.default_rng(0)
n = 12

num = FeatureColumn("height", NUMERIC, np.round(rng.normal(170, 10, n), 1))
codes = rng.integers(0, 3, n).astype(np.int64)
cat = FeatureColumn("city", CATEGORICAL, codes, ("ayr", "bath", "cork"))
ds = Dataset((num, cat), ResponseColumn(REAL, np.round(rng.normal(size=n), 2)))


def show(tag, d):
    cells = []
    for col in d.columns:
        if col.kind == CATEGORICAL:
            cells.append(["-" if c < 0 else col.categories[c] for c in col.values])
        else:
            cells.append(["-" if np.isnan(v) else f"{v:g}" for v in col.values])
    print(f"{tag}:")
    print("  height:", " ".join(f"{c:>6}" for c in cells[0]))
    print("  city:  ", " ".join(f"{c:>6}" for c in cells[1]))


show("original", ds)
print()

# mcar: uniform random cells, one independent stream per column.
# Exact count: round(0.5 * 12) = 6 cells per column.
show("mcar q=0.5 (seed 1)", censor_mcar(ds, 0.5, seed=1))
show("mcar q=0.5 (seed 2)", censor_mcar(ds, 0.5, seed=2))
print()

# im: informative missingness, deterministic. Numeric columns lose their
# largest values; categorical columns lose whole categories, most
# frequent first. No seed: there is nothing random here.
show("im q=0.5", censor_im(ds, 0.5))
print()

# Scenarios wrap these for train/test pairs. mcar censors both sides
# (independent streams); mcar_test leaves training data untouched and
# censors only the test side; im censors both deterministically.
train_half = ds.subset(np.arange(0, 6))
test_half = ds.subset(np.arange(6, 12))
tr, te = apply_scenario(train_half, test_half, CensorSpec("mcar_test", 0.5, seed=3))
print("mcar_test keeps the training half untouched:", tr is train_half)
print("while the test half lost",
      int((~te.columns[0].present_mask()).sum()), "height cells of", te.n_rows)
