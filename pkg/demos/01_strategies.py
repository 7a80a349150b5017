"""Five ways to split when cells are missing.

One tiny table, five trees. The feature x carries the signal but a third
of its cells are gone; z is a noisy stand-in that is always observed.
Each strategy answers the same question differently: where do rows
without an x go?

Run: python3 demos/01_strategies.py
"""
import numpy as np

from nantree import (
    Dataset,
    FeatureColumn,
    ResponseColumn,
    Strategy,
    TrainConfig,
    predict_row,
    render,
    train,
)
from nantree.data import NUMERIC, REAL

rng = np.random.default_rng(42)
n = 90

x = rng.random(n)
z = x + rng.normal(0.0, 0.15, n)          # correlated proxy, never missing
y = np.where(x > 0.5, 10.0, 0.0) + rng.normal(0.0, 0.5, n)
x[rng.random(n) < 0.33] = np.nan           # a third of x goes missing

ds = Dataset(
    (FeatureColumn("x", NUMERIC, x), FeatureColumn("z", NUMERIC, z)),
    ResponseColumn(REAL, y),
)

probe = [float("nan"), 0.2]  # a row that hides x; z hints "low"

for strategy in Strategy:
    tree = train(ds, TrainConfig(strategy, max_depth=2, min_samples=5))
    print(f"=== {strategy.value} " + "=" * (40 - len(strategy.value)))
    print(render(tree))
    print(f"prediction for x=missing, z=0.2: {predict_row(tree, probe):.3f}")
    print()

print("""What to look for:
- majority lumps every missing row onto the bigger child, picked by count.
- mia also sends them wholesale, but to whichever side trains cheaper.
- fc splits each missing row fractionally (see missing->both weights);
  its prediction above is a weighted blend of both leaves.
- trinary gives missing rows a third child, re-split on the remaining
  features at the same depth (the 'missing:' lines); the probe row gets
  routed by z instead of being lumped.
- trinary_mia chooses per node between the mia and trinary treatments.""")
