"""A small end-to-end study: compute a batch, fit surrogates, check the CY bound.

Usage: python demos/desk_scale_study.py [n_systems] [out_dir]

Defaults to 60 random low-Milnor-number systems (about half a minute) and
writes everything under ./study.
"""
import sys
from pathlib import Path

import numpy as np

from cylink.learn import TrainConfig, cross_validate
from cylink.pipeline import (
    conjecture_check, dataset_arrays, emit_plots, ingest_external, load_records,
    predict_remaining, random_weight_systems, run_batch,
)
from cylink.symreg import GPConfig, evolve, paper_formula_h21

n = int(sys.argv[1]) if len(sys.argv) > 1 else 60
out = Path(sys.argv[2] if len(sys.argv) > 2 else "study")
data = Path(__file__).resolve().parents[1] / "tests" / "data"

# %% batch: resumable, so a second run returns immediately
weights = random_weight_systems(n, max_degree=60, max_mu=3000, seed=1)
manifest = run_batch(None, out / "batch", weights=weights, seed=0)
records = load_records(out / "batch" / "invariants.csv")
print(f"{manifest.computed} computed, exit code {manifest.exit_code}")

# %% surrogates for h21
X, y = dataset_arrays(records, "h21")
report = cross_validate(X, TrainConfig(epochs=200, seed=0), k=5, y=y)
print("MLP  ", report.summary())
ranked = evolve(X, GPConfig(population=300, generations=15, seed=0), y=y, top=3)
for s in ranked:
    print(f"GP   size {s.size:3d}  val MAE {s.val_mae:7.2f}  {s.expr.to_infix()}")
formula = np.array([paper_formula_h21(w) for w in X])
print(f"published formula MAE on this batch: {np.abs(formula - y).mean():.2f}")

# %% compare with the CY side (offline reconstruction shipped with the tests)
cy = ingest_external(data / "cy_h21_reconstructed.csv", "cy_hodge")
check = conjecture_check(records, cy)
print(f"h21 bound: {check.violations} violations, {check.equalities} equalities, "
      f"pmcc {check.pmcc:.3f}")
for row in predict_remaining(None, cy=cy):
    print(row["w"], "formula", row["h21_sr"], "CY", row["h21_cy"])

for path in emit_plots(records, out / "plots", cy=cy):
    print(path)
