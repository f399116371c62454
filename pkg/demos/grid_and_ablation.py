"""
Curvature/filtration grid search and the filtration ablation
=============================================================

The experiment helpers return plain dicts that serialise to JSON or CSV.
The same runs are available from the shell as ``hypefcm grid`` and
``hypefcm ablation``.
"""

import sys
import tempfile
from pathlib import Path

from hypefcm.data import gen_blobs
from hypefcm.experiments import ExperimentSpec, cmd_ablation, cmd_grid, write_record

spec = ExperimentSpec("builtin:iris", repeats=5, timing=False)

# A coarse (alpha, k) grid. Every cell reuses seeds 0..4, so cells are paired.
grid = cmd_grid(spec, alphas=[0.1, 0.5, 1.0, 10.0, 100.0], ks=[1, 5, 10])
print(f"{'alpha':>7}{'k':>4}{'ARI':>8}{'NMI':>8}")
for cell in grid["cells"]:
    print(f"{cell['alpha']:>7g}{cell['k']:>4}{cell['ari_mean']:>8.3f}{cell['nmi_mean']:>8.3f}")
best = max(grid["cells"], key=lambda c: c["nmi_mean"])
print(f"selected by NMI: alpha={best['alpha']:g}, k={best['k']}")

# Ablation on overlapping blobs. The unfiltered arm never looks at k, so its
# rows repeat exactly.
d = gen_blobs(300, 4, separation=4.0, seed=7)
abl = cmd_ablation(ExperimentSpec("blobs", repeats=5, timing=False), ks=[1, 5, 20, 80], dataset=d)
print(f"\n{'k':>4} {'arm':<11}{'ARI':>8}{'NMI':>8}")
for row in abl["rows"]:
    print(f"{row['k']:>4} {row['arm']:<11}{row['ari_mean']:>8.3f}{row['nmi_mean']:>8.3f}")

# Records go to disk as JSON (full detail) or CSV (one row per cell).
out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
write_record(grid, out / "iris_grid.json")
write_record(grid, out / "iris_grid.csv", fmt="csv")
print("\nwrote", out / "iris_grid.json", "and", out / "iris_grid.csv")
