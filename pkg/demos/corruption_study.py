"""
Stress-testing metrics with controlled corruption
=================================================

Deleting a known fraction of rows or columns from clean synthetic tables
gives dense ground truth for how a metric *should* respond. Two checks
fall out. A metric that claims to measure recovered content should not
care which half of the rows vanished, only how much. And its recall
should track the keep probability. Older baselines fail the first check;
the content score passes both.
Run with: python3 demos/corruption_study.py
"""

import tempfile
from pathlib import Path

from grits import (
    emit_plot_data,
    run_scheme_experiment,
    run_sweep_experiment,
    synthetic_dataset,
)

data = synthetic_dataset(100, seed=7, even_dims=True)
print(f"dataset: {len(data)} synthetic tables, distinct text per position")

# part 1: delete half the rows (or columns) three different ways and
# compare scores across the six conditions
report = run_scheme_experiment(
    data, metrics=("grits-con", "dar-con", "teds-con"), seed=7, p=0.5
)
print(f"\n{'scheme':<12} {'axis':<8} {'grits-con':>10} {'dar-con':>10} "
      f"{'teds-con':>10}")
for cond in report.conditions:
    row = [cond.means[m]["fscore"] for m in ("grits-con", "dar-con", "teds-con")]
    print(f"{cond.scheme.value:<12} {cond.axis.value:<8} "
          + " ".join(f"{v:>10.4f}" for v in row))

# grits-con sits at exactly 2/3 everywhere: half the cells earn full
# credit against the denominator (|A| + |B|) / 2 = 3n/4. the adjacency
# baseline swings wildly with the scheme because deleting alternating
# rows breaks every vertical neighbor pair, and the tree-edit baseline
# prefers column deletion because rows own more tree nodes

# part 2: sweep the keep probability and dump gnuplot-ready curves
sweep = run_sweep_experiment(data, metrics=("grits-con",),
                             p_values=[i / 10 for i in range(11)], seed=7)
out = Path(tempfile.mkdtemp(prefix="sweep_"))
files = emit_plot_data(sweep, out)
print(f"\nwrote {len(files)} plot files to {out}")
rows_curve = out / "grits-con_fscore_rows_p.dat"
print(f"--- {rows_curve.name} ---")
print(rows_curve.read_text(), end="")
