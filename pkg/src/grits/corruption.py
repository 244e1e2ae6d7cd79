"""Controlled corruption experiments.

Metrics are probed by deleting rows or columns from spanning-cell-free
tables under several selection schemes and measuring how scores respond.
Everything is seeded: each (table, condition) draws from an RNG derived
from the experiment seed and the table id, so reports are byte-identical
across runs and process counts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ._util import derived_rng, parallel_map
from .alignment import Score
from .errors import EmptyDatasetError, InvalidIndexError, SpanningCellError
from .metrics import METRIC_NAMES, MetricValue, evaluate_metric
from .table import Box, Cell, TableGrid, build_grid


class Axis(str, Enum):
    ROWS = "rows"
    COLUMNS = "columns"


class Scheme(str, Enum):
    FIRST = "first"
    ALTERNATING = "alternating"
    RANDOM = "random"
    BERNOULLI = "bernoulli"


@dataclass(frozen=True)
class CorruptionSpec:
    """One corruption condition: which axis, how indices are chosen, the
    selection probability, and the experiment seed."""

    axis: Axis
    scheme: Scheme
    p: float = 0.5
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0, 1], got {self.p}")


def select_indices(n: int, spec: CorruptionSpec, rng) -> List[int]:
    """Indices to keep out of range(n), strictly increasing.

    first: the first ceil(p*n). alternating: even-indexed or odd-indexed
    positions, the variant chosen by one coin flip from rng (p is
    ignored). random: a uniformly random ceil(p*n)-subset. bernoulli:
    each index kept independently with probability p.
    """
    if spec.scheme is Scheme.ALTERNATING:
        start = 0 if rng.random() < 0.5 else 1
        return list(range(start, n, 2))
    if spec.scheme is Scheme.BERNOULLI:
        return [i for i in range(n) if rng.random() < spec.p]
    k = min(n, math.ceil(spec.p * n))
    if spec.scheme is Scheme.FIRST:
        return list(range(k))
    return sorted(rng.sample(range(n), k))


def drop_rows_or_columns(grid: TableGrid, kept: Sequence[int], axis: Axis) -> TableGrid:
    """New grid keeping only the given row (or column) indices, in order.

    Only valid for grids without spanning cells (SpanningCellError
    otherwise). kept must be strictly increasing and in range
    (InvalidIndexError). Cell text and boxes are untouched.
    """
    if grid.has_spanning_cells:
        raise SpanningCellError("cannot drop rows/columns of a grid with spanning cells")
    n = grid.n_rows if axis is Axis.ROWS else grid.n_cols
    kept = list(kept)
    if any(i < 0 or i >= n for i in kept):
        raise InvalidIndexError(f"kept indices out of range 0..{n - 1}: {kept}")
    if any(b <= a for a, b in zip(kept, kept[1:])):
        raise InvalidIndexError(f"kept indices not strictly increasing: {kept}")
    cells = []
    if axis is Axis.ROWS:
        for new_i, i in enumerate(kept):
            for j in range(grid.n_cols):
                c = grid.cell_at(i, j)
                cells.append(Cell(new_i, new_i, j, j, c.text, c.bbox, c.is_header))
        return build_grid(cells, len(kept), grid.n_cols)
    for i in range(grid.n_rows):
        for new_j, j in enumerate(kept):
            c = grid.cell_at(i, j)
            cells.append(Cell(i, i, new_j, new_j, c.text, c.bbox, c.is_header))
    return build_grid(cells, grid.n_rows, len(kept))


def corrupt_table(grid: TableGrid, spec: CorruptionSpec, table_id: str) -> TableGrid:
    """Apply one corruption condition to one table, reproducibly.

    The RNG is derived from (seed, table id, axis, scheme, p) so every
    condition draws independently and no state leaks between tables.
    """
    rng = derived_rng(spec.seed, table_id, spec.axis.value, spec.scheme.value, repr(float(spec.p)))
    n = grid.n_rows if spec.axis is Axis.ROWS else grid.n_cols
    return drop_rows_or_columns(grid, select_indices(n, spec, rng), spec.axis)


Dataset = Sequence[Tuple[str, TableGrid]]


def synthetic_dataset(
    n_tables: int,
    seed: int = 0,
    min_rows: int = 4,
    max_rows: int = 8,
    min_cols: int = 4,
    max_cols: int = 8,
    even_dims: bool = False,
) -> List[Tuple[str, TableGrid]]:
    """Spanning-cell-free tables with distinct texts and unit boxes.

    Cell (i, j) holds text "r{i}c{j}" and box [j, i, j+1, i+1], so content
    is unique per position and locations lie on a uniform grid.
    even_dims=True restricts both dimensions to even values.
    """
    rng = derived_rng("synthetic", seed)

    def dim(lo: int, hi: int) -> int:
        if even_dims:
            lo = lo + lo % 2
            hi = hi - hi % 2
            return 2 * rng.randint(lo // 2, hi // 2)
        return rng.randint(lo, hi)

    out = []
    for t in range(n_tables):
        n_rows = dim(min_rows, max_rows)
        n_cols = dim(min_cols, max_cols)
        cells = [
            Cell(i, i, j, j, f"r{i}c{j}", Box(float(j), float(i), float(j + 1), float(i + 1)))
            for i in range(n_rows)
            for j in range(n_cols)
        ]
        out.append((f"synthetic-{t:04d}", build_grid(cells, n_rows, n_cols)))
    return out


@dataclass(frozen=True)
class ConditionResult:
    """Mean scores of one (scheme, axis, p) condition.

    means maps metric name to {"fscore", "precision", "recall"}; the last
    two are None for scalar metrics.
    """

    scheme: Scheme
    axis: Axis
    p: float
    n_tables: int
    means: Mapping[str, Mapping[str, Optional[float]]]


@dataclass(frozen=True)
class ExperimentReport:
    kind: str
    metrics: Tuple[str, ...]
    seed: int
    n_tables: int
    n_filtered: int
    conditions: Tuple[ConditionResult, ...]
    config: Mapping[str, object] = field(default_factory=dict)

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind,
            "metrics": list(self.metrics),
            "seed": self.seed,
            "n_tables": self.n_tables,
            "n_filtered": self.n_filtered,
            "config": dict(self.config),
            "conditions": [
                {
                    "scheme": c.scheme.value,
                    "axis": c.axis.value,
                    "p": c.p,
                    "n_tables": c.n_tables,
                    "means": {
                        m: {
                            "fscore": v["fscore"],
                            "precision": v["precision"],
                            "recall": v["recall"],
                        }
                        for m, v in c.means.items()
                    },
                }
                for c in self.conditions
            ],
        }


def _usable(dataset: Dataset) -> List[Tuple[str, TableGrid]]:
    usable = [(tid, g) for tid, g in dataset if not g.has_spanning_cells]
    if not usable:
        raise EmptyDatasetError("no spanning-cell-free tables in the dataset")
    return usable


def _mean_values(per_metric: Dict[str, List[MetricValue]]) -> Dict[str, Dict[str, Optional[float]]]:
    means: Dict[str, Dict[str, Optional[float]]] = {}
    for name, values in per_metric.items():
        if values and isinstance(values[0], Score):
            means[name] = {
                "fscore": sum(v.fscore for v in values) / len(values),
                "precision": sum(v.precision for v in values) / len(values),
                "recall": sum(v.recall for v in values) / len(values),
            }
        else:
            means[name] = {
                "fscore": sum(float(v) for v in values) / len(values),
                "precision": None,
                "recall": None,
            }
    return means


def _average_metric(values: Sequence[MetricValue]) -> MetricValue:
    if isinstance(values[0], Score):
        n = len(values)
        return Score(
            sum(v.fscore for v in values) / n,
            sum(v.precision for v in values) / n,
            sum(v.recall for v in values) / n,
        )
    return sum(float(v) for v in values) / len(values)


def _run_condition(
    tables: List[Tuple[str, TableGrid]],
    metrics: Sequence[str],
    spec: CorruptionSpec,
    alternating_both: bool,
    options: Mapping[str, object],
) -> ConditionResult:
    def score_one(item: Tuple[str, TableGrid]) -> Dict[str, MetricValue]:
        tid, grid = item
        if alternating_both and spec.scheme is Scheme.ALTERNATING:
            n = grid.n_rows if spec.axis is Axis.ROWS else grid.n_cols
            preds = [
                drop_rows_or_columns(grid, list(range(start, n, 2)), spec.axis)
                for start in (0, 1)
            ]
            return {
                m: _average_metric([evaluate_metric(m, grid, p, **options) for p in preds])
                for m in metrics
            }
        pred = corrupt_table(grid, spec, tid)
        return {m: evaluate_metric(m, grid, pred, **options) for m in metrics}

    rows = parallel_map(score_one, tables)
    per_metric: Dict[str, List[MetricValue]] = {m: [] for m in metrics}
    for row in rows:
        for m in metrics:
            per_metric[m].append(row[m])
    return ConditionResult(spec.scheme, spec.axis, spec.p, len(tables), _mean_values(per_metric))


def run_scheme_experiment(
    dataset: Dataset,
    metrics: Sequence[str] = METRIC_NAMES,
    seed: int = 0,
    p: float = 0.5,
    alternating_both: bool = False,
    options: Optional[Mapping[str, object]] = None,
) -> ExperimentReport:
    """Score every metric under the six scheme x axis conditions.

    Schemes first/alternating/random, each applied to rows and to
    columns at the given selection probability. Tables with spanning
    cells are filtered out (EmptyDatasetError if none remain).
    alternating_both=True averages the even and odd variants per table
    instead of flipping a coin.
    """
    tables = _usable(dataset)
    options = dict(options or {})
    conditions = []
    for scheme in (Scheme.FIRST, Scheme.ALTERNATING, Scheme.RANDOM):
        for axis in (Axis.ROWS, Axis.COLUMNS):
            spec = CorruptionSpec(axis, scheme, p, seed)
            conditions.append(
                _run_condition(tables, metrics, spec, alternating_both, options)
            )
    return ExperimentReport(
        kind="scheme",
        metrics=tuple(metrics),
        seed=seed,
        n_tables=len(tables),
        n_filtered=len(dataset) - len(tables),
        conditions=tuple(conditions),
        config={"p": p, "alternating_both": alternating_both},
    )


def run_sweep_experiment(
    dataset: Dataset,
    metrics: Sequence[str] = METRIC_NAMES,
    p_values: Sequence[float] = tuple(i / 10 for i in range(11)),
    seed: int = 0,
    options: Optional[Mapping[str, object]] = None,
) -> ExperimentReport:
    """Bernoulli deletion sweep over p, for rows and for columns."""
    tables = _usable(dataset)
    options = dict(options or {})
    conditions = []
    for axis in (Axis.ROWS, Axis.COLUMNS):
        for p in p_values:
            spec = CorruptionSpec(axis, Scheme.BERNOULLI, p, seed)
            conditions.append(_run_condition(tables, metrics, spec, False, options))
    return ExperimentReport(
        kind="sweep",
        metrics=tuple(metrics),
        seed=seed,
        n_tables=len(tables),
        n_filtered=len(dataset) - len(tables),
        conditions=tuple(conditions),
        config={"p_values": [float(p) for p in p_values]},
    )


def emit_plot_data(report: ExperimentReport, out_dir) -> List[Path]:
    """Write plot-ready files plus report.json into out_dir.

    Sweep reports produce one two-column file per metric, statistic and
    axis, named <metric>_<statistic>_<axis>_p.dat with lines "p mean".
    Scheme reports produce one <metric>_schemes.csv per metric with the
    six condition rows. Returns the written paths.
    """
    from .io import dumps_canonical

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []
    if report.kind == "sweep":
        for metric in report.metrics:
            for axis in (Axis.ROWS, Axis.COLUMNS):
                rows = sorted(
                    (c for c in report.conditions if c.axis is axis),
                    key=lambda c: c.p,
                )
                for stat in ("fscore", "precision", "recall"):
                    if any(c.means[metric][stat] is None for c in rows):
                        continue
                    path = out_dir / f"{metric}_{stat}_{axis.value}_p.dat"
                    path.write_text(
                        "".join(
                            f"{c.p!r} {c.means[metric][stat]!r}\n" for c in rows
                        ),
                        newline="\n",
                    )
                    written.append(path)
    else:
        for metric in report.metrics:
            path = out_dir / f"{metric}_schemes.csv"
            lines = ["scheme,axis,fscore,precision,recall\n"]
            for c in report.conditions:
                vals = c.means[metric]
                cells = [
                    c.scheme.value,
                    c.axis.value,
                    *(
                        "" if vals[s] is None else repr(vals[s])
                        for s in ("fscore", "precision", "recall")
                    ),
                ]
                lines.append(",".join(cells) + "\n")
            path.write_text("".join(lines), newline="\n")
            written.append(path)
    report_path = out_dir / "report.json"
    report_path.write_text(dumps_canonical(report.to_json_dict()) + "\n", newline="\n")
    written.append(report_path)
    return written
