"""Grid table similarity metrics.

Each variant extracts a property matrix from both tables and scores the
factored most-similar-substructure alignment under the matching entry
similarity: grid-relative boxes with IoU (topology), canonicalized text
with normalized LCS (content), absolute boxes with IoU (location).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .alignment import Score, similarity_scores
from .errors import GritsError
from .similarity import iou, location_similarity, normalized_lcs_similarity
from .table import MatrixKind, TableGrid, extract_matrix

MetricValue = Union[Score, float]


def grits_top(gt: TableGrid, pred: TableGrid) -> Score:
    """Topology variant: grid-relative span boxes compared by IoU."""
    a = extract_matrix(gt, MatrixKind.TOPOLOGY)
    b = extract_matrix(pred, MatrixKind.TOPOLOGY)
    return similarity_scores(a, b, iou)


def grits_con(gt: TableGrid, pred: TableGrid) -> Score:
    """Content variant: cell text compared by normalized LCS."""
    a = extract_matrix(gt, MatrixKind.CONTENT)
    b = extract_matrix(pred, MatrixKind.CONTENT)
    return similarity_scores(a, b, normalized_lcs_similarity)


def grits_loc(gt: TableGrid, pred: TableGrid, strict: bool = True) -> Score:
    """Location variant: absolute boxes compared by IoU.

    strict=True raises MissingBBoxError when any cell lacks a box; with
    strict=False absent boxes become None entries (two absent entries
    match perfectly, one absent matches nothing).
    """
    a = extract_matrix(gt, MatrixKind.LOCATION, strict=strict)
    b = extract_matrix(pred, MatrixKind.LOCATION, strict=strict)
    return similarity_scores(a, b, location_similarity)


@dataclass(frozen=True)
class GritsScores:
    """Scores of the requested variants for one table pair.

    A variant is None when it was not requested or when it failed in
    non-strict mode; ``errors`` then holds the message. ``timings`` maps
    variant name to wall seconds.
    """

    top: Optional[Score] = None
    con: Optional[Score] = None
    loc: Optional[Score] = None
    timings: Mapping[str, float] = field(default_factory=dict)
    errors: Mapping[str, str] = field(default_factory=dict)


_VARIANTS = {
    MatrixKind.TOPOLOGY: "top",
    MatrixKind.CONTENT: "con",
    MatrixKind.LOCATION: "loc",
}


def evaluate_pair(
    gt: TableGrid,
    pred: TableGrid,
    kinds: Iterable[MatrixKind] = (
        MatrixKind.TOPOLOGY,
        MatrixKind.CONTENT,
        MatrixKind.LOCATION,
    ),
    strict_location: bool = True,
    capture_errors: bool = False,
) -> GritsScores:
    """Evaluate the requested variants on one ground-truth/prediction pair.

    With capture_errors=True a failing variant records its error message
    and leaves its score None instead of raising; batch callers use this
    so one bad table does not abort a run.
    """
    values: Dict[str, Optional[Score]] = {}
    timings: Dict[str, float] = {}
    errors: Dict[str, str] = {}
    for kind in kinds:
        name = _VARIANTS[kind]
        start = time.perf_counter()
        try:
            if kind is MatrixKind.TOPOLOGY:
                values[name] = grits_top(gt, pred)
            elif kind is MatrixKind.CONTENT:
                values[name] = grits_con(gt, pred)
            else:
                values[name] = grits_loc(gt, pred, strict=strict_location)
        except GritsError as exc:
            if not capture_errors:
                raise
            values[name] = None
            errors[name] = str(exc)
        timings[name] = time.perf_counter() - start
    return GritsScores(
        top=values.get("top"),
        con=values.get("con"),
        loc=values.get("loc"),
        timings=timings,
        errors=errors,
    )


def _metric_grits_top(gt, pred, **options) -> Score:
    return grits_top(gt, pred)


def _metric_grits_con(gt, pred, **options) -> Score:
    return grits_con(gt, pred)


def _metric_grits_loc(gt, pred, **options) -> Score:
    return grits_loc(gt, pred, strict=options.get("strict_location", True))


def _metric_dar_con(gt, pred, **options) -> Score:
    from .baselines import dar_con

    return dar_con(gt, pred)


def _metric_dar_loc(gt, pred, **options) -> Score:
    from .baselines import dar_loc

    thresholds = options.get("iou_thresholds")
    if thresholds is None:
        return dar_loc(gt, pred)
    return dar_loc(gt, pred, thresholds=thresholds)


def _metric_teds_con(gt, pred, **options) -> float:
    from .baselines import teds_con

    return teds_con(gt, pred)


METRICS = {
    "grits-top": _metric_grits_top,
    "grits-con": _metric_grits_con,
    "grits-loc": _metric_grits_loc,
    "dar-con": _metric_dar_con,
    "dar-loc": _metric_dar_loc,
    "teds-con": _metric_teds_con,
}

METRIC_NAMES = tuple(METRICS)


def evaluate_metric(name: str, gt: TableGrid, pred: TableGrid, **options) -> MetricValue:
    """Score one named metric; Score triple, or a bare float for teds-con."""
    try:
        fn = METRICS[name]
    except KeyError:
        raise KeyError(
            f"unknown metric {name!r}; choose from {', '.join(METRIC_NAMES)}"
        ) from None
    return fn(gt, pred, **options)


def aggregate_values(
    values: Sequence[MetricValue],
    weights: Optional[Sequence[float]] = None,
) -> Dict[str, Optional[float]]:
    """Aggregate per-table values of one metric.

    Returns the (optionally weighted) mean fscore/precision/recall, plus
    fscore_from_pr recomputed from the mean precision and recall. Triple
    components are None for scalar metrics.
    """
    if not values:
        raise ValueError("nothing to aggregate")
    if weights is None:
        weights = [1.0] * len(values)
    if len(weights) != len(values):
        raise ValueError("weights and values differ in length")
    wsum = float(sum(weights))
    if wsum <= 0:
        raise ValueError("weights must sum to a positive value")

    def wmean(xs):
        return sum(w * x for w, x in zip(weights, xs)) / wsum

    if all(isinstance(v, Score) for v in values):
        p = wmean([v.precision for v in values])
        r = wmean([v.recall for v in values])
        return {
            "fscore": wmean([v.fscore for v in values]),
            "precision": p,
            "recall": r,
            "fscore_from_pr": (2.0 * p * r / (p + r)) if (p + r) > 0 else 0.0,
        }
    if any(isinstance(v, Score) for v in values):
        raise ValueError("mixed Score and scalar values for one metric")
    return {
        "fscore": wmean([float(v) for v in values]),
        "precision": None,
        "recall": None,
        "fscore_from_pr": None,
    }
