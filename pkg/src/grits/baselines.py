"""Baseline metrics: directed adjacency relations and tree edit distance.

Both predate grid-alignment scoring and are included for comparison
experiments. Adjacency relations reduce a table to nearest-neighbor pairs
and score them as multisets; the tree metric serializes the table
row-major and scores an ordered tree edit distance with text-aware
substitution costs.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from .alignment import Score
from .errors import MissingBBoxError
from .similarity import iou
from .table import Box, MatrixKind, TableGrid, canonical_text

DEFAULT_IOU_THRESHOLDS = (0.6, 0.7, 0.8, 0.9)


class Direction(str, Enum):
    RIGHT = "right"
    BELOW = "below"


class AdjacencyRelation(NamedTuple):
    """One directed nearest-neighbor relation between two non-blank cells."""

    source: Union[str, Box]
    target: Union[str, Box]
    direction: Direction


def _index_relations(grid: TableGrid) -> List[Tuple[int, int, Direction]]:
    """Relations as (source cell index, target cell index, direction).

    For each non-blank cell, scan right (then down) from its span, nearest
    column (row) first, topmost (leftmost) position within the span first,
    skipping blank cells; the first hit is the single relation in that
    direction. Edge cells have none.
    """
    rels: List[Tuple[int, int, Direction]] = []
    blank = [c.is_blank for c in grid.cells]
    for idx, cell in enumerate(grid.cells):
        if blank[idx]:
            continue
        target = -1
        for col in range(cell.col_end + 1, grid.n_cols):
            for row in range(cell.row_start, cell.row_end + 1):
                cand = grid.grid[row][col]
                if not blank[cand]:
                    target = cand
                    break
            if target != -1:
                break
        if target != -1:
            rels.append((idx, target, Direction.RIGHT))
        target = -1
        for row in range(cell.row_end + 1, grid.n_rows):
            for col in range(cell.col_start, cell.col_end + 1):
                cand = grid.grid[row][col]
                if not blank[cand]:
                    target = cand
                    break
            if target != -1:
                break
        if target != -1:
            rels.append((idx, target, Direction.BELOW))
    return rels


def adjacency_relations(
    grid: TableGrid, key: MatrixKind = MatrixKind.CONTENT
) -> List[AdjacencyRelation]:
    """Directed adjacency relations keyed by cell identity.

    key=CONTENT uses canonicalized text; key=LOCATION uses the cell's
    absolute box (MissingBBoxError if a participating cell has none).
    """
    if key is MatrixKind.CONTENT:
        def ident(c):
            return canonical_text(c.text)
    elif key is MatrixKind.LOCATION:
        def ident(c):
            if c.bbox is None:
                raise MissingBBoxError("cell in a relation has no bounding box")
            return c.bbox
    else:
        raise ValueError(f"unsupported relation key {key}")
    return [
        AdjacencyRelation(ident(grid.cells[s]), ident(grid.cells[t]), d)
        for s, t, d in _index_relations(grid)
    ]


def _prf(matched: int, n_gt: int, n_pred: int) -> Score:
    """Precision/recall/F over relation counts.

    Zero-relation convention: a pair where both tables yield no relations
    scores (1, 1, 1); if only one side is empty, everything is 0.
    """
    if n_gt == 0 and n_pred == 0:
        return Score(1.0, 1.0, 1.0)
    precision = matched / n_pred if n_pred else 0.0
    recall = matched / n_gt if n_gt else 0.0
    denom = precision + recall
    fscore = 2.0 * precision * recall / denom if denom > 0 else 0.0
    return Score(fscore, precision, recall)


def dar_con(gt: TableGrid, pred: TableGrid) -> Score:
    """Adjacency-relation F-score with text-equality matching.

    Relations are compared as multisets of (source text, target text,
    direction) after canonicalization.
    """
    gt_rels = Counter(adjacency_relations(gt, MatrixKind.CONTENT))
    pred_rels = Counter(adjacency_relations(pred, MatrixKind.CONTENT))
    matched = sum((gt_rels & pred_rels).values())
    return _prf(matched, sum(gt_rels.values()), sum(pred_rels.values()))


def dar_loc(
    gt: TableGrid,
    pred: TableGrid,
    thresholds: Sequence[float] = DEFAULT_IOU_THRESHOLDS,
) -> Score:
    """Adjacency-relation F-score with location-based cell matching.

    For each IoU threshold, predicted cells are matched one-to-one to
    ground-truth cells greedily by descending IoU (ties broken by cell
    index), relations are scored over the matched identities, and the
    per-threshold precision/recall/F are averaged.
    """
    for c in (*gt.cells, *pred.cells):
        if c.bbox is None:
            raise MissingBBoxError("dar_loc requires a box on every cell")
    gt_rels = _index_relations(gt)
    pred_rels = _index_relations(pred)
    candidates = sorted(
        (
            (iou(gc.bbox, pc.bbox), gi, pi)
            for gi, gc in enumerate(gt.cells)
            for pi, pc in enumerate(pred.cells)
        ),
        key=lambda t: (-t[0], t[1], t[2]),
    )
    scores = []
    for t in thresholds:
        gt_to_pred: Dict[int, int] = {}
        used_pred = set()
        for value, gi, pi in candidates:
            if value < t:
                break
            if gi in gt_to_pred or pi in used_pred:
                continue
            gt_to_pred[gi] = pi
            used_pred.add(pi)
        pred_set = set(pred_rels)
        matched = sum(
            1
            for s, tgt, d in gt_rels
            if s in gt_to_pred
            and tgt in gt_to_pred
            and (gt_to_pred[s], gt_to_pred[tgt], d) in pred_set
        )
        scores.append(_prf(matched, len(gt_rels), len(pred_rels)))
    n = len(scores)
    return Score(
        sum(s.fscore for s in scores) / n,
        sum(s.precision for s in scores) / n,
        sum(s.recall for s in scores) / n,
    )


@dataclass(frozen=True)
class TableTree:
    """Node of the row-major tree form: table -> tr -> td.

    Spanning cells appear once, in the tr of their first row, carrying
    rowspan/colspan. No header markup is ever emitted.
    """

    label: str
    text: str = ""
    rowspan: int = 1
    colspan: int = 1
    children: Tuple["TableTree", ...] = ()


def tree_size(tree: TableTree) -> int:
    return 1 + sum(tree_size(c) for c in tree.children)


def table_to_tree(grid: TableGrid) -> TableTree:
    """Serialize a grid to its row-major tree."""
    by_row: List[List] = [[] for _ in range(grid.n_rows)]
    for cell in grid.cells:
        by_row[cell.row_start].append(cell)
    rows = []
    for row_cells in by_row:
        tds = tuple(
            TableTree("td", canonical_text(c.text), c.rowspan, c.colspan)
            for c in sorted(row_cells, key=lambda c: c.col_start)
        )
        rows.append(TableTree("tr", children=tds))
    return TableTree("table", children=tuple(rows))


def levenshtein(s: str, t: str) -> int:
    """Classic edit distance (insert/delete/substitute, unit costs)."""
    if len(t) > len(s):
        s, t = t, s
    prev = list(range(len(t) + 1))
    for i, ch in enumerate(s, 1):
        cur = [i]
        for j, tj in enumerate(t, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ch != tj)))
        prev = cur
    return prev[-1]


def normalized_levenshtein(s: str, t: str) -> float:
    """Edit distance divided by the longer length; two empties are 0."""
    longest = max(len(s), len(t))
    if longest == 0:
        return 0.0
    return levenshtein(s, t) / longest


def _substitution_cost(a: TableTree, b: TableTree) -> float:
    if a.label != b.label:
        return 1.0
    if a.label == "td":
        if a.rowspan != b.rowspan or a.colspan != b.colspan:
            return 1.0
        return normalized_levenshtein(a.text, b.text)
    return 0.0


def _annotate(root: TableTree):
    """Postorder node list, leftmost-leaf-descendant indices, keyroots."""
    nodes: List[TableTree] = []
    lml: List[int] = []

    def walk(node: TableTree) -> int:
        first_child_lml = None
        for child in node.children:
            idx = walk(child)
            if first_child_lml is None:
                first_child_lml = lml[idx]
        nodes.append(node)
        i = len(nodes) - 1
        lml.append(first_child_lml if first_child_lml is not None else i)
        return i

    walk(root)
    last_for_lml: Dict[int, int] = {}
    for i, v in enumerate(lml):
        last_for_lml[v] = i
    keyroots = sorted(last_for_lml.values())
    return nodes, lml, keyroots


def tree_edit_distance(
    t1: TableTree,
    t2: TableTree,
    substitution: Callable[[TableTree, TableTree], float] = _substitution_cost,
) -> float:
    """Ordered tree edit distance (Zhang-Shasha) with unit insert/delete.

    The substitution cost defaults to the table-aware one: 1 for
    different labels or differing td spans, normalized text edit distance
    for td pairs, 0 for identical structural labels.
    """
    nodes1, lml1, keyroots1 = _annotate(t1)
    nodes2, lml2, keyroots2 = _annotate(t2)
    td = [[0.0] * len(nodes2) for _ in range(len(nodes1))]
    for i in keyroots1:
        li = lml1[i]
        for j in keyroots2:
            lj = lml2[j]
            m = i - li + 2
            n = j - lj + 2
            fd = [[0.0] * n for _ in range(m)]
            for di in range(1, m):
                fd[di][0] = fd[di - 1][0] + 1.0
            for dj in range(1, n):
                fd[0][dj] = fd[0][dj - 1] + 1.0
            for di in range(1, m):
                x = li + di - 1
                whole_x = lml1[x] == li
                for dj in range(1, n):
                    y = lj + dj - 1
                    if whole_x and lml2[y] == lj:
                        fd[di][dj] = min(
                            fd[di - 1][dj] + 1.0,
                            fd[di][dj - 1] + 1.0,
                            fd[di - 1][dj - 1] + substitution(nodes1[x], nodes2[y]),
                        )
                        td[x][y] = fd[di][dj]
                    else:
                        fd[di][dj] = min(
                            fd[di - 1][dj] + 1.0,
                            fd[di][dj - 1] + 1.0,
                            fd[lml1[x] - li][lml2[y] - lj] + td[x][y],
                        )
    return td[len(nodes1) - 1][len(nodes2) - 1]


def teds_con(gt: TableGrid, pred: TableGrid) -> float:
    """Tree-edit-distance similarity of the header-free row-major trees.

    1 - distance / max(node counts), floored at 0; the distance can exceed
    the larger node count for thoroughly dissimilar trees. Two empty
    tables score 1.
    """
    t1 = table_to_tree(gt)
    t2 = table_to_tree(pred)
    dist = tree_edit_distance(t1, t2)
    return max(0.0, 1.0 - dist / max(tree_size(t1), tree_size(t2)))
