"""Shared table builders for the test suite."""

from typing import List, Optional, Sequence

from grits import Box, Cell, TableGrid, build_grid

# Column x-ranges and body-row y-ranges of the hand-made clinical trial
# administration table used as the golden fixture throughout.
_XS = [(136.42, 160.62), (185.0, 271.9), (284.5, 371.39), (384.0, 470.89)]
_YS = [(505.82, 515.72), (515.73, 525.63), (525.64, 535.53)]
_BODY = [["I", "C", "A", "B"], ["II", "B", "C", "A"], ["III", "A", "B", "C"]]


def admin_table(split_group: bool = False) -> TableGrid:
    """5x4 table with a rowspan-2 header cell and a colspan-3 header cell.

    split_group=True breaks the rowspan-2 "Group" cell into two unit cells
    sharing its box, the canonical near-miss prediction.
    """
    cells: List[Cell] = []
    group_box = Box(136.42, 477.25, 160.62, 501.45)
    if split_group:
        cells.append(Cell(0, 0, 0, 0, "Group", group_box, is_header=True))
        cells.append(Cell(1, 1, 0, 0, "Group", group_box, is_header=True))
    else:
        cells.append(Cell(0, 1, 0, 0, "Group", group_box, is_header=True))
    cells.append(
        Cell(0, 0, 1, 3, "Sequence of Administration",
             Box(185.0, 477.25, 470.89, 487.22), is_header=True)
    )
    for j, phase in enumerate(("Phase I", "Phase II", "Phase III"), start=1):
        x1, x2 = _XS[j]
        cells.append(Cell(1, 1, j, j, phase, Box(x1, 491.48, x2, 501.45),
                          is_header=True))
    for i, texts in enumerate(_BODY, start=2):
        y1, y2 = _YS[i - 2]
        for j, text in enumerate(texts):
            x1, x2 = _XS[j]
            cells.append(Cell(i, i, j, j, text, Box(x1, y1, x2, y2)))
    return build_grid(cells, 5, 4)


def unit_table(texts: Sequence[Sequence[str]],
               boxes: Optional[Sequence[Sequence[Box]]] = None) -> TableGrid:
    """Spanning-cell-free grid from a rectangular list of texts."""
    n_rows = len(texts)
    n_cols = len(texts[0]) if n_rows else 0
    cells = []
    for i in range(n_rows):
        for j in range(n_cols):
            bbox = boxes[i][j] if boxes is not None else None
            cells.append(Cell(i, i, j, j, texts[i][j], bbox))
    return build_grid(cells, n_rows, n_cols)


def distinct_table(n_rows: int, n_cols: int) -> TableGrid:
    """Unit grid with position-unique texts and unit-square boxes."""
    cells = [
        Cell(i, i, j, j, f"r{i}c{j}", Box(float(j), float(i), j + 1.0, i + 1.0))
        for i in range(n_rows)
        for j in range(n_cols)
    ]
    return build_grid(cells, n_rows, n_cols)


def random_spanning_table(rng, max_rows: int = 6, max_cols: int = 6,
                          merges: int = 3, alphabet: str = "abc") -> TableGrid:
    """Random valid tiling: start from unit cells, merge a few rectangular
    blocks of still-unmerged positions."""
    n_rows = rng.randint(1, max_rows)
    n_cols = rng.randint(1, max_cols)
    owner = [[(i, j) for j in range(n_cols)] for i in range(n_rows)]
    spans = {(i, j): (i, i, j, j) for i in range(n_rows) for j in range(n_cols)}
    for _ in range(merges):
        i = rng.randrange(n_rows)
        j = rng.randrange(n_cols)
        h = rng.randint(1, min(2, n_rows - i))
        w = rng.randint(1, min(2, n_cols - j))
        block = [(r, c) for r in range(i, i + h) for c in range(j, j + w)]
        if any(spans[owner[r][c]][:2] != (r, r) or spans[owner[r][c]][2:] != (c, c)
               for r, c in block):
            continue
        for r, c in block:
            del spans[(r, c)]
            owner[r][c] = (i, j)
        spans[(i, j)] = (i, i + h - 1, j, j + w - 1)
    cells = []
    for (i, j), (r1, r2, c1, c2) in sorted(spans.items()):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 3)))
        bbox = Box(float(c1), float(r1), c2 + 1.0, r2 + 1.0)
        cells.append(Cell(r1, r2, c1, c2, text, bbox))
    return build_grid(cells, n_rows, n_cols)
