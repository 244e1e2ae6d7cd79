"""Logical table model.

A table is a set of cells tiling an n_rows x n_cols grid. Spanning cells
cover a contiguous rectangular block of grid positions. From a validated
grid we extract per-grid-cell property matrices (topology, content,
location) that the metrics operate on.
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple, Union

from .errors import (
    GapError,
    MalformedBoxError,
    MissingBBoxError,
    OutOfBoundsError,
    OverlapError,
)

_WS = re.compile(r"\s+")


def canonical_text(s: str) -> str:
    """Canonical form used whenever cell text is compared.

    Unicode NFKC, runs of whitespace collapsed to single spaces, outer
    whitespace stripped. No case folding.
    """
    return _WS.sub(" ", unicodedata.normalize("NFKC", s)).strip()


class Box(NamedTuple):
    """Axis-aligned box [x1, y1, x2, y2], used for both document and
    grid-relative coordinates."""

    x1: float
    y1: float
    x2: float
    y2: float


BoxLike = Union[Box, Sequence[float]]


def as_box(value: BoxLike) -> Box:
    """Coerce a 4-sequence to a Box, validating arity and orientation."""
    if isinstance(value, Box):
        box = value
    else:
        try:
            box = Box(*value)
        except TypeError:
            raise MalformedBoxError(
                f"box needs exactly 4 coordinates, got {value!r}"
            ) from None
    if box.x2 < box.x1 or box.y2 < box.y1:
        raise MalformedBoxError(f"box has negative extent: {box}")
    return box


class MatrixKind(str, Enum):
    TOPOLOGY = "topology"
    CONTENT = "content"
    LOCATION = "location"


@dataclass(frozen=True)
class Cell:
    """One logical cell, covering grid rows row_start..row_end and columns
    col_start..col_end inclusive."""

    row_start: int
    row_end: int
    col_start: int
    col_end: int
    text: str = ""
    bbox: Optional[Box] = None
    is_header: bool = False

    def __post_init__(self):
        for name in ("row_start", "row_end", "col_start", "col_end"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a non-negative int, got {v!r}")
        if self.row_end < self.row_start or self.col_end < self.col_start:
            raise ValueError(f"cell span is inverted: {self}")
        if self.bbox is not None:
            object.__setattr__(self, "bbox", as_box(self.bbox))

    @property
    def rowspan(self) -> int:
        return self.row_end - self.row_start + 1

    @property
    def colspan(self) -> int:
        return self.col_end - self.col_start + 1

    @property
    def is_blank(self) -> bool:
        return canonical_text(self.text) == ""


@dataclass(frozen=True)
class TableGrid:
    """A validated table: every grid position is covered by exactly one cell.

    ``grid[i][j]`` is the index into ``cells`` of the covering cell.
    """

    n_rows: int
    n_cols: int
    cells: Tuple[Cell, ...]
    grid: Tuple[Tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return self.n_rows * self.n_cols

    def cell_at(self, i: int, j: int) -> Cell:
        return self.cells[self.grid[i][j]]

    @property
    def has_spanning_cells(self) -> bool:
        return any(c.rowspan > 1 or c.colspan > 1 for c in self.cells)

    def transposed(self) -> "TableGrid":
        """Swap rows and columns. Text and absolute boxes are untouched."""
        cells = tuple(
            Cell(c.col_start, c.col_end, c.row_start, c.row_end,
                 c.text, c.bbox, c.is_header)
            for c in self.cells
        )
        grid = tuple(
            tuple(self.grid[i][j] for i in range(self.n_rows))
            for j in range(self.n_cols)
        )
        return TableGrid(self.n_cols, self.n_rows, cells, grid)


def build_grid(cells: Iterable[Cell], n_rows: int, n_cols: int) -> TableGrid:
    """Validate cells against the declared dimensions and index the grid.

    Raises OutOfBoundsError, OverlapError, or GapError. A 0x0 table with no
    cells is valid.
    """
    cells = tuple(cells)
    if n_rows < 0 or n_cols < 0:
        raise OutOfBoundsError(f"negative grid dimensions {n_rows}x{n_cols}")
    occupancy = [[-1] * n_cols for _ in range(n_rows)]
    for idx, cell in enumerate(cells):
        if cell.row_end >= n_rows or cell.col_end >= n_cols:
            raise OutOfBoundsError(
                f"cell {idx} spans to ({cell.row_end}, {cell.col_end}) in a "
                f"{n_rows}x{n_cols} grid"
            )
        for i in range(cell.row_start, cell.row_end + 1):
            for j in range(cell.col_start, cell.col_end + 1):
                if occupancy[i][j] != -1:
                    raise OverlapError(
                        f"cells {occupancy[i][j]} and {idx} both cover "
                        f"position ({i}, {j})"
                    )
                occupancy[i][j] = idx
    for i in range(n_rows):
        for j in range(n_cols):
            if occupancy[i][j] == -1:
                raise GapError(f"no cell covers position ({i}, {j})")
    return TableGrid(n_rows, n_cols, cells, tuple(tuple(r) for r in occupancy))


def fill_blank_cells(cells: Iterable[Cell], n_rows: int, n_cols: int) -> Tuple[Cell, ...]:
    """Complete a partial tiling with blank unit cells at uncovered positions.

    Source formats often omit blank cells; the grid model requires a full
    tiling. Overlaps and bounds still raise.
    """
    cells = tuple(cells)
    occupancy = [[-1] * n_cols for _ in range(n_rows)]
    for idx, cell in enumerate(cells):
        if cell.row_end >= n_rows or cell.col_end >= n_cols:
            raise OutOfBoundsError(
                f"cell {idx} spans to ({cell.row_end}, {cell.col_end}) in a "
                f"{n_rows}x{n_cols} grid"
            )
        for i in range(cell.row_start, cell.row_end + 1):
            for j in range(cell.col_start, cell.col_end + 1):
                if occupancy[i][j] != -1:
                    raise OverlapError(
                        f"cells {occupancy[i][j]} and {idx} both cover "
                        f"position ({i}, {j})"
                    )
                occupancy[i][j] = idx
    extra = [
        Cell(i, i, j, j)
        for i in range(n_rows)
        for j in range(n_cols)
        if occupancy[i][j] == -1
    ]
    return cells + tuple(extra)


def topology_box(grid: TableGrid, i: int, j: int) -> Box:
    """Grid-relative box of the cell covering position (i, j).

    With the covering cell's minimum row rho, minimum column theta, rowspan
    alpha and colspan beta, the box is
    [theta - j, rho - i, theta - j + beta, rho - i + alpha].
    A unit cell yields [0, 0, 1, 1] at its own position.
    """
    c = grid.cell_at(i, j)
    return Box(
        float(c.col_start - j),
        float(c.row_start - i),
        float(c.col_start - j + c.colspan),
        float(c.row_start - i + c.rowspan),
    )


Entry = Union[Box, str, None]


@dataclass(frozen=True)
class PropertyMatrix:
    """Per-grid-cell property values for one table, tagged with their kind."""

    kind: MatrixKind
    entries: Tuple[Tuple[Entry, ...], ...]

    @property
    def n_rows(self) -> int:
        return len(self.entries)

    @property
    def n_cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def size(self) -> int:
        return self.n_rows * self.n_cols

    def row(self, i: int) -> Tuple[Entry, ...]:
        return self.entries[i]

    def column(self, j: int) -> Tuple[Entry, ...]:
        return tuple(r[j] for r in self.entries)

    def transposed(self) -> "PropertyMatrix":
        """Transpose entries. Topology boxes get their x/y components swapped
        so the result equals extract_matrix of the transposed table."""
        def flip(e: Entry) -> Entry:
            if self.kind is MatrixKind.TOPOLOGY and isinstance(e, Box):
                return Box(e.y1, e.x1, e.y2, e.x2)
            return e

        cols = self.n_cols
        entries = tuple(
            tuple(flip(r[j]) for r in self.entries) for j in range(cols)
        )
        return PropertyMatrix(self.kind, entries)


def extract_matrix(grid: TableGrid, kind: MatrixKind, strict: bool = True) -> PropertyMatrix:
    """Extract the property matrix of the given kind.

    Content entries are the covering cell's canonicalized full text (spanning
    cells repeat it at every covered position). Location entries are the
    covering cell's absolute box; with strict=True a missing box raises
    MissingBBoxError, otherwise the entry is None.
    """
    rows = []
    for i in range(grid.n_rows):
        row = []
        for j in range(grid.n_cols):
            if kind is MatrixKind.TOPOLOGY:
                row.append(topology_box(grid, i, j))
            elif kind is MatrixKind.CONTENT:
                row.append(canonical_text(grid.cell_at(i, j).text))
            else:
                box = grid.cell_at(i, j).bbox
                if box is None and strict:
                    raise MissingBBoxError(
                        f"cell covering ({i}, {j}) has no bounding box"
                    )
                row.append(box)
        rows.append(tuple(row))
    return PropertyMatrix(kind, tuple(rows))
