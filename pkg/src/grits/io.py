"""Table documents on disk: canonical JSON, simplified HTML, dataset dirs.

The JSON schema for one table:

    {
      "id": "t1",                 // optional
      "n_rows": 5,
      "n_cols": 4,
      "cells": [
        {
          "rows": [0, 1],         // inclusive row range
          "cols": [0, 0],         // inclusive column range
          "text": "Group",        // optional, default ""
          "bbox": [x1, y1, x2, y2],   // optional
          "is_header": true       // optional, default false
        },
        ...
      ]
    }

Unknown fields are preserved on read and dropped, with a warning, on
write. Serialization is canonical: fixed key order, cells sorted
row-major, floats at 17 significant digits (lossless double round-trip),
LF line endings.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from html import escape
from html.parser import HTMLParser
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from ._util import parallel_map
from .errors import (
    GapError,
    GritsError,
    MalformedHtmlError,
    MissingPairError,
    RaggedRowError,
    SchemaError,
)
from .table import Box, Cell, TableGrid, build_grid, fill_blank_cells


@dataclass(frozen=True)
class TableDocument:
    """One table as stored on disk, plus any unknown fields found there."""

    table_id: str
    n_rows: int
    n_cols: int
    cells: Tuple[Cell, ...]
    extras: Mapping[str, object] = field(default_factory=dict)
    cell_extras: Tuple[Mapping[str, object], ...] = ()

    def to_grid(self, fill_blanks: bool = True) -> TableGrid:
        """Validated grid; uncovered positions become blank unit cells
        unless fill_blanks=False."""
        cells = self.cells
        if fill_blanks:
            cells = fill_blank_cells(cells, self.n_rows, self.n_cols)
        return build_grid(cells, self.n_rows, self.n_cols)


def document_from_grid(grid: TableGrid, table_id: str = "") -> TableDocument:
    return TableDocument(table_id, grid.n_rows, grid.n_cols, grid.cells)


def _format_number(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"cannot serialize non-finite number {x}")
    return format(x, ".17g")


def _write_canonical(obj, out: List[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_format_number(obj))
    elif isinstance(obj, Mapping):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k), ensure_ascii=False))
            out.append(":")
            _write_canonical(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _write_canonical(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_canonical(obj) -> str:
    """Deterministic JSON: insertion-ordered keys, 17-significant-digit
    floats, no whitespace."""
    out: List[str] = []
    _write_canonical(obj, out)
    return "".join(out)


_CELL_FIELDS = {"rows", "cols", "text", "bbox", "is_header"}
_DOC_FIELDS = {"id", "n_rows", "n_cols", "cells"}


def _expect(cond: bool, message: str, pointer: str) -> None:
    if not cond:
        raise SchemaError(message, pointer)


def _as_int(value, pointer: str) -> int:
    _expect(isinstance(value, int) and not isinstance(value, bool),
            f"expected integer, got {value!r}", pointer)
    return value


def _as_number(value, pointer: str) -> float:
    _expect(
        isinstance(value, (int, float)) and not isinstance(value, bool),
        f"expected number, got {value!r}",
        pointer,
    )
    return float(value)


def _parse_cell(raw, idx: int) -> Tuple[Cell, Dict[str, object]]:
    ptr = f"/cells/{idx}"
    _expect(isinstance(raw, dict), "expected object", ptr)
    for name in ("rows", "cols"):
        _expect(name in raw, f"missing required field {name!r}", ptr)
        span = raw[name]
        _expect(
            isinstance(span, list) and len(span) == 2,
            "expected [start, end]",
            f"{ptr}/{name}",
        )
    r0 = _as_int(raw["rows"][0], f"{ptr}/rows/0")
    r1 = _as_int(raw["rows"][1], f"{ptr}/rows/1")
    c0 = _as_int(raw["cols"][0], f"{ptr}/cols/0")
    c1 = _as_int(raw["cols"][1], f"{ptr}/cols/1")
    text = raw.get("text", "")
    _expect(isinstance(text, str), "expected string", f"{ptr}/text")
    bbox = None
    if raw.get("bbox") is not None:
        b = raw["bbox"]
        _expect(
            isinstance(b, list) and len(b) == 4,
            "expected [x1, y1, x2, y2]",
            f"{ptr}/bbox",
        )
        bbox = Box(*(_as_number(v, f"{ptr}/bbox/{i}") for i, v in enumerate(b)))
    is_header = raw.get("is_header", False)
    _expect(isinstance(is_header, bool), "expected boolean", f"{ptr}/is_header")
    try:
        cell = Cell(r0, r1, c0, c1, text, bbox, is_header)
    except (ValueError, GritsError) as exc:
        raise SchemaError(str(exc), ptr) from None
    extras = {k: raw[k] for k in raw if k not in _CELL_FIELDS}
    return cell, extras


def parse_table_json(
    data: Union[str, bytes],
    fill_blanks: bool = True,
    table_id: str = "",
) -> TableDocument:
    """Parse and validate one table document.

    Raises SchemaError with a JSON-pointer path for any violation,
    including overlap/bounds/tiling problems found when validating the
    grid. fill_blanks=False demands an explicit full tiling. table_id is
    the fallback when the document has no "id".
    """
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    _expect(isinstance(raw, dict), "expected object", "")
    for name in ("n_rows", "n_cols", "cells"):
        _expect(name in raw, f"missing required field {name!r}", f"/{name}")
    n_rows = _as_int(raw["n_rows"], "/n_rows")
    n_cols = _as_int(raw["n_cols"], "/n_cols")
    _expect(n_rows >= 0 and n_cols >= 0, "dimensions must be non-negative", "/n_rows")
    doc_id = raw.get("id", table_id)
    _expect(isinstance(doc_id, str), "expected string", "/id")
    raw_cells = raw.get("cells", [])
    _expect(isinstance(raw_cells, list), "expected array", "/cells")
    cells = []
    cell_extras = []
    for i, rc in enumerate(raw_cells):
        cell, extras = _parse_cell(rc, i)
        cells.append(cell)
        cell_extras.append(extras)
    doc = TableDocument(
        doc_id,
        n_rows,
        n_cols,
        tuple(cells),
        extras={k: raw[k] for k in raw if k not in _DOC_FIELDS},
        cell_extras=tuple(cell_extras),
    )
    try:
        doc.to_grid(fill_blanks=fill_blanks)
    except GritsError as exc:
        raise SchemaError(str(exc), "/cells") from None
    return doc


def _doc_to_json_dict(doc: TableDocument) -> Dict[str, object]:
    order = sorted(
        range(len(doc.cells)),
        key=lambda i: (
            doc.cells[i].row_start,
            doc.cells[i].col_start,
            doc.cells[i].row_end,
            doc.cells[i].col_end,
        ),
    )
    cells = []
    for i in order:
        c = doc.cells[i]
        entry: Dict[str, object] = {
            "rows": [c.row_start, c.row_end],
            "cols": [c.col_start, c.col_end],
            "text": c.text,
        }
        if c.bbox is not None:
            entry["bbox"] = [float(v) for v in c.bbox]
        if c.is_header:
            entry["is_header"] = True
        cells.append(entry)
    return {
        "id": doc.table_id,
        "n_rows": doc.n_rows,
        "n_cols": doc.n_cols,
        "cells": cells,
    }


def serialize_table_json(doc: TableDocument) -> bytes:
    """Canonical UTF-8 JSON bytes for a document.

    Unknown fields carried by the document are dropped with a warning.
    """
    dropped = set(doc.extras)
    for extras in doc.cell_extras:
        dropped.update(extras)
    if dropped:
        warnings.warn(
            f"dropping unknown fields on write: {', '.join(sorted(dropped))}",
            stacklevel=2,
        )
    return (dumps_canonical(_doc_to_json_dict(doc)) + "\n").encode("utf-8")


_STRUCTURAL = {"table", "thead", "tbody", "tfoot", "tr", "td", "th"}


class _TableHtml(HTMLParser):
    """Single-table HTML reader with rowspan/colspan placement."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.table_depth = 0
        self.saw_table = False
        self.in_row = False
        self.cell: Optional[List] = None  # [is_header, rowspan, colspan, chunks]
        self.row_index = -1
        self.occupied: Dict[Tuple[int, int], int] = {}
        self.cells: List[Cell] = []
        self.cursor = 0

    def _fail(self, message: str):
        raise MalformedHtmlError(message)

    def _span(self, attrs: Dict[str, Optional[str]], name: str) -> int:
        raw = attrs.get(name)
        if raw is None or raw.strip() == "":
            return 1
        try:
            value = int(raw)
        except ValueError:
            self._fail(f"non-integer {name}={raw!r}")
        if value < 1:
            self._fail(f"{name} must be >= 1, got {value}")
        return value

    def handle_starttag(self, tag, attrs):
        if tag not in _STRUCTURAL:
            return
        attrs = dict(attrs)
        if tag == "table":
            if self.table_depth > 0:
                self._fail("nested tables are not supported")
            if self.saw_table:
                self._fail("more than one table in input")
            self.table_depth += 1
            self.saw_table = True
        elif tag == "tr":
            if self.table_depth != 1 or self.in_row:
                self._fail("tr outside table")
            self.in_row = True
            self.row_index += 1
            self.cursor = 0
        elif tag in ("td", "th"):
            if not self.in_row:
                self._fail(f"{tag} outside tr")
            if self.cell is not None:
                self._fail("nested table cells")
            self.cell = [
                tag == "th",
                self._span(attrs, "rowspan"),
                self._span(attrs, "colspan"),
                [],
            ]

    def handle_endtag(self, tag):
        if tag == "table":
            if self.table_depth != 1:
                self._fail("unbalanced table tags")
            self.table_depth -= 1
        elif tag == "tr":
            self.in_row = False
            if self.cell is not None:
                self._fail("unclosed cell at end of row")
        elif tag in ("td", "th"):
            if self.cell is None:
                self._fail(f"stray closing {tag}")
            self._place(*self.cell)
            self.cell = None

    def handle_data(self, data):
        if self.cell is not None:
            self.cell[3].append(data)

    def _place(self, is_header: bool, rowspan: int, colspan: int, chunks: List[str]):
        i = self.row_index
        j = self.cursor
        while (i, j) in self.occupied:
            j += 1
        idx = len(self.cells)
        for r in range(i, i + rowspan):
            for c in range(j, j + colspan):
                if (r, c) in self.occupied:
                    raise RaggedRowError(
                        f"cell spans collide at position ({r}, {c})"
                    )
                self.occupied[(r, c)] = idx
        self.cells.append(
            Cell(i, i + rowspan - 1, j, j + colspan - 1,
                 "".join(chunks).strip(), None, is_header)
        )
        self.cursor = j + colspan

    def finish(self, table_id: str) -> TableDocument:
        if not self.saw_table:
            self._fail("no table in input")
        if self.table_depth != 0:
            self._fail("unclosed table")
        n_rows = self.row_index + 1
        n_cols = max((c + 1 for _, c in self.occupied), default=0)
        if any(r >= n_rows for r, _ in self.occupied):
            raise RaggedRowError("a rowspan extends past the last row")
        doc = TableDocument(table_id, n_rows, n_cols, tuple(self.cells))
        try:
            doc.to_grid(fill_blanks=False)
        except GapError as exc:
            raise RaggedRowError(str(exc)) from None
        return doc


def parse_html_table(html: str, table_id: str = "") -> TableDocument:
    """Parse one HTML table into a document.

    Supports td/th with rowspan/colspan; th sets is_header. Inline markup
    inside cells is flattened to text. The expanded spans must tile a
    rectangle (RaggedRowError otherwise); structural problems raise
    MalformedHtmlError. HTML carries no geometry, so boxes are absent.
    """
    parser = _TableHtml()
    parser.feed(html)
    parser.close()
    return parser.finish(table_id)


def to_html(doc: TableDocument) -> str:
    """Simplified row-major HTML for a document.

    One tr per grid row; cells appear at their origin row in column
    order, with rowspan/colspan attributes when above 1 and th for
    header cells. Geometry is dropped.
    """
    grid = doc.to_grid(fill_blanks=True)
    by_row: List[List[Cell]] = [[] for _ in range(grid.n_rows)]
    for cell in grid.cells:
        by_row[cell.row_start].append(cell)
    lines = ["<table>"]
    for row_cells in by_row:
        parts = ["<tr>"]
        for c in sorted(row_cells, key=lambda c: c.col_start):
            tag = "th" if c.is_header else "td"
            attrs = ""
            if c.rowspan > 1:
                attrs += f' rowspan="{c.rowspan}"'
            if c.colspan > 1:
                attrs += f' colspan="{c.colspan}"'
            parts.append(f"<{tag}{attrs}>{escape(c.text)}</{tag}>")
        parts.append("</tr>")
        lines.append("".join(parts))
    lines.append("</table>")
    return "\n".join(lines) + "\n"


def _parse_file(path: Path, fill_blanks: bool = True) -> TableDocument:
    try:
        return parse_table_json(
            path.read_text(encoding="utf-8"),
            fill_blanks=fill_blanks,
            table_id=path.stem,
        )
    except SchemaError as exc:
        raise SchemaError(f"{path}: {exc}") from None


def _parse_all(paths: Sequence[Path]) -> List[TableDocument]:
    """Parse many files, collecting failures into one SchemaError."""

    def attempt(path: Path):
        try:
            return _parse_file(path), None
        except SchemaError as exc:
            return None, str(exc)

    results = parallel_map(attempt, paths)
    problems = [msg for _, msg in results if msg is not None]
    if problems:
        raise SchemaError("; ".join(problems))
    return [doc for doc, _ in results]


def pair_directories(
    gt_dir,
    pred_dir,
    skip_missing: bool = False,
) -> List[Tuple[TableDocument, TableDocument]]:
    """Pair *.json files across two directories by file stem.

    Deterministic lexicographic order. Unpaired stems raise
    MissingPairError listing all of them, or are skipped with a warning
    when skip_missing=True.
    """
    gt_dir, pred_dir = Path(gt_dir), Path(pred_dir)
    gt_files = {p.stem: p for p in sorted(gt_dir.glob("*.json"))}
    pred_files = {p.stem: p for p in sorted(pred_dir.glob("*.json"))}
    missing = sorted(set(gt_files) ^ set(pred_files))
    if missing:
        if not skip_missing:
            raise MissingPairError(missing)
        warnings.warn(f"skipping unpaired tables: {', '.join(missing)}", stacklevel=2)
    stems = sorted(set(gt_files) & set(pred_files))
    if not stems:
        warnings.warn(f"no table pairs under {gt_dir} and {pred_dir}", stacklevel=2)
        return []
    # one batch so a report of bad files covers both sides
    docs = _parse_all(
        [gt_files[s] for s in stems] + [pred_files[s] for s in stems]
    )
    return list(zip(docs[: len(stems)], docs[len(stems):]))


def load_dataset_dir(
    path,
    layout: str = "gt-pred-pairs",
    skip_missing: bool = False,
):
    """Load a dataset directory.

    layout="flat-json": every *.json in the directory is a table; returns
    the documents. layout="gt-pred-pairs": the directory holds gt/ and
    pred/ subdirectories paired by file stem; returns (gt, pred) document
    pairs. Order is lexicographic either way.
    """
    path = Path(path)
    if layout == "flat-json":
        return _parse_all(sorted(path.glob("*.json")))
    if layout == "gt-pred-pairs":
        return list(pair_directories(path / "gt", path / "pred", skip_missing))
    raise ValueError(f"unknown layout {layout!r}")


def parse_pascal_voc(path):
    """Unimplemented: import of PASCAL-VOC-style table annotations.

    The intended mapping, for when this lands: each XML <object> carries
    a class name and a <bndbox>; objects classed as rows and columns
    define the grid lines, a cell's grid coordinates come from the
    rows/columns its box intersects, spanning-cell objects merge the
    grid positions they cover, and header-row membership sets is_header.
    Text content is not part of VOC boxes and would need a companion
    words file.
    """
    raise NotImplementedError(
        "PASCAL-VOC import is documented but not implemented; "
        "see parse_pascal_voc.__doc__ for the mapping"
    )
