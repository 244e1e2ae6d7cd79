import random

import pytest

from grits import (
    Box,
    Cell,
    GapError,
    MalformedBoxError,
    MatrixKind,
    MissingBBoxError,
    OutOfBoundsError,
    OverlapError,
    PropertyMatrix,
    as_box,
    build_grid,
    canonical_text,
    extract_matrix,
    fill_blank_cells,
    topology_box,
)
from sample_tables import admin_table, random_spanning_table, unit_table


def test_canonical_text_normalizes_compatibility_forms():
    assert canonical_text("ﬁsh") == "fish"  # fi ligature
    assert canonical_text("ＡＢ") == "AB"  # fullwidth
    assert canonical_text("a b") == "a b"  # nbsp


def test_canonical_text_collapses_whitespace():
    assert canonical_text("  a \t b\n") == "a b"
    assert canonical_text("") == ""
    assert canonical_text(" \n\t ") == ""
    # no case folding
    assert canonical_text("Group") == "Group"


def test_as_box_accepts_sequences_and_validates():
    assert as_box([0, 0, 1, 1]) == Box(0.0, 0.0, 1.0, 1.0)
    with pytest.raises(MalformedBoxError):
        as_box([2, 0, 1, 1])
    with pytest.raises(MalformedBoxError):
        as_box([0, 2, 1, 1])
    with pytest.raises(MalformedBoxError):
        as_box([0, 0, 1])


def test_cell_validation():
    with pytest.raises(ValueError):
        Cell(-1, 0, 0, 0)
    with pytest.raises(ValueError):
        Cell(1, 0, 0, 0)
    with pytest.raises(ValueError):
        Cell(0, 0, 2, 1)
    # bbox is coerced to Box
    c = Cell(0, 0, 0, 0, bbox=[0, 0, 1, 1])
    assert isinstance(c.bbox, Box)


def test_cell_span_and_blank():
    c = Cell(0, 1, 2, 4, text=" \t ")
    assert c.rowspan == 2
    assert c.colspan == 3
    assert c.is_blank
    assert not Cell(0, 0, 0, 0, "x").is_blank


def test_build_grid_single_unit_cell():
    g = build_grid([Cell(0, 0, 0, 0, "a")], 1, 1)
    assert g.size == 1
    assert g.cell_at(0, 0).text == "a"


def test_build_grid_rejects_overlap():
    with pytest.raises(OverlapError):
        build_grid([Cell(0, 0, 0, 0), Cell(0, 0, 0, 0)], 1, 1)


def test_build_grid_rejects_gap():
    with pytest.raises(GapError):
        build_grid([Cell(0, 0, 0, 0)], 1, 2)


def test_build_grid_rejects_out_of_bounds():
    with pytest.raises(OutOfBoundsError):
        build_grid([Cell(0, 0, 0, 1)], 1, 1)
    with pytest.raises(OutOfBoundsError):
        build_grid([], -1, 0)


def test_empty_grid_is_valid():
    g = build_grid([], 0, 0)
    assert g.size == 0
    for kind in MatrixKind:
        m = extract_matrix(g, kind)
        assert m.n_rows == 0 and m.n_cols == 0


def test_fill_blank_cells_completes_tiling():
    cells = fill_blank_cells([Cell(0, 1, 0, 0, "x")], 2, 2)
    g = build_grid(cells, 2, 2)
    assert g.cell_at(0, 1).is_blank
    assert g.cell_at(1, 1).is_blank
    assert g.cell_at(1, 0).text == "x"
    # already complete: unchanged
    full = (Cell(0, 0, 0, 0, "a"),)
    assert fill_blank_cells(full, 1, 1) == full


def test_fill_blank_cells_still_validates():
    with pytest.raises(OverlapError):
        fill_blank_cells([Cell(0, 0, 0, 0), Cell(0, 0, 0, 0)], 1, 1)
    with pytest.raises(OutOfBoundsError):
        fill_blank_cells([Cell(0, 0, 0, 5)], 1, 2)


def test_topology_box_unit_cell():
    g = unit_table([["a", "b"], ["c", "d"]])
    for i in range(2):
        for j in range(2):
            assert topology_box(g, i, j) == Box(0.0, 0.0, 1.0, 1.0)


def test_topology_box_spanning_cells():
    g = admin_table()
    # rowspan-2 cell at column 0
    assert topology_box(g, 0, 0) == Box(0.0, 0.0, 1.0, 2.0)
    assert topology_box(g, 1, 0) == Box(0.0, -1.0, 1.0, 1.0)
    # colspan-3 cell across columns 1..3
    assert topology_box(g, 0, 1) == Box(0.0, 0.0, 3.0, 1.0)
    assert topology_box(g, 0, 2) == Box(-1.0, 0.0, 2.0, 1.0)
    assert topology_box(g, 0, 3) == Box(-2.0, 0.0, 1.0, 1.0)


def test_topology_box_origin_corner_is_zero():
    # at a cell's own origin position the box starts at (0, 0)
    rng = random.Random(7)
    for _ in range(25):
        g = random_spanning_table(rng)
        for c in g.cells:
            b = topology_box(g, c.row_start, c.col_start)
            assert b.x1 == 0.0 and b.y1 == 0.0
            assert b.x2 == float(c.colspan) and b.y2 == float(c.rowspan)


def test_unit_coverage_sums_to_span_area():
    rng = random.Random(11)
    for _ in range(25):
        g = random_spanning_table(rng)
        seen = {}
        for i in range(g.n_rows):
            for j in range(g.n_cols):
                c = g.cell_at(i, j)
                seen[id(c)] = seen.get(id(c), 0) + 1
        for c in g.cells:
            assert seen[id(c)] == c.rowspan * c.colspan


def test_perturbed_span_breaks_tiling():
    rng = random.Random(3)
    checked = 0
    for _ in range(40):
        g = random_spanning_table(rng)
        for idx, c in enumerate(g.cells):
            if c.row_end + 1 < g.n_rows:
                bad = Cell(c.row_start, c.row_end + 1, c.col_start, c.col_end)
            elif c.rowspan > 1:
                bad = Cell(c.row_start, c.row_end - 1, c.col_start, c.col_end)
            else:
                continue
            cells = list(g.cells)
            cells[idx] = bad
            with pytest.raises((OverlapError, GapError)):
                build_grid(cells, g.n_rows, g.n_cols)
            checked += 1
            break
    assert checked > 10


def test_transpose_round_trip():
    g = admin_table()
    t = g.transposed()
    assert t.n_rows == g.n_cols and t.n_cols == g.n_rows
    back = t.transposed()
    assert back.n_rows == g.n_rows and back.n_cols == g.n_cols
    for i in range(g.n_rows):
        for j in range(g.n_cols):
            assert back.cell_at(i, j).text == g.cell_at(i, j).text


def test_matrix_transpose_round_trip():
    m = extract_matrix(admin_table(), MatrixKind.TOPOLOGY)
    assert m.transposed().transposed() == m


def test_content_matrix_values(admin):
    m = extract_matrix(admin, MatrixKind.CONTENT)
    assert m.row(0) == ("Group", "Sequence of Administration",
                        "Sequence of Administration", "Sequence of Administration")
    assert m.row(2) == ("I", "C", "A", "B")


def test_content_transpose_example():
    m = extract_matrix(unit_table([["a", "b"]]), MatrixKind.CONTENT)
    t = m.transposed()
    assert (t.n_rows, t.n_cols) == (2, 1)
    assert t.column(0) == ("a", "b")


def test_topology_transpose_swaps_axes():
    # colspan-3 origin entry becomes a rowspan-3 one
    m = extract_matrix(admin_table(), MatrixKind.TOPOLOGY)
    t = m.transposed()
    assert m.entries[0][1] == Box(0.0, 0.0, 3.0, 1.0)
    assert t.entries[1][0] == Box(0.0, 0.0, 1.0, 3.0)


def test_extract_matrix_commutes_with_transpose():
    rng = random.Random(19)
    for _ in range(20):
        g = random_spanning_table(rng)
        for kind in MatrixKind:
            assert extract_matrix(g.transposed(), kind) == \
                extract_matrix(g, kind).transposed()


def test_location_matrix_strictness():
    g = unit_table([["a", "b"]])  # no boxes
    with pytest.raises(MissingBBoxError):
        extract_matrix(g, MatrixKind.LOCATION)
    m = extract_matrix(g, MatrixKind.LOCATION, strict=False)
    assert m.entries == ((None, None),)


def test_location_matrix_repeats_spanning_box(admin):
    m = extract_matrix(admin, MatrixKind.LOCATION)
    assert m.entries[0][0] == Box(136.42, 477.25, 160.62, 501.45)
    assert m.entries[1][0] == m.entries[0][0]


def test_property_matrix_kind_preserved():
    m = extract_matrix(admin_table(), MatrixKind.CONTENT)
    assert m.kind is MatrixKind.CONTENT
    assert m.transposed().kind is MatrixKind.CONTENT
    assert isinstance(m, PropertyMatrix)
