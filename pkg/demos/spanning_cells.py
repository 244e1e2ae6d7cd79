"""
How spanning cells are scored
=============================

Spanning cells are the usual failure mode of table recognizers, so the
topology variant is built around them: every grid position gets a box
describing the span it sits in, relative to its own position. Two tables
then agree at a position exactly when the spans agree, and partial
credit comes from box overlap instead of all-or-nothing matching.
Run with: python3 demos/spanning_cells.py
"""

from grits import Box, Cell, MatrixKind, build_grid, extract_matrix, grits_top

# a header with one cell spanning two rows ("Group") and one spanning
# three columns, over a 3x4 body
cells = [
    Cell(0, 1, 0, 0, "Group", Box(136.42, 477.25, 160.62, 501.45), is_header=True),
    Cell(0, 0, 1, 3, "Sequence of Administration",
         Box(185.0, 477.25, 470.89, 487.22), is_header=True),
    Cell(1, 1, 1, 1, "Phase I", Box(185.0, 491.48, 271.9, 501.45), is_header=True),
    Cell(1, 1, 2, 2, "Phase II", Box(284.5, 491.48, 371.39, 501.45), is_header=True),
    Cell(1, 1, 3, 3, "Phase III", Box(384.0, 491.48, 470.89, 501.45), is_header=True),
]
body = [["I", "C", "A", "B"], ["II", "B", "C", "A"], ["III", "A", "B", "C"]]
xs = [(136.42, 160.62), (185.0, 271.9), (284.5, 371.39), (384.0, 470.89)]
ys = [(505.82, 515.72), (515.73, 525.63), (525.64, 535.53)]
for i, row in enumerate(body):
    for j, text in enumerate(row):
        cells.append(Cell(2 + i, 2 + i, j, j, text,
                          Box(xs[j][0], ys[i][0], xs[j][1], ys[i][1])))
gt = build_grid(cells, n_rows=5, n_cols=4)

# the topology matrix: a unit cell is (0, 0, 1, 1); a spanning cell
# paints every position it covers with the span rectangle shifted so the
# position itself sits at the origin
topo = extract_matrix(gt, MatrixKind.TOPOLOGY)
for row in topo.entries:
    print("  ".join(f"({b.x1:g},{b.y1:g},{b.x2:g},{b.y2:g})" for b in row))

# a prediction that splits the rowspan-2 "Group" cell into two unit
# cells but gets everything else right
split = [c for c in cells if c.text != "Group"]
split.append(Cell(0, 0, 0, 0, "Group",
                  Box(136.42, 477.25, 160.62, 501.45), is_header=True))
split.append(Cell(1, 1, 0, 0, "Group",
                  Box(136.42, 477.25, 160.62, 501.45), is_header=True))
pred = build_grid(split, n_rows=5, n_cols=4)

# the two broken positions each keep half their overlap with the true
# span (iou of a unit box against a 1x2 box is 0.5), the other 18
# positions match exactly: 2 * (18 + 2*0.5) / (20 + 20) = 0.95
print()
print("split the spanning header:", grits_top(gt, pred))
