"""
Scoring a predicted table against ground truth
==============================================

Builds a small ground-truth table and a slightly wrong prediction
directly from cells, then walks through the three score variants.
Run with: python3 demos/quickstart.py
"""

from grits import Box, Cell, build_grid, evaluate_pair, grits_con, grits_top

# a 2x3 table; boxes are in page coordinates (x1, y1, x2, y2)
gt = build_grid(
    [
        Cell(0, 0, 0, 0, "name", Box(0, 0, 40, 10), is_header=True),
        Cell(0, 0, 1, 1, "qty", Box(40, 0, 60, 10), is_header=True),
        Cell(0, 0, 2, 2, "price", Box(60, 0, 90, 10), is_header=True),
        Cell(1, 1, 0, 0, "bolt", Box(0, 10, 40, 20)),
        Cell(1, 1, 1, 1, "12", Box(40, 10, 60, 20)),
        Cell(1, 1, 2, 2, "0.30", Box(60, 10, 90, 20)),
    ],
    n_rows=2,
    n_cols=3,
)

# the prediction got one text wrong ("bolt" read as "belt") and one box
# shifted a little
pred = build_grid(
    [
        Cell(0, 0, 0, 0, "name", Box(0, 0, 40, 10), is_header=True),
        Cell(0, 0, 1, 1, "qty", Box(40, 0, 60, 10), is_header=True),
        Cell(0, 0, 2, 2, "price", Box(60, 0, 90, 10), is_header=True),
        Cell(1, 1, 0, 0, "belt", Box(0, 12, 40, 22)),
        Cell(1, 1, 1, 1, "12", Box(40, 10, 60, 20)),
        Cell(1, 1, 2, 2, "0.30", Box(60, 10, 90, 20)),
    ],
    n_rows=2,
    n_cols=3,
)

# each variant compares a different cell property over the best-aligned
# sub-grids: topology ignores text and boxes entirely, content compares
# canonicalized text, location compares the absolute boxes
print("topology:", grits_top(gt, pred))   # structure is identical -> 1.0
print("content: ", grits_con(gt, pred))   # belt vs bolt costs 1/4 of a cell

# all three at once; Score carries fscore, precision, recall
scores = evaluate_pair(gt, pred)
for name in ("top", "con", "loc"):
    s = getattr(scores, name)
    print(f"grits-{name}: f={s.fscore:.4f} p={s.precision:.4f} r={s.recall:.4f}")
