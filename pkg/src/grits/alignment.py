"""Most-similar-substructure alignment between matrices.

A substructure of a matrix is the submatrix induced by a subsequence of its
rows and a subsequence of its columns. Given an entry-similarity function f
in [0, 1], the alignment problem asks for the pair of equal-shaped
substructures of A and B maximizing the sum of pointwise similarities.
Solving it exactly is intractable, so ``factored_2dmss`` solves the row and
column dimensions independently with a weighted sequence-alignment DP and
returns certified lower and upper bounds; ``exact_2dmss`` is the
exponential reference for small inputs.

Runtime of the factored heuristic is O(|A| * |B|) entry-similarity
evaluations (|M| = number of matrix entries), with memory of the same
order for the memoized pairwise table.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, List, NamedTuple, Sequence, Tuple

import numpy as np

from .errors import KindMismatchError, TooLargeError
from .table import PropertyMatrix

SimilarityFn = Callable[[object, object], float]

# Below this many pairwise entries the plain-Python path beats numpy call
# overhead; above it the batched DP takes over.
_NUMPY_CUTOVER = 4096

# Chunk size (in pairwise entries) for building the similarity table, to
# bound peak memory of the vectorized similarity functions.
_PAIRWISE_CHUNK = 1 << 22


class Score(NamedTuple):
    """F-score with its precision and recall components."""

    fscore: float
    precision: float
    recall: float


@dataclass(frozen=True)
class AlignmentResult:
    """Outcome of the factored alignment.

    ``rows_a``/``rows_b`` are equal-length strictly increasing index
    subsequences pairing rows of A with rows of B; same for columns.
    ``lower_bound`` is the similarity sum over the substructure pair they
    induce, so it is always attained by a real substructure.
    """

    lower_bound: float
    upper_bound: float
    rows_a: Tuple[int, ...]
    rows_b: Tuple[int, ...]
    cols_a: Tuple[int, ...]
    cols_b: Tuple[int, ...]

    @property
    def matched_cells(self) -> Tuple[Tuple[Tuple[int, int], Tuple[int, int]], ...]:
        """Grid-position pairs ((i_a, j_a), (i_b, j_b)) of the induced
        substructure, row-major."""
        return tuple(
            ((ra, ca), (rb, cb))
            for ra, rb in zip(self.rows_a, self.rows_b)
            for ca, cb in zip(self.cols_a, self.cols_b)
        )


def _check_kinds(a, b) -> None:
    if isinstance(a, PropertyMatrix) and isinstance(b, PropertyMatrix):
        if a.kind is not b.kind:
            raise KindMismatchError(
                f"cannot align {a.kind.value} against {b.kind.value}"
            )


def _entries(m) -> Tuple[Tuple[object, ...], ...]:
    if isinstance(m, PropertyMatrix):
        return m.entries
    out = tuple(tuple(row) for row in m)
    if out and any(len(row) != len(out[0]) for row in out):
        raise ValueError("matrix rows have unequal lengths")
    return out


def _dims(entries) -> Tuple[int, int]:
    return len(entries), (len(entries[0]) if entries else 0)


def _align_from_rewards(rewards: List[List[float]], n: int, m: int):
    """Maximum-weight monotone matching of two index ranges.

    Classic DP: D[i][j] = max(D[i-1][j], D[i][j-1], D[i-1][j-1] + r(i, j)).
    Traceback prefers the diagonal on ties, then advancing the first index,
    then the second. Returns (score, pairs); only pairs with positive
    reward are emitted.
    """
    D = [[0.0] * (m + 1) for _ in range(n + 1)]
    for i in range(n):
        ri = rewards[i]
        di = D[i]
        dn = D[i + 1]
        for j in range(m):
            v = di[j] + ri[j]
            c = dn[j]
            p = di[j + 1]
            dn[j + 1] = v if (v >= c and v >= p) else (c if c >= p else p)
    pairs: List[Tuple[int, int]] = []
    i, j = n, m
    while i > 0 and j > 0:
        cur = D[i][j]
        if cur == D[i - 1][j - 1] + rewards[i - 1][j - 1]:
            if rewards[i - 1][j - 1] > 0.0:
                pairs.append((i - 1, j - 1))
            i -= 1
            j -= 1
        elif cur == D[i - 1][j]:
            i -= 1
        else:
            j -= 1
    pairs.reverse()
    return D[n][m], pairs


def align_1d(seq_a: Sequence, seq_b: Sequence, f: SimilarityFn):
    """1D weighted alignment of two sequences under similarity f.

    Returns (score, pairs) where pairs is the traced-back list of matched
    index pairs with positive similarity, strictly increasing in both
    coordinates.
    """
    rewards = [[float(f(a, b)) for b in seq_b] for a in seq_a]
    return _align_from_rewards(rewards, len(seq_a), len(seq_b))


def _cached_similarity(f: SimilarityFn):
    cache: dict = {}

    def fv(x, y) -> float:
        try:
            v = cache.get((x, y))
            if v is None:
                v = float(f(x, y))
                cache[(x, y)] = v
            return v
        except TypeError:
            return float(f(x, y))

    return fv


def _pairwise_matrix(f: SimilarityFn, flat_a: list, flat_b: list) -> np.ndarray:
    """Full |flat_a| x |flat_b| similarity table, chunked to bound memory."""
    pw = getattr(f, "pairwise", None)
    if pw is None:
        fv = _cached_similarity(f)
        out = np.empty((len(flat_a), len(flat_b)))
        for i, x in enumerate(flat_a):
            row = out[i]
            for j, y in enumerate(flat_b):
                row[j] = fv(x, y)
        return out
    if len(flat_a) * len(flat_b) <= _PAIRWISE_CHUNK:
        return np.asarray(pw(flat_a, flat_b), dtype=float)
    out = np.empty((len(flat_a), len(flat_b)))
    step = max(1, _PAIRWISE_CHUNK // max(1, len(flat_b)))
    for start in range(0, len(flat_a), step):
        out[start:start + step] = pw(flat_a[start:start + step], flat_b)
    return out


def _batched_dp(rewards: np.ndarray) -> np.ndarray:
    """Alignment DP scores for a batch of reward matrices, shape (P, n, m).

    Same recurrence as _align_from_rewards, vectorized over the batch axis.
    The inner maximum over a row prefix is a running max, so each DP row
    reduces to one accumulate call.
    """
    p, n, m = rewards.shape
    prev = np.zeros((p, m + 1))
    for j in range(n):
        t = np.maximum(prev[:, 1:], prev[:, :-1] + rewards[:, j, :])
        np.maximum.accumulate(t, axis=1, out=t)
        prev[:, 1:] = t
    return prev[:, m].copy()


def _phase_rewards_py(ea, eb, fv, outer_a, outer_b, inner_a, inner_b, rows_outer):
    """Outer-phase reward matrix in pure Python.

    rows_outer=True pairs rows of A with rows of B (inner DP over columns);
    False pairs columns (inner DP over rows).
    """
    rewards = [[0.0] * outer_b for _ in range(outer_a)]
    for oa in range(outer_a):
        for ob in range(outer_b):
            prev = [0.0] * (inner_b + 1)
            for ia in range(inner_a):
                x = ea[oa][ia] if rows_outer else ea[ia][oa]
                cur = [0.0] * (inner_b + 1)
                for ib in range(inner_b):
                    y = eb[ob][ib] if rows_outer else eb[ib][ob]
                    v = prev[ib] + fv(x, y)
                    c = cur[ib]
                    pr = prev[ib + 1]
                    cur[ib + 1] = v if (v >= c and v >= pr) else (c if c >= pr else pr)
                prev = cur
            rewards[oa][ob] = prev[inner_b]
    return rewards


def factored_2dmss(a, b, f: SimilarityFn) -> AlignmentResult:
    """Factored most-similar-substructure alignment of two matrices.

    Rows and columns are aligned independently: for each dimension, an
    outer alignment DP runs over the sequence of rows (or columns), with
    the reward for pairing two of them being the score of an inner
    alignment DP over their entries. min(row score, column score) is an
    upper bound on the true optimum; applying both selections jointly
    induces a real substructure pair whose similarity sum is the lower
    bound.

    Accepts PropertyMatrix or plain nested sequences. Raises
    KindMismatchError for property matrices of different kinds.
    """
    _check_kinds(a, b)
    ea, eb = _entries(a), _entries(b)
    ma, na = _dims(ea)
    mb, nb = _dims(eb)
    if ma * na == 0 or mb * nb == 0:
        return AlignmentResult(0.0, 0.0, (), (), (), ())

    total = ma * na * mb * nb
    if total > _NUMPY_CUTOVER:
        flat_a = [e for row in ea for e in row]
        flat_b = [e for row in eb for e in row]
        table = _pairwise_matrix(f, flat_a, flat_b).reshape(ma, na, mb, nb)
        row_rewards = _batched_dp(
            np.ascontiguousarray(table.transpose(0, 2, 1, 3)).reshape(ma * mb, na, nb)
        ).reshape(ma, mb)
        col_rewards = _batched_dp(
            np.ascontiguousarray(table.transpose(1, 3, 0, 2)).reshape(na * nb, ma, mb)
        ).reshape(na, nb)
        s_rows, row_pairs = _align_from_rewards(row_rewards.tolist(), ma, mb)
        s_cols, col_pairs = _align_from_rewards(col_rewards.tolist(), na, nb)
        rows_a = tuple(p[0] for p in row_pairs)
        rows_b = tuple(p[1] for p in row_pairs)
        cols_a = tuple(p[0] for p in col_pairs)
        cols_b = tuple(p[1] for p in col_pairs)
        terms = [
            float(table[ra, ca, rb, cb])
            for ra, rb in zip(rows_a, rows_b)
            for ca, cb in zip(cols_a, cols_b)
        ]
    else:
        fv = _cached_similarity(f)
        row_rewards = _phase_rewards_py(ea, eb, fv, ma, mb, na, nb, rows_outer=True)
        col_rewards = _phase_rewards_py(ea, eb, fv, na, nb, ma, mb, rows_outer=False)
        s_rows, row_pairs = _align_from_rewards(row_rewards, ma, mb)
        s_cols, col_pairs = _align_from_rewards(col_rewards, na, nb)
        rows_a = tuple(p[0] for p in row_pairs)
        rows_b = tuple(p[1] for p in row_pairs)
        cols_a = tuple(p[0] for p in col_pairs)
        cols_b = tuple(p[1] for p in col_pairs)
        terms = [
            fv(ea[ra][ca], eb[rb][cb])
            for ra, rb in zip(rows_a, rows_b)
            for ca, cb in zip(cols_a, cols_b)
        ]

    # fsum makes the bound independent of traversal order, so transposing
    # both inputs changes nothing, not even the last bit.
    lower = math.fsum(terms)
    upper = min(s_rows, s_cols)
    return AlignmentResult(lower, upper, rows_a, rows_b, cols_a, cols_b)


def exact_2dmss(a, b, f: SimilarityFn, limit: int = 4) -> float:
    """Exact most-similar-substructure score by full enumeration.

    Enumerates every pair of equal-length row subsequences and, for each,
    every pair of equal-length column subsequences, summing pointwise
    similarities. Exponential; any dimension above ``limit`` raises
    TooLargeError. Kept deliberately literal so it stays independent of
    the DP machinery it is used to check.
    """
    _check_kinds(a, b)
    ea, eb = _entries(a), _entries(b)
    ma, na = _dims(ea)
    mb, nb = _dims(eb)
    for d in (ma, na, mb, nb):
        if d > limit:
            raise TooLargeError(f"dimension {d} exceeds exact-search limit {limit}")
    if ma * na == 0 or mb * nb == 0:
        return 0.0

    fv = _cached_similarity(f)
    table = [
        [[[fv(ea[i][j], eb[k][l]) for l in range(nb)] for k in range(mb)]
         for j in range(na)]
        for i in range(ma)
    ]
    col_choices = [
        (c1, c2)
        for c in range(1, min(na, nb) + 1)
        for c1 in combinations(range(na), c)
        for c2 in combinations(range(nb), c)
    ]
    best = 0.0
    for r in range(1, min(ma, mb) + 1):
        for r1 in combinations(range(ma), r):
            for r2 in combinations(range(mb), r):
                rows = [table[i] for i in r1]
                for c1, c2 in col_choices:
                    s = 0.0
                    for p in range(r):
                        row = rows[p]
                        k = r2[p]
                        for q in range(len(c1)):
                            s += row[c1[q]][k][c2[q]]
                    if s > best:
                        best = s
    return best


def similarity_scores(a, b, f: SimilarityFn) -> Score:
    """F-score, precision and recall of the factored alignment.

    With L the lower bound, fscore = 2L / (|A| + |B|), precision = L / |B|,
    recall = L / |A|; A is the reference side. Two empty matrices score
    (1, 1, 1); exactly one empty scores (0, 0, 0).
    """
    _check_kinds(a, b)
    ea, eb = _entries(a), _entries(b)
    ma, na = _dims(ea)
    mb, nb = _dims(eb)
    size_a = ma * na
    size_b = mb * nb
    if size_a == 0 and size_b == 0:
        return Score(1.0, 1.0, 1.0)
    if size_a == 0 or size_b == 0:
        return Score(0.0, 0.0, 0.0)
    lower = factored_2dmss(ea, eb, f).lower_bound
    return Score(
        2.0 * lower / (size_a + size_b),
        lower / size_b,
        lower / size_a,
    )
