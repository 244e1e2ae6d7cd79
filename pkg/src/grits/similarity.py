"""Similarity functions between property-matrix entries.

All functions map a pair of entries to [0, 1], are symmetric, and give 1
for identical entries. Each public function carries a ``pairwise``
attribute computing the full similarity matrix between two entry
sequences; the alignment code uses it as a fast path but never requires
it, so any plain callable works as a similarity function.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .errors import MalformedBoxError
from .table import Box, BoxLike


def exact_match(a, b) -> float:
    """1.0 if the entries compare equal, else 0.0."""
    return 1.0 if a == b else 0.0


def _exact_match_pairwise(seq_a: Sequence, seq_b: Sequence) -> np.ndarray:
    codes: dict = {}
    ia = np.array([codes.setdefault(x, len(codes)) for x in seq_a])
    ib = np.array([codes.setdefault(x, len(codes)) for x in seq_b])
    return (ia[:, None] == ib[None, :]).astype(float)


exact_match.pairwise = _exact_match_pairwise


def iou(a: BoxLike, b: BoxLike) -> float:
    """Intersection over union of two boxes.

    Identical zero-area boxes score 1; otherwise any zero-area operand
    scores 0. Raises MalformedBoxError for inverted boxes.
    """
    ax1, ay1, ax2, ay2 = a
    bx1, by1, bx2, by2 = b
    if ax2 < ax1 or ay2 < ay1 or bx2 < bx1 or by2 < by1:
        raise MalformedBoxError(f"inverted box in iou: {tuple(a)}, {tuple(b)}")
    if (ax1, ay1, ax2, ay2) == (bx1, by1, bx2, by2):
        return 1.0
    area_a = (ax2 - ax1) * (ay2 - ay1)
    area_b = (bx2 - bx1) * (by2 - by1)
    if area_a <= 0 or area_b <= 0:
        return 0.0
    ix = min(ax2, bx2) - max(ax1, bx1)
    iy = min(ay2, by2) - max(ay1, by1)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    return inter / (area_a + area_b - inter)


def _iou_pairwise_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """IoU matrix between (n, 4) and (m, 4) box arrays.

    Keeps the exact arithmetic of the scalar iou so both paths agree
    bitwise.
    """
    ax1, ay1, ax2, ay2 = (a[:, k, None] for k in range(4))
    bx1, by1, bx2, by2 = (b[None, :, k] for k in range(4))
    area_a = (ax2 - ax1) * (ay2 - ay1)
    area_b = (bx2 - bx1) * (by2 - by1)
    ix = np.minimum(ax2, bx2) - np.maximum(ax1, bx1)
    iy = np.minimum(ay2, by2) - np.maximum(ay1, by1)
    pos = (ix > 0) & (iy > 0)
    inter = np.where(pos, ix, 0.0) * np.where(pos, iy, 0.0)
    union = area_a + area_b - inter
    out = np.where(
        pos & (area_a > 0) & (area_b > 0),
        inter / np.where(union > 0, union, 1.0),
        0.0,
    )
    same = (
        (ax1 == bx1) & (ay1 == by1) & (ax2 == bx2) & (ay2 == by2)
    )
    return np.where(same, 1.0, out)


def _iou_pairwise(seq_a: Sequence[BoxLike], seq_b: Sequence[BoxLike]) -> np.ndarray:
    a = np.asarray([tuple(x) for x in seq_a], dtype=float).reshape(-1, 4)
    b = np.asarray([tuple(x) for x in seq_b], dtype=float).reshape(-1, 4)
    return _iou_pairwise_arrays(a, b)


iou.pairwise = _iou_pairwise


def location_similarity(a: Optional[BoxLike], b: Optional[BoxLike]) -> float:
    """IoU extended to absent boxes: both absent -> 1, one absent -> 0."""
    if a is None and b is None:
        return 1.0
    if a is None or b is None:
        return 0.0
    return iou(a, b)


def _location_pairwise(seq_a, seq_b) -> np.ndarray:
    dummy = (0.0, 0.0, 0.0, 0.0)
    a = np.asarray([dummy if x is None else tuple(x) for x in seq_a],
                   dtype=float).reshape(-1, 4)
    b = np.asarray([dummy if x is None else tuple(x) for x in seq_b],
                   dtype=float).reshape(-1, 4)
    none_a = np.array([x is None for x in seq_a], dtype=bool)
    none_b = np.array([x is None for x in seq_b], dtype=bool)
    out = _iou_pairwise_arrays(a, b)
    both = none_a[:, None] & none_b[None, :]
    either = none_a[:, None] | none_b[None, :]
    out = np.where(either, 0.0, out)
    return np.where(both, 1.0, out)


location_similarity.pairwise = _location_pairwise


def lcs_length(s: str, t: str) -> int:
    """Length of the longest common subsequence of two strings."""
    if not s or not t:
        return 0
    if len(t) > len(s):
        s, t = t, s
    prev = [0] * (len(t) + 1)
    for ch in s:
        cur = [0] * (len(t) + 1)
        for j, tj in enumerate(t):
            if ch == tj:
                cur[j + 1] = prev[j] + 1
            else:
                cur[j + 1] = max(prev[j + 1], cur[j])
        prev = cur
    return prev[-1]


def normalized_lcs_similarity(s: str, t: str) -> float:
    """2 * LCS(s, t) / (len(s) + len(t)); two empty strings score 1."""
    if not s and not t:
        return 1.0
    if not s or not t:
        return 0.0
    return 2.0 * lcs_length(s, t) / (len(s) + len(t))


def _nlcs_pairwise(seq_a: Sequence[str], seq_b: Sequence[str]) -> np.ndarray:
    uniq_a = sorted(set(seq_a))
    uniq_b = sorted(set(seq_b))
    table = {
        (ua, ub): normalized_lcs_similarity(ua, ub)
        for ua in uniq_a
        for ub in uniq_b
    }
    out = np.empty((len(seq_a), len(seq_b)))
    for i, sa in enumerate(seq_a):
        for j, sb in enumerate(seq_b):
            out[i, j] = table[(sa, sb)]
    return out


normalized_lcs_similarity.pairwise = _nlcs_pairwise
