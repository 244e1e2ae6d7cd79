import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grits import (
    Box,
    exact_match,
    iou,
    lcs_length,
    location_similarity,
    normalized_lcs_similarity,
)
from oracles import brute_lcs_length

short_text = st.text(alphabet="abcd", max_size=8)


def boxes(min_extent=0):
    def build(x1, y1, w, h):
        return Box(x1, y1, x1 + w, y1 + h)

    coord = st.integers(-5, 5).map(float)
    extent = st.integers(min_extent, 6).map(float)
    return st.builds(build, coord, coord, extent, extent)


def test_exact_match_values():
    assert exact_match("a", "a") == 1.0
    assert exact_match("a", "b") == 0.0
    assert exact_match(Box(0, 0, 1, 1), Box(0, 0, 1, 1)) == 1.0
    assert exact_match(Box(0, 0, 1, 1), Box(0, 0, 1, 2)) == 0.0


def test_iou_known_values():
    assert iou(Box(0, 0, 1, 1), Box(0, 0, 1, 1)) == 1.0
    assert iou(Box(0, 0, 2, 2), Box(1, 1, 3, 3)) == 1.0 / 7.0
    # rowspan-2 topology box against a unit box
    assert iou(Box(0, 0, 1, 2), Box(0, 0, 1, 1)) == 0.5
    assert iou(Box(0, 0, 1, 1), Box(5, 5, 6, 6)) == 0.0


def test_iou_zero_area_conventions():
    z = Box(1, 1, 1, 1)
    assert iou(z, z) == 1.0  # identical boxes always match
    assert iou(z, Box(0, 0, 2, 2)) == 0.0
    assert iou(Box(0, 0, 2, 2), z) == 0.0
    assert iou(Box(1, 1, 1, 1), Box(2, 2, 2, 2)) == 0.0


@given(boxes(), boxes())
def test_iou_symmetric_and_bounded(a, b):
    v = iou(a, b)
    assert 0.0 <= v <= 1.0
    assert v == iou(b, a)


@given(boxes(min_extent=1), boxes(min_extent=1))
def test_iou_is_one_only_for_equal_positive_boxes(a, b):
    assert (iou(a, b) == 1.0) == (a == b)


def test_lcs_known_values():
    assert lcs_length("ABCBDAB", "BDCABA") == 4
    assert lcs_length("same", "same") == 4
    assert lcs_length("", "x") == 0
    assert lcs_length("x", "") == 0


def test_lcs_matches_exhaustive_enumeration():
    rng = random.Random(0)
    for _ in range(300):
        s = "".join(rng.choice("abc") for _ in range(rng.randint(0, 7)))
        t = "".join(rng.choice("abc") for _ in range(rng.randint(0, 7)))
        assert lcs_length(s, t) == brute_lcs_length(s, t), (s, t)


@given(short_text, short_text)
def test_lcs_symmetric_and_bounded(s, t):
    v = lcs_length(s, t)
    assert v == lcs_length(t, s)
    assert 0 <= v <= min(len(s), len(t))


def test_normalized_lcs_known_values():
    assert normalized_lcs_similarity("abcd", "bcde") == 0.75
    assert normalized_lcs_similarity("", "") == 1.0  # blank matched to blank
    assert normalized_lcs_similarity("Group", "Group") == 1.0
    assert normalized_lcs_similarity("a", "") == 0.0


@given(short_text, short_text)
def test_normalized_lcs_properties(s, t):
    v = normalized_lcs_similarity(s, t)
    assert 0.0 <= v <= 1.0
    assert v == normalized_lcs_similarity(t, s)
    assert (v == 1.0) == (s == t)


@given(short_text, short_text)
def test_exact_match_never_exceeds_normalized_lcs(s, t):
    assert exact_match(s, t) <= normalized_lcs_similarity(s, t)


def test_location_similarity_absence_conventions():
    assert location_similarity(None, None) == 1.0
    assert location_similarity(None, Box(0, 0, 1, 1)) == 0.0
    assert location_similarity(Box(0, 0, 1, 1), None) == 0.0
    assert location_similarity(Box(0, 0, 2, 2), Box(1, 1, 3, 3)) == 1.0 / 7.0


def _pairwise_reference(f, items_a, items_b):
    out = np.zeros((len(items_a), len(items_b)))
    for i, a in enumerate(items_a):
        for j, b in enumerate(items_b):
            out[i, j] = f(a, b)
    return out


def test_iou_pairwise_matches_scalar_bitwise():
    rng = random.Random(5)
    pts = []
    for _ in range(40):
        x1, y1 = rng.uniform(-3, 3), rng.uniform(-3, 3)
        pts.append(Box(x1, y1, x1 + rng.uniform(0, 4), y1 + rng.uniform(0, 4)))
    pts += [Box(1, 1, 1, 1), Box(1, 1, 1, 1), Box(0, 0, 2, 2)]  # degenerate
    got = iou.pairwise(pts, pts)
    want = _pairwise_reference(iou, pts, pts)
    assert np.array_equal(got, want)


def test_normalized_lcs_pairwise_matches_scalar():
    rng = random.Random(6)
    words = ["".join(rng.choice("abc") for _ in range(rng.randint(0, 5)))
             for _ in range(25)]
    got = normalized_lcs_similarity.pairwise(words, words)
    want = _pairwise_reference(normalized_lcs_similarity, words, words)
    assert np.array_equal(got, want)


def test_exact_match_pairwise_matches_scalar():
    items = ["a", "b", "a", "", "ab"]
    got = exact_match.pairwise(items, items)
    want = _pairwise_reference(exact_match, items, items)
    assert np.array_equal(got, want)


def test_location_pairwise_handles_missing_boxes():
    items_a = [Box(0, 0, 2, 2), None, Box(1, 1, 3, 3)]
    items_b = [None, Box(1, 1, 3, 3)]
    got = location_similarity.pairwise(items_a, items_b)
    want = _pairwise_reference(location_similarity, items_a, items_b)
    assert np.array_equal(got, want)


def test_bulk_range_check():
    # 10^5 random box pairs stay inside [0, 1]
    rng = np.random.default_rng(12)
    n = 320
    x1 = rng.uniform(-5, 5, n)
    y1 = rng.uniform(-5, 5, n)
    pts = [Box(a, b, a + w, b + h)
           for a, b, w, h in zip(x1, y1, rng.uniform(0, 5, n), rng.uniform(0, 5, n))]
    m = iou.pairwise(pts, pts)
    assert m.size >= 100_000
    assert np.all(m >= 0.0) and np.all(m <= 1.0)
    assert np.array_equal(np.diag(m), np.ones(n))


@settings(max_examples=30)
@given(st.lists(short_text, max_size=6), st.lists(short_text, max_size=6))
def test_nlcs_pairwise_matches_scalar_property(ws_a, ws_b):
    got = normalized_lcs_similarity.pairwise(ws_a, ws_b)
    want = _pairwise_reference(normalized_lcs_similarity, ws_a, ws_b)
    assert got.shape == (len(ws_a), len(ws_b))
    assert np.array_equal(got, want)
