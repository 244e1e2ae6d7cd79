"""Shared plumbing: thread pool sizing and reproducible RNG derivation."""
from __future__ import annotations

import hashlib
import os
import random
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_DEFAULT_THREAD_CAP = 8


def thread_count() -> int:
    """Worker count for parallel sections; GRITS_THREADS overrides."""
    raw = os.environ.get("GRITS_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, min(_DEFAULT_THREAD_CAP, os.cpu_count() or 1))


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """map() across a thread pool, results in input order.

    Runs serially when the pool would have one worker, so output never
    depends on scheduling.
    """
    items = list(items)
    workers = thread_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def derived_rng(*parts) -> random.Random:
    """RNG seeded from a stable hash of the given parts.

    sha256 rather than hash() so results do not depend on
    PYTHONHASHSEED or the process.
    """
    digest = hashlib.sha256(
        "\x1f".join(str(p) for p in parts).encode("utf-8")
    ).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))
