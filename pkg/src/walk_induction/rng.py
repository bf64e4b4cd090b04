"""Counter-based random streams keyed by (seed, chunk id)."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

T = TypeVar("T")

CHUNK = 1 << 14
WORKERS_ENV = "WALK_INDUCTION_WORKERS"


def stream(seed: int, chunk: int) -> np.random.Generator:
    """Independent Philox stream for one chunk of samples."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chunk])))


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def chunked(total: int, seed: int, fn: Callable[[int, np.random.Generator], T],
            workers: int | None = None) -> list[T]:
    """Run ``fn(size, rng)`` over fixed-size chunks; results come back in chunk order.

    Streams are tied to chunk ids rather than worker ids, so the output does
    not depend on the pool size.
    """
    sizes = [min(CHUNK, total - start) for start in range(0, total, CHUNK)]
    jobs = [(size, stream(seed, c)) for c, size in enumerate(sizes)]
    workers = workers or default_workers()
    if workers == 1 or len(jobs) <= 1:
        return [fn(size, rng) for size, rng in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))
