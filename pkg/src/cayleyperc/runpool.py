"""Deterministic trial-level parallelism.

Trials are independent pure functions of their index; results are collected
into a list ordered by trial index, so the aggregate never depends on the
schedule.  The worker count comes from the CAYLEYPERC_THREADS environment
variable (default: available cores).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "CAYLEYPERC_THREADS"


def thread_count() -> int:
    val = os.environ.get(THREADS_ENV, "")
    if val.strip():
        n = int(val)
        if n < 1:
            raise ValueError(f"{THREADS_ENV} must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


def map_trials(fn, trials: int):
    """[fn(0), fn(1), ..., fn(trials-1)], in index order regardless of schedule."""
    n = thread_count()
    if n == 1 or trials <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, range(trials)))
