from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "FLUXLDE_THREADS"


def worker_count(requested: int | None = None) -> int:
    if requested is None:
        env = os.environ.get(ENV_THREADS)
        requested = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(requested))


def ordered_map(fn, items, workers: int | None = None) -> list:
    """``[fn(x) for x in items]``, fanned out over threads; output order follows input."""
    items = list(items)
    n = min(worker_count(workers), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
