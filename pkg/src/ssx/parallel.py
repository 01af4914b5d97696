"""Deterministic per-sample RNG streams and an ordered parallel map."""
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def worker_count():
    """Workers allowed by ``SSX_THREADS`` (default 1), capped by the CPU count."""
    try:
        requested = int(os.environ.get("SSX_THREADS", "1"))
    except ValueError:
        requested = 1
    return max(1, min(requested, os.cpu_count() or 1))


def sample_rng(seed, index, stream=0):
    """Generator for sample ``index`` of ``stream``; independent of worker layout."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(stream, index)))


def ordered_map(func, items, workers=None):
    """``[func(x) for x in items]``, possibly threaded, always in input order."""
    items = list(items)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) < 2:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
