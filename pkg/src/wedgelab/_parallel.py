"""Deterministic chunked parallel map shared by the samplers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

CHUNK_SIZE = 4096


def thread_count():
    """Worker cap from WEDGELAB_THREADS (positive integer), else the CPU count."""
    raw = os.environ.get("WEDGELAB_THREADS")
    if raw is None:
        return max(1, min(8, os.cpu_count() or 1))
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"WEDGELAB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"WEDGELAB_THREADS must be a positive integer, got {raw!r}")
    return n


def chunked_map(fn, count, seed, chunk_size=CHUNK_SIZE):
    """Call ``fn(rng, start, size)`` on fixed-size chunks and return results in order.

    Chunk ``i`` always draws from child ``i`` of ``SeedSequence(seed)``, so the
    output depends only on (count, seed) and not on the worker count.
    """
    n_chunks = -(-count // chunk_size)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    jobs = [(np.random.default_rng(children[i]), i * chunk_size,
             min(chunk_size, count - i * chunk_size)) for i in range(n_chunks)]
    workers = min(thread_count(), max(1, n_chunks))
    if workers == 1:
        return [fn(*job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))
