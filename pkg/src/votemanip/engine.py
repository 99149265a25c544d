"""Deterministic chunked enumeration.

Exact counts over profile-index ranges are split into contiguous chunks and
reduced in chunk order, so results are identical for every task count. When
``tasks > 1`` chunks run in a process pool; if no pool can be created the
chunks run sequentially, which produces the same output by construction.
"""
from __future__ import annotations

import concurrent.futures
import os
import sys

# Fixed Monte Carlo block size: the sampler always splits work into blocks of
# this many draws so that reports never depend on the task count.
SAMPLE_BLOCK = 4096

ENV_TASKS = "MANIP_TASKS"


def effective_tasks(tasks: int | None) -> int:
    """Resolve a task count, honoring the MANIP_TASKS override."""
    env = os.environ.get(ENV_TASKS)
    if env is not None:
        try:
            tasks = int(env)
        except ValueError as exc:
            raise ValueError(f"{ENV_TASKS} must be an integer, got {env!r}") from exc
    if tasks is None:
        tasks = 1
    if tasks < 1:
        raise ValueError("task count must be >= 1")
    return tasks


def split_ranges(total: int, parts: int) -> list[tuple[int, int]]:
    """Split range(total) into at most ``parts`` contiguous near-even pieces."""
    parts = max(1, min(parts, total)) if total else 1
    base, extra = divmod(total, parts)
    ranges = []
    start = 0
    for p in range(parts):
        stop = start + base + (1 if p < extra else 0)
        ranges.append((start, stop))
        start = stop
    return ranges


def map_chunks(worker, chunk_args: list, tasks: int = 1) -> list:
    """Apply ``worker`` to each args tuple, returning results in input order."""
    if tasks <= 1 or len(chunk_args) <= 1:
        return [worker(*args) for args in chunk_args]
    try:
        with concurrent.futures.ProcessPoolExecutor(max_workers=tasks) as pool:
            futures = [pool.submit(worker, *args) for args in chunk_args]
            return [fut.result() for fut in futures]
    except (OSError, PermissionError) as exc:  # no pool available in this env
        print(f"warning: process pool unavailable ({exc}); running chunks inline",
              file=sys.stderr)
        return [worker(*args) for args in chunk_args]


def derive_stream_seed(seed: int, stream: int) -> int:
    """Independent per-stream seed; collision-free for 64-bit inputs."""
    return seed * (1 << 64) + stream
