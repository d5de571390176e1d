"""Deterministic chunked execution over thread workers."""

import os
from concurrent.futures import ThreadPoolExecutor


def chunks(total: int, size: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]


def run_chunks(work, spans, threads: int | None = None) -> list:
    """Apply ``work(lo, hi)`` to every span and return results in span order.

    Kernels release the GIL, so threads give real parallelism; merging in span
    order keeps results independent of ``threads``.
    """
    if threads is None:
        threads = os.cpu_count() or 1
    if threads <= 1 or len(spans) <= 1:
        return [work(lo, hi) for lo, hi in spans]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda span: work(*span), spans))
