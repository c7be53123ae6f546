"""Deterministic batching of Monte Carlo work over a thread pool."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, TypeVar

from fracwalk.log import get_logger
from fracwalk.variates.rng import RngStream

logger = get_logger(__name__)

T = TypeVar("T")

BATCH_SIZE = 10_000


def batch_bounds(n_items: int, batch_size: int = BATCH_SIZE) -> List[range]:
    """Split ``range(n_items)`` into consecutive batches of at most ``batch_size``."""
    return [range(i, min(i + batch_size, n_items)) for i in range(0, n_items, batch_size)]


def run_batches(
    fn: Callable[[int, RngStream], T],
    n_items: int,
    stream: RngStream,
    threads: int = 1,
    batch_size: int = BATCH_SIZE,
) -> List[T]:
    """Run ``fn(count, stream.child(i))`` for every batch i and return results in order.

    Batch i always draws from ``stream.child(i)``, so the results do not depend on
    ``threads``.
    """
    batches = batch_bounds(n_items, batch_size)
    logger.info("%d items in %d batches on %d threads", n_items, len(batches), threads)
    jobs = [(len(b), stream.child(i)) for i, b in enumerate(batches)]
    if threads <= 1 or len(jobs) <= 1:
        return [fn(count, child) for count, child in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))
