"""Ordered process pool for experiment work items."""
from __future__ import annotations

from multiprocessing import get_context
from typing import Callable, Iterable, Iterator, Optional, TypeVar

from src.core.config import worker_count

T = TypeVar("T")
R = TypeVar("R")


def imap_ordered(
    worker: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None
) -> Iterator[R]:
    """Results in item order whatever the pool size; one process runs inline."""
    items = list(items)
    workers = min(workers or worker_count(), len(items))
    if workers <= 1:
        for item in items:
            yield worker(item)
        return
    ctx = get_context("spawn")
    with ctx.Pool(processes=workers) as pool:
        yield from pool.imap(worker, items, chunksize=1)
