"""
Thread-pool fan-out for independent experiment units (gates, sweep points).
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

import logging

from app.core.config import settings

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def map_ordered(func: Callable[[T], R], items: Iterable[T], max_workers: Optional[int] = None) -> List[R]:
    """
    Apply func to every item and return results in input order.

    Runs inline when one worker is configured so tracebacks stay simple;
    otherwise uses a ThreadPoolExecutor of WORKER_THREADS workers. The first
    exception raised by any item propagates.
    """
    items = list(items)
    workers = max(1, max_workers or settings.WORKER_THREADS)
    if workers == 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug(f"Running {len(items)} units on {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
