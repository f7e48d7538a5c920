#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Fan work out over a process pool."""

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from .thread_count import thread_count

_T = TypeVar("_T")
_R = TypeVar("_R")


def fan_out(
    func: Callable[[_T], _R],
    items: Iterable[_T],
    workers: Optional[int] = 1,
    chunksize: int = 8,
) -> List[_R]:
    """Map ``func`` over ``items`` preserving order.

    Args:
        func (Callable): Picklable callable applied to each item.
        items (Iterable): Work items.
        workers (Optional[int]): Number of worker processes. 1 runs serially in
            the calling process; None uses thread_count() (Default: 1).
        chunksize (int): Items handed to a worker at a time (Default: 8).

    Returns:
        (List): Results in item order.
    """
    workers = thread_count() if workers is None else workers
    if workers <= 1:
        return [func(item) for item in items]

    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=chunksize))
