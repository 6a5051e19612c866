#!/usr/bin/env python
# -*- coding: utf-8 -*-

from typing import Any, Callable, Iterable, List, TypeVar

import dask
from dask import delayed

###############################################################################

T = TypeVar("T")

SCHEDULERS = ("synchronous", "threads", "processes")
DEFAULT_SCHEDULER = "threads"

###############################################################################


def parallel_map(
    func: Callable[..., T],
    items: Iterable[Any],
    scheduler: str = DEFAULT_SCHEDULER,
    **kwargs: Any,
) -> List[T]:
    """
    Apply `func` to every item through dask and return results in input order.

    Parameters
    ----------
    func: Callable[..., T]
        Function of one item (plus shared keyword arguments).
    items: Iterable[Any]
        Work items, typically circuit seeds in ascending order.
    scheduler: str
        Any dask scheduler name: "synchronous", "threads" or "processes".
        Default: "threads"
    kwargs: Any
        Shared keyword arguments forwarded to every call.

    Returns
    -------
    results: List[T]
        One result per item, in the order the items were given.
    """
    if scheduler not in SCHEDULERS:
        raise ValueError(
            f"Unknown scheduler '{scheduler}'. Choose one of: {SCHEDULERS}."
        )

    tasks = [delayed(func)(item, **kwargs) for item in items]
    if len(tasks) == 0:
        return []

    return list(dask.compute(*tasks, scheduler=scheduler))
