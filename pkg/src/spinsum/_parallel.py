"""Ordered parallel mapping with bounded in-flight work.

Results come back in input order regardless of completion order, so output
written from this generator is byte-identical to the serial run.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Iterator, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def imap_ordered(
    fn: Callable[[T], R], items: Iterable[T], jobs: int, *, window_factor: int = 4
) -> Iterator[R]:
    if jobs <= 1:
        yield from map(fn, items)
        return
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        window = jobs * window_factor
        pending: deque = deque()
        for item in items:
            pending.append(executor.submit(fn, item))
            if len(pending) >= window:
                yield pending.popleft().result()
        while pending:
            yield pending.popleft().result()
