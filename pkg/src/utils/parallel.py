"""Order-preserving worker pool for embarrassingly parallel stages."""
import contextvars
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Sequence[T], threads: int = 1) -> list[R]:
    """``[fn(x) for x in items]``, spread over ``threads`` workers sharing the caller's context."""
    if threads <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    ctx = contextvars.copy_context()

    def call(item: T) -> R:
        return ctx.copy().run(fn, item)

    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(call, items))
