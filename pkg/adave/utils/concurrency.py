# adave/utils/concurrency.py

"""
Worker-pool helpers.

Numeric work (numpy releases the GIL inside BLAS calls) is fanned out to
threads through an asyncio semaphore; callers stay synchronous.
"""

import asyncio
import os
from typing import Any, Callable, Coroutine, Iterable, List, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def run_async(coro: Coroutine[Any, Any, T]) -> T:
    """
    Run an async coroutine in a synchronous context.

    Raises:
        RuntimeError: If called from inside a running event loop
    """
    try:
        asyncio.get_running_loop()
    except RuntimeError:
        return asyncio.run(coro)
    coro.close()
    raise RuntimeError(
        "Cannot use run_async() from within an async context. Use 'await' instead."
    )


async def gather_with_concurrency(n: int, *tasks: Coroutine) -> list:
    """
    Run coroutines with a maximum concurrency limit.

    Args:
        n: Maximum number of concurrent tasks
        *tasks: Coroutines to run

    Returns:
        List of results in the same order as tasks
    """
    semaphore = asyncio.Semaphore(n)

    async def bounded_task(coro):
        async with semaphore:
            return await coro

    return await asyncio.gather(*(bounded_task(task) for task in tasks))


def resolve_workers(workers: Optional[int]) -> int:
    """Default worker count is the available parallelism."""
    if workers is None or workers <= 0:
        return os.cpu_count() or 1
    return workers


def map_with_workers(
    fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = 1
) -> List[R]:
    """
    Apply fn to every item on up to `workers` threads, preserving input order.

    With one worker the items are processed inline, in order.
    """
    items = list(items)
    n = resolve_workers(workers)
    if n == 1 or len(items) <= 1:
        return [fn(item) for item in items]

    async def _run():
        return await gather_with_concurrency(
            n, *(asyncio.to_thread(fn, item) for item in items)
        )

    return run_async(_run())
