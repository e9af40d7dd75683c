from __future__ import annotations

from functools import partial
from typing import TYPE_CHECKING, Any, TypeVar, cast

import anyio
from anyio import CapacityLimiter, create_task_group
from anyio.to_thread import run_sync as any_io_run_sync

if TYPE_CHECKING:  # pragma: no cover
    from collections.abc import Awaitable, Callable, Sequence

from typing import ParamSpec

T = TypeVar("T")
P = ParamSpec("P")


async def run_sync(sync_fn: Callable[P, T], *args: P.args, **kwargs: P.kwargs) -> T:
    """Run a synchronous function in a worker thread.

    Args:
        sync_fn: The synchronous function to run.
        *args: The positional arguments to pass to the function.
        **kwargs: The keyword arguments to pass to the function.

    Returns:
        The result of the synchronous function.
    """
    if kwargs:
        handler = partial(sync_fn, **kwargs)
        return cast("T", await any_io_run_sync(handler, *args, abandon_on_cancel=True))  # pyright: ignore [reportCallIssue]
    return cast("T", await any_io_run_sync(sync_fn, *args, abandon_on_cancel=True))  # pyright: ignore [reportCallIssue]


async def map_threaded(fn: Callable[[T], Any], items: Sequence[T], max_workers: int | None = None) -> list[Any]:
    """Apply a blocking function to every item in worker threads.

    At most ``max_workers`` calls run at once. Results are stored by index, so the output order never
    depends on scheduling.

    Args:
        fn: The blocking function.
        items: The inputs.
        max_workers: Concurrency limit, defaults to the number of items.

    Returns:
        ``[fn(item) for item in items]``.
    """
    if not items:
        return []
    limiter = CapacityLimiter(max_workers or len(items))
    results: list[Any] = [None] * len(items)

    async def run_item(index: int, item: T) -> None:
        results[index] = await any_io_run_sync(fn, item, limiter=limiter)

    async with create_task_group() as tg:
        for i, item in enumerate(items):
            tg.start_soon(run_item, i, item)

    return results


def run_blocking(async_fn: Callable[..., Awaitable[T]], *args: Any, **kwargs: Any) -> T:
    """Run a coroutine function to completion from synchronous code."""
    return cast("T", anyio.run(partial(async_fn, **kwargs), *args))
