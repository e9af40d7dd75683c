"""Tests for sync utilities."""

from __future__ import annotations

import threading
import time

import anyio
import pytest

from symlab._utils._sync import map_threaded, run_blocking, run_sync


def sync_function(x: int, y: int = 10) -> int:
    return x + y


async def async_function(x: int, y: int = 10) -> int:
    await anyio.sleep(0.01)
    return x + y


@pytest.mark.anyio
async def test_run_sync_with_kwargs() -> None:
    assert await run_sync(sync_function, 5, y=15) == 20


@pytest.mark.anyio
async def test_run_sync_uses_worker_thread() -> None:
    main = threading.get_ident()
    assert await run_sync(threading.get_ident) != main


@pytest.mark.anyio
async def test_map_threaded_order_is_independent_of_scheduling() -> None:
    def slow_square(x: int) -> int:
        time.sleep(0.001 * (5 - x))
        return x * x

    assert await map_threaded(slow_square, [1, 2, 3, 4], max_workers=4) == [1, 4, 9, 16]
    assert await map_threaded(slow_square, [1, 2, 3, 4], max_workers=1) == [1, 4, 9, 16]


@pytest.mark.anyio
async def test_map_threaded_respects_limit() -> None:
    lock = threading.Lock()
    active = 0
    peak = 0

    def tracked(x: int) -> int:
        nonlocal active, peak
        with lock:
            active += 1
            peak = max(peak, active)
        time.sleep(0.01)
        with lock:
            active -= 1
        return x

    await map_threaded(tracked, list(range(8)), max_workers=2)
    assert peak <= 2


@pytest.mark.anyio
async def test_map_threaded_empty() -> None:
    assert await map_threaded(sync_function, []) == []


def test_run_blocking() -> None:
    assert run_blocking(async_function, 5, y=1) == 6
