from __future__ import annotations

import numpy as np

from symlab._utils._seeding import component_key, derive_rng


def test_component_key_is_stable() -> None:
    assert component_key("break_start") == component_key("break_start")
    assert component_key("break_start") != component_key("preserve_start")
    assert 0 <= component_key("x") < 2**32


def test_same_stream_for_same_key() -> None:
    first = derive_rng(7, "break_start", 3).standard_normal(5)
    second = derive_rng(7, "break_start", 3).standard_normal(5)
    np.testing.assert_array_equal(first, second)


def test_streams_differ_by_seed_component_and_index() -> None:
    base = derive_rng(7, "break_start", 3).standard_normal(5)
    for rng in (
        derive_rng(8, "break_start", 3),
        derive_rng(7, "preserve_start", 3),
        derive_rng(7, "break_start", 4),
    ):
        assert not np.array_equal(base, rng.standard_normal(5))
