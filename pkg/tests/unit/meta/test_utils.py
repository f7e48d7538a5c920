#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Test shared utilities."""

import os

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from planefinder.control import BackwardMode
from planefinder.meta.utils import child_rng, fan_out, read_pgm, thread_count, write_pgm


def _square(x: int) -> int:
    return x * x


def test_thread_count_from_environment(monkeypatch) -> None:
    monkeypatch.setenv("PLANEFINDER_NUM_THREADS", "3")
    assert thread_count() == 3


@pytest.mark.parametrize("value", ["0", "lots"])
def test_thread_count_ignores_bad_values(monkeypatch, value) -> None:
    monkeypatch.setenv("PLANEFINDER_NUM_THREADS", value)
    assert thread_count() == (os.cpu_count() or 1)


def test_child_streams_are_keyed() -> None:
    a = child_rng(5, "case", 1).integers(1 << 30, size=4)
    assert_array_equal(a, child_rng(5, "case", 1).integers(1 << 30, size=4))
    assert not np.array_equal(a, child_rng(5, "case", 2).integers(1 << 30, size=4))
    assert not np.array_equal(a, child_rng(6, "case", 1).integers(1 << 30, size=4))


def test_fan_out_keeps_order() -> None:
    assert fan_out(_square, range(10)) == [x * x for x in range(10)]
    assert fan_out(_square, range(10), workers=2, chunksize=3) == [x * x for x in range(10)]


def test_pgm_levels(tmp_path) -> None:
    image = np.array([[0.0, 0.5], [1.0, 2.0]])
    path = tmp_path / "sub" / "image.pgm"
    write_pgm(path, image)
    assert path.read_bytes().startswith(b"P5")
    back = read_pgm(path)
    assert back.dtype == np.float32
    assert_array_equal(np.rint(back * 255), [[0, 128], [255, 255]])


def test_enum_parsing() -> None:
    assert BackwardMode.parse("GUIDED") is BackwardMode.GUIDED
    assert BackwardMode.parse(BackwardMode.PLAIN) is BackwardMode.PLAIN
    assert BackwardMode.items() == [("PLAIN", "plain"), ("GUIDED", "guided")]
    with pytest.raises(ValueError, match="plain, guided"):
        BackwardMode.parse("deconvnet")
