#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Test structure templates."""

import numpy as np
import pytest

from planefinder.control.options import BRIGHT_CLASSES, DARK_CLASSES, MIXED_CLASSES
from planefinder.localize import min_bbox
from planefinder.synth import TEMPLATES, polarity_group, template
from planefinder.synth.shapes import Ellipse, rasterise


def test_one_template_per_foreground_class() -> None:
    assert [t.class_id for t in TEMPLATES] == list(range(13))


@pytest.mark.parametrize("class_id", BRIGHT_CLASSES)
def test_bright_templates(class_id) -> None:
    bright, dark = template(class_id).polarity_areas()
    assert bright > 0 and dark == 0
    assert polarity_group(class_id) == "bright"


@pytest.mark.parametrize("class_id", DARK_CLASSES)
def test_dark_templates(class_id) -> None:
    bright, dark = template(class_id).polarity_areas()
    assert dark > 0 and bright == 0
    assert polarity_group(class_id) == "dark"


@pytest.mark.parametrize("class_id", MIXED_CLASSES)
def test_mixed_templates_are_mostly_bright(class_id) -> None:
    bright, dark = template(class_id).polarity_areas()
    assert dark > 0
    assert bright >= 2 * dark
    assert polarity_group(class_id) == "mixed"


@pytest.mark.parametrize("class_id", [-1, 13])
def test_background_has_no_template(class_id) -> None:
    with pytest.raises(ValueError):
        template(class_id)


def test_rasterised_rotation_turns_the_shape() -> None:
    grid = np.mgrid[0:41, 0:41].astype(np.float64)
    bar = Ellipse(0, 0, 3, 15)
    flat = rasterise(bar, (grid[0], grid[1]), 20, 20, 1.0, 0.0)
    upright = rasterise(bar, (grid[0], grid[1]), 20, 20, 1.0, 90.0)
    assert np.ptp(np.nonzero(flat)[1]) > np.ptp(np.nonzero(flat)[0])
    assert np.ptp(np.nonzero(upright)[0]) > np.ptp(np.nonzero(upright)[1])


@pytest.mark.parametrize("class_id", [0, 4, 9])
def test_bounds_match_the_rasterised_template(class_id) -> None:
    grid = np.mgrid[0:200, 0:200].astype(np.float64)
    t = template(class_id)
    union = np.zeros((200, 200), dtype=bool)
    for p in t.primitives:
        union |= rasterise(p, (grid[0], grid[1]), 100, 100, 1.0, 0.0)
    assert t.bounds(100, 100) == min_bbox(union)
