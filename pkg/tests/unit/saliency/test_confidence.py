#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Test confidence maps."""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from planefinder.control import Configure, SignMode
from planefinder.saliency import confidence_map, gaussian_kernel, select_sign


def test_gaussian_kernel_is_normalised_and_symmetric() -> None:
    kernel = gaussian_kernel(5, 1.0)
    assert kernel.shape == (5, 5)
    assert kernel.sum() == pytest.approx(1.0)
    assert_allclose(kernel, kernel.T)
    assert kernel.argmax() == 12


@pytest.mark.parametrize("size", [0, 4, -3])
def test_gaussian_kernel_needs_odd_side(size) -> None:
    with pytest.raises(ValueError):
        gaussian_kernel(size)


def test_sign_selection() -> None:
    values = np.array([-2.0, 0.0, 3.0])
    assert_array_equal(select_sign(values, SignMode.POSITIVE), [0.0, 0.0, 3.0])
    assert_array_equal(select_sign(values, "negative"), [2.0, 0.0, 0.0])
    assert_array_equal(select_sign(values, SignMode.BOTH), [2.0, 0.0, 3.0])


def test_impulse_becomes_the_kernel() -> None:
    values = np.zeros((9, 9))
    values[4, 4] = 1.0
    result = confidence_map(values)
    assert_allclose(result.values[2:7, 2:7], gaussian_kernel(5, 1.0))
    assert result.values[0].sum() == 0.0


def test_confidence_is_non_negative() -> None:
    values = np.random.default_rng(0).standard_normal((16, 16))
    for mode in SignMode:
        assert np.all(confidence_map(values, mode).values >= 0)


def test_negative_mode_ignores_positive_saliency() -> None:
    values = np.full((6, 6), 5.0)
    assert not confidence_map(values, SignMode.NEGATIVE).values.any()


def test_configured_kernel() -> None:
    Configure("saliency").configure(gaussian_size=1)
    values = np.random.default_rng(1).uniform(size=(5, 5))
    assert_allclose(confidence_map(values, "positive").values, values)
