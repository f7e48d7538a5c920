#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Isodata thresholding."""

import logging

import numpy as np

from .errors import ConstantMapError

logger = logging.getLogger(__name__)


def isodata_threshold(values: np.ndarray, tol: float = 1e-6, max_iter: int = 100) -> float:
    """Threshold halfway between the means of the two classes it induces.

    Starting at the global mean, t is replaced by the average of the mean of
    values below t and the mean of values at or above t until it moves by less
    than ``tol`` or ``max_iter`` updates have been made.

    Args:
        values (np.ndarray): Map to threshold.
        tol (float): Convergence tolerance (Default: 1e-6).
        max_iter (int): Update budget (Default: 100).

    Raises:
        ConstantMapError: Raised if the map holds fewer than two distinct values.

    Returns:
        (float): The threshold, strictly between the map's minimum and maximum.
    """
    data = np.asarray(values, dtype=np.float64).ravel()
    low, high = data.min(), data.max()
    if not low < high:
        raise ConstantMapError(f"Map is constant at {low}; no threshold separates it.")

    t, updates = float(data.mean()), 0
    while updates < max_iter:
        below = data < t
        updated = (data[below].mean() + data[~below].mean()) / 2.0
        delta = abs(updated - t)
        t, updates = float(updated), updates + 1
        if delta < tol:
            break
    logger.debug(f"Isodata threshold {t:.6g} after {updates} updates")
    return t
