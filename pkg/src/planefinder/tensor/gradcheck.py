#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Finite-difference verification of analytic backward passes."""

import logging
from typing import Callable, Optional

import numpy as np

logger = logging.getLogger(__name__)


def finite_diff_check(
    forward: Callable[[np.ndarray], np.ndarray],
    backward: Callable[[np.ndarray, np.ndarray], np.ndarray],
    point: np.ndarray,
    step: Optional[float] = None,
    max_coords: int = 100,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """Compare an analytic gradient against central differences.

    The op output is reduced to a scalar by a fixed random projection ``w``;
    ``backward(x, w)`` must return the gradient of sum(w * forward(x)) w.r.t. x.
    Every coordinate is perturbed when the point has at most ``max_coords``
    entries, otherwise a random subset of ``max_coords`` coordinates.

    Args:
        forward (Callable): Op under test, evaluated at the point's dtype.
        backward (Callable): Analytic vector-Jacobian product.
        point (np.ndarray): Point at which to differentiate.
        step (Optional[float]): Difference step; None picks 1e-2 for 32-bit and
            1e-6 for 64-bit points (Default: None).
        max_coords (int): Coordinate budget (Default: 100).
        rng (Optional[np.random.Generator]): Randomness for the projection and
            the coordinate subset (Default: None, seed 0).

    Returns:
        (float): Largest relative error, |a - n| / max(|a|, |n|, 1e-8).
    """
    rng = np.random.default_rng(0) if rng is None else rng
    x = np.array(point, copy=True)
    if step is None:
        step = 1e-6 if x.dtype == np.float64 else 1e-2

    y = np.asarray(forward(x.copy()))
    w = rng.standard_normal(y.shape).astype(x.dtype)
    analytic = np.asarray(backward(x.copy(), w)).reshape(-1)

    if x.size <= max_coords:
        coords = np.arange(x.size)
    else:
        coords = rng.choice(x.size, size=max_coords, replace=False)

    worst = 0.0
    for i in coords:
        plus = x.copy()
        plus.flat[i] += step
        minus = x.copy()
        minus.flat[i] -= step
        numeric = (
            float(np.sum(w * forward(plus), dtype=np.float64))
            - float(np.sum(w * forward(minus), dtype=np.float64))
        ) / (2 * step)
        a = float(analytic[i])
        error = abs(a - numeric) / max(abs(a), abs(numeric), 1e-8)
        worst = max(worst, error)

    logger.debug(f"Finite-difference check over {len(coords)} coordinates: {worst:.3e}")
    return worst
