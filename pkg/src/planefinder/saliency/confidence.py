#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Confidence maps: sign-selected, blurred saliency."""

from typing import Optional, Union

import numpy as np
from scipy import ndimage

from planefinder.control import Configure
from planefinder.control.options import SignMode

from .saliency import SaliencyMap


class ConfidenceMap:
    """Non-negative map of where a structure is likely to be.

    Args:
        values (np.ndarray): Map of shape (H, W), all values >= 0.
        sign_mode (SignMode): Saliency signs that were kept.
    """

    def __init__(self, values: np.ndarray, sign_mode: SignMode) -> None:
        self.values = values
        self.sign_mode = sign_mode

    @property
    def shape(self):
        return self.values.shape

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(sign_mode={self.sign_mode.value}, "
            f"shape={self.values.shape}, max={float(self.values.max()):.4g})"
        )


def gaussian_kernel(size: int = 5, sigma: float = 1.0) -> np.ndarray:
    """Normalised square Gaussian kernel with an odd side."""
    if size < 1 or size % 2 == 0:
        raise ValueError(f"Kernel side must be a positive odd number, not {size}.")
    r = np.arange(size) - size // 2
    g = np.exp(-(r**2) / (2.0 * sigma**2))
    kernel = np.outer(g, g)
    return kernel / kernel.sum()


def select_sign(values: np.ndarray, mode: Union[SignMode, str]) -> np.ndarray:
    """Keep positive, negated negative, or absolute values."""
    mode = SignMode.parse(mode)
    if mode is SignMode.POSITIVE:
        return np.maximum(values, 0)
    if mode is SignMode.NEGATIVE:
        return np.maximum(-values, 0)
    return np.abs(values)


def confidence_map(
    s: Union[SaliencyMap, np.ndarray],
    sign_mode: Union[SignMode, str] = SignMode.BOTH,
    size: Optional[int] = None,
    sigma: Optional[float] = None,
) -> ConfidenceMap:
    """Sign-select a saliency map and blur it with a normalised Gaussian.

    Args:
        s (Union[SaliencyMap, np.ndarray]): Saliency map or its (H, W) values.
        sign_mode (SignMode): Signs to keep (Default: SignMode.BOTH).
        size (Optional[int]): Kernel side; None uses the configured side.
        sigma (Optional[float]): Kernel width; None uses the configured width.

    Returns:
        (ConfidenceMap): Map of the same shape, zero padded at the borders.
    """
    config = Configure("saliency")
    size = config.gaussian_size if size is None else size
    sigma = config.gaussian_sigma if sigma is None else sigma
    values = s.values if isinstance(s, SaliencyMap) else np.asarray(s)
    mode = SignMode.parse(sign_mode)
    selected = select_sign(values.astype(np.float64), mode)
    blurred = ndimage.correlate(selected, gaussian_kernel(size, sigma), mode="constant", cval=0.0)
    return ConfidenceMap(np.maximum(blurred, 0.0), mode)
