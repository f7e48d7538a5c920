#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Tensor conventions.

A tensor is a C-contiguous numpy array of rank at most 4 laid out as
(batch, channels, height, width), batch outermost. 32-bit reals are the
default; layer operations preserve whatever real dtype they are given so
gradient checks can run the same code in 64-bit.
"""

from typing import Any, Optional, Sequence

import numpy as np
import numpy.typing as npt

from planefinder.meta.mixins import EnhancedEnum

DTYPE = np.float32

Tensor = npt.NDArray[np.floating]


class TensorError(Exception):
    """Base error for tensor operations."""


class TensorShapeError(TensorError):
    """Raised when tensor shapes do not fit an operation."""


class LabelRangeError(TensorError):
    """Raised when a class label lies outside [0, K)."""


class Mode(EnhancedEnum):
    """Forward pass mode of layers with batch statistics."""

    TRAIN = "train"
    INFER = "infer"


class Padding(EnhancedEnum):
    """Convolution padding."""

    SAME = "same"
    VALID = "valid"


def as_tensor(data: Any, dtype: Optional[npt.DTypeLike] = DTYPE) -> Tensor:
    """Convert data to a contiguous tensor.

    Args:
        data (Any): Array-like input.
        dtype (Optional[DTypeLike]): Target dtype; None keeps a real input dtype
            (Default: float32).

    Raises:
        TensorShapeError: Raised if the rank exceeds 4 or an extent is zero.

    Returns:
        (Tensor): Contiguous array.
    """
    array = np.ascontiguousarray(data, dtype=dtype)
    if array.ndim > 4:
        raise TensorShapeError(f"Tensors have rank <= 4, got shape {array.shape}.")
    if any(extent < 1 for extent in array.shape):
        raise TensorShapeError(f"All extents must be >= 1, got shape {array.shape}.")
    return array


def element_index(shape: Sequence[int], b: int, c: int, y: int, x: int) -> int:
    """Flat row-major offset of element (b, c, y, x) in a rank-4 tensor."""
    _, channels, height, width = shape
    return ((b * channels + c) * height + y) * width + x
