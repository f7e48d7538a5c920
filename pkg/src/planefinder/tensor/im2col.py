#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Patch unrolling for convolution as a matrix product."""

from typing import Tuple

import numpy as np


def output_size(size: int, kernel: int, stride: int, pad: int) -> int:
    """Extent of a convolution output along one axis."""
    return (size + 2 * pad - kernel) // stride + 1


def im2col(
    x: np.ndarray, kh: int, kw: int, stride: int = 1, pad: int = 0
) -> Tuple[np.ndarray, int, int]:
    """Unroll receptive fields into rows.

    Args:
        x (np.ndarray): Input of shape (N, C, H, W).
        kh (int): Kernel height.
        kw (int): Kernel width.
        stride (int): Stride (Default: 1).
        pad (int): Zero padding on every side (Default: 0).

    Returns:
        (Tuple[np.ndarray, int, int]): Matrix of shape (N*oh*ow, C*kh*kw) with
            rows ordered (n, oy, ox) and columns ordered (c, ky, kx), then oh, ow.
    """
    n, c, h, w = x.shape
    oh = output_size(h, kh, stride, pad)
    ow = output_size(w, kw, stride, pad)
    img = np.pad(x, [(0, 0), (0, 0), (pad, pad), (pad, pad)], "constant") if pad else x
    col = np.empty((n, c, kh, kw, oh, ow), dtype=x.dtype)
    for y in range(kh):
        y_max = y + stride * oh
        for xx in range(kw):
            x_max = xx + stride * ow
            col[:, :, y, xx, :, :] = img[:, :, y:y_max:stride, xx:x_max:stride]
    col = col.transpose(0, 4, 5, 1, 2, 3).reshape(n * oh * ow, -1)
    return col, oh, ow


def col2im(
    col: np.ndarray,
    input_shape: Tuple[int, int, int, int],
    kh: int,
    kw: int,
    stride: int = 1,
    pad: int = 0,
) -> np.ndarray:
    """Scatter-add unrolled rows back onto the input grid (adjoint of im2col)."""
    n, c, h, w = input_shape
    oh = output_size(h, kh, stride, pad)
    ow = output_size(w, kw, stride, pad)
    col = col.reshape(n, oh, ow, c, kh, kw).transpose(0, 3, 4, 5, 1, 2)
    img = np.zeros((n, c, h + 2 * pad + stride - 1, w + 2 * pad + stride - 1), dtype=col.dtype)
    for y in range(kh):
        y_max = y + stride * oh
        for xx in range(kw):
            x_max = xx + stride * ow
            img[:, :, y:y_max:stride, xx:x_max:stride] += col[:, :, y, xx, :, :]
    return img[:, :, pad : pad + h, pad : pad + w]
