#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Map export for inspection and exact comparison.

Raw dumps are little-endian: height and width as 32-bit integers followed by
the values as 32-bit reals in row-major order.
"""

import os
import pathlib
import struct
from typing import Union

import numpy as np

from planefinder.meta.utils import write_pgm

from .saliency import SaliencyError


def write_map_pgm(path: Union[str, os.PathLike], values: np.ndarray) -> None:
    """Write a map as an 8-bit PGM after min-max scaling; a constant map is black."""
    values = np.asarray(values, dtype=np.float64)
    low, high = values.min(), values.max()
    scaled = (values - low) / (high - low) if high > low else np.zeros_like(values)
    write_pgm(path, scaled)


def write_raw(path: Union[str, os.PathLike], values: np.ndarray) -> None:
    values = np.asarray(values)
    if values.ndim != 2:
        raise SaliencyError(f"Raw dumps hold (H, W) maps, got shape {values.shape}.")
    header = struct.pack("<ii", *values.shape)
    pathlib.Path(path).write_bytes(header + values.astype("<f4").tobytes())


def read_raw(path: Union[str, os.PathLike]) -> np.ndarray:
    """Read a raw dump as a float32 (H, W) array."""
    data = pathlib.Path(path).read_bytes()
    if len(data) < 8:
        raise SaliencyError(f"{path} is too short for a raw map header.")
    height, width = struct.unpack("<ii", data[:8])
    if len(data) != 8 + 4 * height * width:
        raise SaliencyError(
            f"{path} holds {len(data) - 8} data bytes, a {height}x{width} map needs "
            f"{4 * height * width}."
        )
    return np.frombuffer(data[8:], dtype="<f4").reshape(height, width).astype(np.float32)
