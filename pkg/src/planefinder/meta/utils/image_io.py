#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""8-bit greyscale PGM images."""

import os
import pathlib
from typing import Union

import numpy as np
from PIL import Image


def write_pgm(path: Union[str, os.PathLike], image: np.ndarray) -> None:
    """Write a [0, 1] image as an 8-bit binary PGM (P5).

    Values outside [0, 1] are clipped.
    """
    levels = np.rint(np.clip(np.asarray(image, dtype=np.float64), 0.0, 1.0) * 255.0)
    pathlib.Path(path).parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(levels.astype(np.uint8), mode="L").save(path, format="PPM")


def read_pgm(path: Union[str, os.PathLike]) -> np.ndarray:
    """Read an 8-bit PGM as a float32 (H, W) image in [0, 1]."""
    with Image.open(path) as img:
        return np.asarray(img.convert("L"), dtype=np.float32) / np.float32(255.0)
