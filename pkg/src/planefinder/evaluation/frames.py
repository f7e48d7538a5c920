#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Turn stored frames into network inputs."""

from typing import Iterable, Optional, Tuple

import numpy as np

from planefinder.net import Network
from planefinder.train.augment import standardise

from .errors import FrameSizeError


def prepare_frame(
    net: Network, frame: np.ndarray, expected: Optional[Tuple[int, int]] = None
) -> np.ndarray:
    """Standardised (C, H, W) input for ``net``.

    Raises:
        FrameSizeError: Raised if the frame is not ``expected`` in size or does
            not fit the network's downsampling.
    """
    frame = np.asarray(frame, dtype=np.float32)
    if frame.ndim == 2:
        frame = frame[None]
    height, width = frame.shape[-2:]
    if expected is not None and (height, width) != tuple(expected):
        raise FrameSizeError(
            f"Expected a {expected[0]}x{expected[1]} frame, got {height}x{width}."
        )
    divisor = net.spec.downsampling
    if net.spec.same_padded and (height % divisor or width % divisor):
        raise FrameSizeError(
            f"{net.spec.name} needs frame sides divisible by {divisor}, got {height}x{width}."
        )
    return standardise(frame)


def stack_frames(net: Network, frames: Iterable[np.ndarray]) -> np.ndarray:
    return np.stack([prepare_frame(net, f) for f in frames])
