#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Dense evaluation versus patchwise re-evaluation of a fully convolutional network."""

import logging

import numpy as np

from planefinder.tensor import Mode

from .network import Network
from .spec import receptive_field

logger = logging.getLogger(__name__)


def sliding_window_equiv_check(net: Network, image: np.ndarray) -> float:
    """Compare every class score map cell with the network run on its receptive field.

    Exact only for networks without zero padding; padded networks are still
    evaluated but their border cells see different context.

    Args:
        net (Network): Network under test.
        image (np.ndarray): Single image of shape (H, W) or (Cin, H, W).

    Returns:
        (float): Largest absolute deviation over all cells and classes.
    """
    if net.spec.same_padded:
        logger.warning(f"{net.spec.name} pads its convolutions; border cells will deviate.")

    image = np.asarray(image)
    if image.ndim == 2:
        image = image[None]
    size, jump = receptive_field(net.spec)
    dense = net.forward(image[None], Mode.INFER, keep_trace=False).F[0]
    _, hf, wf = dense.shape

    worst = 0.0
    for y in range(hf):
        for x in range(wf):
            crop = image[:, y * jump : y * jump + size, x * jump : x * jump + size]
            patch = net.forward(crop[None], Mode.INFER, keep_trace=False).F[0, :, 0, 0]
            worst = max(worst, float(np.max(np.abs(patch - dense[:, y, x]))))
    logger.debug(f"Sliding-window check over {hf}x{wf} cells: {worst:.3e}")
    return worst
