#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Random crop, flip and rotation of training images."""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import ndimage

from .errors import AugmentationError


@dataclass(frozen=True)
class AugmentParams:
    """One draw of the augmentation.

    Args:
        side (int): Side of the square crop before rescaling.
        top (int): Crop row offset in the source.
        left (int): Crop column offset in the source.
        flip (bool): Left-right flip of the patch.
        angle (float): Rotation of the patch in degrees.
    """

    side: int
    top: int
    left: int
    flip: bool
    angle: float


def draw_params(
    shape: Tuple[int, int],
    rng: np.random.Generator,
    min_crop: int = 174,
    max_crop: int = 224,
    max_angle: float = 25.0,
    flip_prob: float = 0.5,
) -> AugmentParams:
    """Draw crop, flip and rotation for a source of the given (H, W).

    Raises:
        AugmentationError: Raised if the source is smaller than ``max_crop``.
    """
    height, width = shape
    if height < max_crop or width < max_crop:
        raise AugmentationError(
            f"Source of {height}x{width} is smaller than the largest crop {max_crop}."
        )
    side = int(rng.integers(min_crop, max_crop + 1))
    top = int(rng.integers(0, height - side + 1))
    left = int(rng.integers(0, width - side + 1))
    flip = bool(rng.random() < flip_prob)
    angle = float(rng.uniform(-max_angle, max_angle))
    return AugmentParams(side, top, left, flip, angle)


def _affine(params: AugmentParams, size: int) -> Tuple[np.ndarray, np.ndarray]:
    """Output-to-source map: src = matrix @ out + offset."""
    theta = np.deg2rad(params.angle)
    cos, sin = np.cos(theta), np.sin(theta)
    rotation = np.array([[cos, sin], [-sin, cos]])
    flip = np.diag([1.0, -1.0 if params.flip else 1.0])
    matrix = (params.side / size) * flip @ rotation
    out_centre = np.full(2, (size - 1) / 2)
    src_centre = np.array([params.top, params.left]) + (params.side - 1) / 2
    return matrix, src_centre - matrix @ out_centre


def apply_augmentation(
    image: np.ndarray, params: AugmentParams, size: int = 224, cval: float = 0.0
) -> np.ndarray:
    """Resample a (C, H, W) image into a (C, size, size) patch.

    Bilinear resampling; pixels mapped from outside the source take ``cval``.
    """
    matrix, offset = _affine(params, size)
    image = np.asarray(image)
    return np.stack(
        [
            ndimage.affine_transform(
                channel, matrix, offset, output_shape=(size, size), order=1, cval=cval
            )
            for channel in image
        ]
    ).astype(image.dtype, copy=False)


def valid_region(shape: Tuple[int, int], params: AugmentParams, size: int = 224) -> np.ndarray:
    """Patch pixels that were sampled from inside the source."""
    inside = apply_augmentation(np.ones((1,) + tuple(shape)), params, size, cval=0.0)[0]
    return inside > 1.0 - 1e-6


def standardise(image: np.ndarray, valid: Optional[np.ndarray] = None) -> np.ndarray:
    """Subtract the mean intensity and divide by the pixel standard deviation.

    Statistics come from ``valid`` pixels only when a mask is given; the other
    pixels are set to 0, the mean after standardisation.
    """
    image = np.asarray(image, dtype=np.float32)
    pixels = image if valid is None else image[..., valid]
    mean = pixels.mean() if pixels.size else 0.0
    std = pixels.std() if pixels.size else 0.0
    out = image - mean
    if std > 0:
        out /= std
    if valid is not None:
        out[..., ~valid] = 0.0
    return out.astype(np.float32, copy=False)


def augment(
    image: np.ndarray,
    rng: np.random.Generator,
    size: int = 224,
    min_crop: int = 174,
    max_crop: int = 224,
    max_angle: float = 25.0,
    flip_prob: float = 0.5,
) -> np.ndarray:
    """Random patch of a (C, H, W) image, standardised over its valid pixels.

    Raises:
        AugmentationError: Raised if the source is smaller than ``max_crop``.
    """
    shape = image.shape[-2:]
    params = draw_params(shape, rng, min_crop, max_crop, max_angle, flip_prob)
    patch = apply_augmentation(image, params, size)
    return standardise(patch, valid_region(shape, params, size))
