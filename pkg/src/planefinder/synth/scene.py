#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Rendering of synthetic frames from scene parameters."""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy import ndimage

from planefinder.control.options import BACKGROUND_CLASS, NUM_FOREGROUND
from planefinder.localize.bbox import BoundingBox, min_bbox

from .shapes import BRIGHT, DARK, Bar, Ellipse, Primitive, rasterise, template

CANVAS = (224, 288)
STRUCTURE_CONTRAST = 0.35
TEXTURE_STD = 0.05
DEFAULT_NOISE = 0.25
MIN_BOX_AREA = 64


@dataclass(frozen=True)
class Distractor:
    """Single primitive placed at an absolute canvas position."""

    cy: float
    cx: float
    shape: Primitive


@dataclass(frozen=True)
class SceneParams:
    """Everything a frame render depends on.

    Args:
        class_id (int): Foreground class 0..12 or the background class 13.
        centre (Tuple[float, float]): Structure centre as (y, x).
        scale (float): Structure scale.
        rotation (float): Structure rotation in degrees.
        texture_seed (int): Seed of the background texture and distractors.
        distractor_count (int): Stray primitives outside the structure.
        noise (float): Speckle level; 0 renders a clean frame.
        noise_seed (Optional[int]): Seed of the speckle; None reuses texture_seed.
        visibility (float): Structure contrast factor in [0, 1] (Default: 1).
        canvas (Tuple[int, int]): Frame height and width (Default: 224x288).
    """

    class_id: int
    centre: Tuple[float, float]
    scale: float
    rotation: float
    texture_seed: int
    distractor_count: int
    noise: float = DEFAULT_NOISE
    noise_seed: Optional[int] = None
    visibility: float = 1.0
    canvas: Tuple[int, int] = CANVAS


def canvas_unit(canvas: Tuple[int, int]) -> float:
    """Template scale that fits a canvas as a 1:1 template fits the default one."""
    return min(canvas[0] / CANVAS[0], canvas[1] / CANVAS[1])


def _texture(rng: np.random.Generator, canvas: Tuple[int, int]) -> np.ndarray:
    field = ndimage.gaussian_filter(rng.standard_normal(canvas), sigma=6.0, mode="wrap")
    std = field.std()
    if std > 0:
        field *= TEXTURE_STD / std
    return 0.5 + field


def _distractors(
    rng: np.random.Generator,
    count: int,
    canvas: Tuple[int, int],
    avoid: Optional[BoundingBox],
) -> List[Distractor]:
    unit = canvas_unit(canvas)
    placed: List[Distractor] = []
    for _ in range(count):
        polarity = BRIGHT if rng.random() < 0.5 else DARK
        a, b = (max(1, int(round(v * unit))) for v in rng.integers(3, 8, size=2))
        shape: Primitive
        if rng.random() < 0.5:
            shape = Ellipse(0, 0, a, b, polarity)
        else:
            shape = Bar(0, 0, a, b, polarity)
        margin = max(a, b) + 1
        for _attempt in range(20):
            cy = float(rng.uniform(margin, canvas[0] - margin))
            cx = float(rng.uniform(margin, canvas[1] - margin))
            if avoid is None or not (
                avoid.y0 - margin <= cy < avoid.y1 + margin
                and avoid.x0 - margin <= cx < avoid.x1 + margin
            ):
                placed.append(Distractor(cy, cx, shape))
                break
    return placed


def render_scene(params: SceneParams) -> Tuple[np.ndarray, Optional[BoundingBox]]:
    """Render a frame.

    The frame is a pure function of ``params``. The box tightly bounds the
    structure pixels and is None for background scenes.

    Returns:
        (Tuple[np.ndarray, Optional[BoundingBox]]): Float32 (1, H, W) image in
            [0, 1] and the structure box.
    """
    canvas = params.canvas
    grid = np.mgrid[0 : canvas[0], 0 : canvas[1]].astype(np.float64)
    texture_rng = np.random.default_rng(params.texture_seed)
    image = _texture(texture_rng, canvas)

    box: Optional[BoundingBox] = None
    if params.class_id != BACKGROUND_CLASS:
        cy, cx = params.centre
        union = np.zeros(canvas, dtype=bool)
        for p in template(params.class_id).primitives:
            mask = rasterise(p, (grid[0], grid[1]), cy, cx, params.scale, params.rotation)
            image += p.polarity * STRUCTURE_CONTRAST * params.visibility * mask
            union |= mask
        box = min_bbox(union)

    for d in _distractors(texture_rng, params.distractor_count, canvas, box):
        mask = rasterise(d.shape, (grid[0], grid[1]), d.cy, d.cx, 1.0, 0.0)
        image += d.shape.polarity * STRUCTURE_CONTRAST * mask

    if params.noise > 0:
        seed = params.texture_seed if params.noise_seed is None else params.noise_seed
        noise_rng = np.random.default_rng([seed, 1])
        image *= 1.0 + params.noise * noise_rng.uniform(-1.0, 1.0, size=canvas)
        image += noise_rng.normal(0.0, 0.1 * params.noise, size=canvas)

    image = np.clip(image, 0.0, 1.0).astype(np.float32)
    return image[None], box


def sample_scene(
    class_id: int,
    rng: np.random.Generator,
    canvas: Tuple[int, int] = CANVAS,
    noise: float = DEFAULT_NOISE,
    scale_range: Tuple[float, float] = (0.7, 1.3),
    max_rotation: float = 25.0,
) -> SceneParams:
    """Draw scene parameters keeping the structure fully inside the canvas."""
    unit = canvas_unit(canvas)
    texture_seed = int(rng.integers(2**31))
    if class_id == BACKGROUND_CLASS:
        return SceneParams(
            class_id,
            (canvas[0] / 2, canvas[1] / 2),
            1.0,
            0.0,
            texture_seed,
            int(rng.integers(0, 5)),
            noise,
            canvas=canvas,
        )
    scale = float(rng.uniform(*scale_range)) * unit
    rotation = float(rng.uniform(-max_rotation, max_rotation))
    reach = template(class_id).radius * scale + 2
    if 2 * reach >= min(canvas):
        scale *= (min(canvas) / 2 - 3) / (reach - 2)
        reach = template(class_id).radius * scale + 2
    cy = float(rng.uniform(reach, canvas[0] - reach))
    cx = float(rng.uniform(reach, canvas[1] - reach))
    return SceneParams(
        class_id,
        (cy, cx),
        scale,
        rotation,
        texture_seed,
        int(rng.integers(1, 4)),
        noise,
        canvas=canvas,
    )


def gen_plane(
    class_id: int,
    rng: np.random.Generator,
    canvas: Tuple[int, int] = CANVAS,
    noise: float = DEFAULT_NOISE,
) -> Tuple[np.ndarray, BoundingBox]:
    """Render a random view of a foreground class.

    Args:
        class_id (int): Foreground class 0..12.
        rng (np.random.Generator): Source of the scene parameters.
        canvas (Tuple[int, int]): Frame height and width (Default: 224x288).
        noise (float): Speckle level (Default: 0.25).

    Raises:
        ValueError: Raised if ``class_id`` is not a foreground class.

    Returns:
        (Tuple[np.ndarray, BoundingBox]): Image of shape (1, H, W) and the box
            tightly bounding the structure.
    """
    if not 0 <= class_id < NUM_FOREGROUND:
        raise ValueError(f"gen_plane needs a foreground class, got {class_id}.")
    image, box = render_scene(sample_scene(class_id, rng, canvas, noise))
    return image, box


def gen_background(
    rng: np.random.Generator, canvas: Tuple[int, int] = CANVAS, noise: float = DEFAULT_NOISE
) -> np.ndarray:
    """Render a background frame: texture and up to four stray primitives."""
    image, _ = render_scene(sample_scene(BACKGROUND_CLASS, rng, canvas, noise))
    return image
