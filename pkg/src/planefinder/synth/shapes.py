#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Primitive shapes and the class structure templates built from them.

Primitives live in a template frame measured in pixels at scale 1, with y
pointing down. Each primitive is rasterised on integer pixel centres, so an
unrotated template at scale 1 around an integer centre covers exactly the
pixels its analytic bounds describe.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from planefinder.control.options import (
    BACKGROUND_CLASS,
    BRIGHT_CLASSES,
    DARK_CLASSES,
    NUM_FOREGROUND,
)
from planefinder.localize.bbox import BoundingBox

BRIGHT = 1.0
DARK = -1.0


class Primitive(ABC):
    """A filled shape offset (dy, dx) from the template centre."""

    dy: int
    dx: int
    polarity: float

    @abstractmethod
    def covers(self, ly: np.ndarray, lx: np.ndarray) -> np.ndarray:
        """Membership of template-frame points relative to the primitive's own centre."""

    @abstractmethod
    def extent(self) -> Tuple[int, int, int, int]:
        """Inclusive (top, left, bottom, right) offsets from the primitive's centre."""

    @property
    def area(self) -> float:
        """Approximate filled area in pixels at scale 1."""
        top, left, bottom, right = self.extent()
        ly, lx = np.mgrid[top : bottom + 1, left : right + 1]
        return float(self.covers(ly.astype(float), lx.astype(float)).sum())

    @property
    def radius(self) -> float:
        """Distance from the template centre to the primitive's farthest corner."""
        top, left, bottom, right = self.extent()
        return max(
            np.hypot(self.dy + y, self.dx + x) for y in (top, bottom) for x in (left, right)
        )


@dataclass(frozen=True)
class Ellipse(Primitive):
    dy: int
    dx: int
    ry: int
    rx: int
    polarity: float = BRIGHT

    def covers(self, ly: np.ndarray, lx: np.ndarray) -> np.ndarray:
        return (ly / self.ry) ** 2 + (lx / self.rx) ** 2 <= 1.0

    def extent(self) -> Tuple[int, int, int, int]:
        return -self.ry, -self.rx, self.ry, self.rx


@dataclass(frozen=True)
class Bar(Primitive):
    dy: int
    dx: int
    hy: int
    hx: int
    polarity: float = BRIGHT

    def covers(self, ly: np.ndarray, lx: np.ndarray) -> np.ndarray:
        return (np.abs(ly) <= self.hy) & (np.abs(lx) <= self.hx)

    def extent(self) -> Tuple[int, int, int, int]:
        return -self.hy, -self.hx, self.hy, self.hx


@dataclass(frozen=True)
class Ring(Primitive):
    dy: int
    dx: int
    r_out: int
    r_in: int
    polarity: float = BRIGHT

    def covers(self, ly: np.ndarray, lx: np.ndarray) -> np.ndarray:
        d2 = ly**2 + lx**2
        return (d2 <= self.r_out**2) & (d2 >= self.r_in**2)

    def extent(self) -> Tuple[int, int, int, int]:
        return -self.r_out, -self.r_out, self.r_out, self.r_out


@dataclass(frozen=True)
class Arc(Primitive):
    """Half ring opening downwards (``up=True``) or upwards."""

    dy: int
    dx: int
    r_out: int
    r_in: int
    up: bool = True
    polarity: float = BRIGHT

    def covers(self, ly: np.ndarray, lx: np.ndarray) -> np.ndarray:
        d2 = ly**2 + lx**2
        half = ly <= 0 if self.up else ly >= 0
        return (d2 <= self.r_out**2) & (d2 >= self.r_in**2) & half

    def extent(self) -> Tuple[int, int, int, int]:
        if self.up:
            return -self.r_out, -self.r_out, 0, self.r_out
        return 0, -self.r_out, self.r_out, self.r_out


@dataclass(frozen=True)
class Template:
    """Composite structure of one foreground class."""

    class_id: int
    primitives: Tuple[Primitive, ...]

    @property
    def radius(self) -> float:
        """Radius of the circle around the centre enclosing every primitive."""
        return max(p.radius for p in self.primitives)

    def bounds(self, cy: int, cx: int) -> BoundingBox:
        """Analytic box of the unrotated template at scale 1 around (cy, cx)."""
        tops, lefts, bottoms, rights = [], [], [], []
        for p in self.primitives:
            top, left, bottom, right = p.extent()
            tops.append(cy + p.dy + top)
            lefts.append(cx + p.dx + left)
            bottoms.append(cy + p.dy + bottom)
            rights.append(cx + p.dx + right)
        return BoundingBox(min(lefts), min(tops), max(rights) + 1, max(bottoms) + 1)

    def polarity_areas(self) -> Tuple[float, float]:
        """Bright and dark areas at scale 1."""
        bright = sum(p.area for p in self.primitives if p.polarity > 0)
        dark = sum(p.area for p in self.primitives if p.polarity < 0)
        return bright, dark


TEMPLATES: Tuple[Template, ...] = (
    # bright-on-dark
    Template(0, (Bar(0, 0, 4, 30), Ellipse(0, -32, 6, 6), Ellipse(0, 32, 6, 6))),
    Template(
        1,
        tuple(Ellipse(dy, dx, 4, 4) for dy in (-8, 8) for dx in (-24, -8, 8, 24)),
    ),
    Template(2, (Arc(-2, 0, 18, 14, up=True), Arc(2, 0, 18, 14, up=False))),
    Template(3, (Ring(0, 0, 36, 31), Bar(0, 0, 28, 2))),
    # dark-on-bright
    Template(4, tuple(Ellipse(dy, dx, 10, 10, DARK) for dy in (-13, 13) for dx in (-13, 13))),
    Template(
        5,
        (Ellipse(0, -26, 7, 7, DARK), Ellipse(0, 0, 9, 9, DARK), Ellipse(0, 28, 11, 11, DARK)),
    ),
    Template(6, (Ellipse(0, 0, 10, 20, DARK), Bar(-20, 14, 14, 4, DARK))),
    Template(7, (Arc(0, 0, 24, 17, up=False, polarity=DARK), Ellipse(0, 0, 8, 8, DARK))),
    # mixed polarity, bright area at least twice the dark area
    Template(8, (Ring(0, 0, 38, 33), Ellipse(6, -14, 8, 12, DARK))),
    Template(
        9,
        (
            Ring(0, -22, 14, 10),
            Ring(0, 22, 14, 10),
            Ellipse(0, -22, 5, 5, DARK),
            Ellipse(0, 22, 5, 5, DARK),
        ),
    ),
    Template(10, (Ring(0, 0, 40, 36), Bar(-10, 0, 3, 10, DARK), Bar(10, 0, 3, 10, DARK))),
    Template(11, (Arc(0, 0, 30, 25, up=True), Bar(8, 0, 3, 20), Ellipse(-14, 0, 6, 6, DARK))),
    Template(12, (Ellipse(0, 0, 10, 24), Ellipse(0, -32, 6, 6, DARK), Ellipse(0, 32, 6, 6, DARK))),
)

assert len(TEMPLATES) == NUM_FOREGROUND


def template(class_id: int) -> Template:
    """Structure template of a foreground class.

    Raises:
        ValueError: Raised for the background class or an unknown id.
    """
    if not 0 <= class_id < NUM_FOREGROUND:
        raise ValueError(
            (
                f"Class {class_id} has no structure; foreground classes are "
                f"0..{NUM_FOREGROUND - 1} and {BACKGROUND_CLASS} is background."
            )
        )
    return TEMPLATES[class_id]


def polarity_group(class_id: int) -> str:
    """"bright", "dark" or "mixed"."""
    if class_id in BRIGHT_CLASSES:
        return "bright"
    if class_id in DARK_CLASSES:
        return "dark"
    return "mixed"


def rasterise(
    primitive: Primitive,
    grid: Tuple[np.ndarray, np.ndarray],
    cy: float,
    cx: float,
    scale: float,
    rotation: float,
) -> np.ndarray:
    """Coverage mask of a primitive placed by a template pose.

    Args:
        primitive (Primitive): Shape to place.
        grid (Tuple[np.ndarray, np.ndarray]): Pixel row and column coordinates.
        cy (float): Template centre row.
        cx (float): Template centre column.
        scale (float): Template scale.
        rotation (float): Template rotation in degrees, counter-clockwise on screen.

    Returns:
        (np.ndarray): Boolean mask on the grid.
    """
    yy, xx = grid
    theta = np.deg2rad(rotation)
    cos, sin = np.cos(theta), np.sin(theta)
    oy, ox = (yy - cy) / scale, (xx - cx) / scale
    # inverse rotation into the template frame
    ty = cos * oy + sin * ox
    tx = -sin * oy + cos * ox
    return primitive.covers(ty - primitive.dy, tx - primitive.dx)
