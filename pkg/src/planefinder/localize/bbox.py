#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Axis-aligned bounding boxes."""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import EmptyMaskError, InvalidBoxError


@dataclass(frozen=True)
class BoundingBox:
    """Rectangle of pixels; start indices inclusive, end indices exclusive.

    Raises:
        InvalidBoxError: Raised unless x0 < x1 and y0 < y1.
    """

    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self) -> None:
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise InvalidBoxError(f"Empty box ({self.x0}, {self.y0}, {self.x1}, {self.y1}).")

    @property
    def area(self) -> int:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    @property
    def centre(self) -> Tuple[float, float]:
        """Centre as (y, x)."""
        return (self.y0 + self.y1) / 2, (self.x0 + self.x1) / 2

    def within(self, height: int, width: int) -> bool:
        """True when the box lies inside a height x width image."""
        return self.x0 >= 0 and self.y0 >= 0 and self.x1 <= width and self.y1 <= height

    def contains(self, other: "BoundingBox") -> bool:
        return (
            self.x0 <= other.x0
            and self.y0 <= other.y0
            and self.x1 >= other.x1
            and self.y1 >= other.y1
        )

    def intersection(self, other: "BoundingBox") -> Optional["BoundingBox"]:
        """Overlap of two boxes, None when they do not overlap."""
        x0, y0 = max(self.x0, other.x0), max(self.y0, other.y0)
        x1, y1 = min(self.x1, other.x1), min(self.y1, other.y1)
        if x0 >= x1 or y0 >= y1:
            return None
        return BoundingBox(x0, y0, x1, y1)

    def translate(self, dx: int, dy: int) -> "BoundingBox":
        return BoundingBox(self.x0 + dx, self.y0 + dy, self.x1 + dx, self.y1 + dy)

    def dumps(self) -> str:
        """Render as "x0,y0,x1,y1"."""
        return f"{self.x0},{self.y0},{self.x1},{self.y1}"

    @classmethod
    def loads(cls, text: str) -> "BoundingBox":
        """Parse "x0,y0,x1,y1".

        Raises:
            InvalidBoxError: Raised if the text is not four integers or the box is empty.
        """
        try:
            x0, y0, x1, y1 = (int(part) for part in text.strip().split(","))
        except ValueError:
            raise InvalidBoxError(f"{text!r} is not of the form x0,y0,x1,y1.")
        return cls(x0, y0, x1, y1)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two boxes; 0 when disjoint."""
    overlap = a.intersection(b)
    if overlap is None:
        return 0.0
    inter = overlap.area
    return inter / (a.area + b.area - inter)


def min_bbox(mask: np.ndarray) -> BoundingBox:
    """Tightest box around the set pixels of a binary mask.

    Raises:
        EmptyMaskError: Raised if no pixel is set.
    """
    mask = np.asarray(mask, dtype=bool)
    rows = np.flatnonzero(mask.any(axis=1))
    cols = np.flatnonzero(mask.any(axis=0))
    if rows.size == 0:
        raise EmptyMaskError(f"Mask of shape {mask.shape} has no set pixel.")
    return BoundingBox(int(cols[0]), int(rows[0]), int(cols[-1]) + 1, int(rows[-1]) + 1)
