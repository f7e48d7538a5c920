#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Bounding-box extraction from confidence maps and its scoring."""

from .bbox import BoundingBox, iou, min_bbox
from .components import largest_component
from .errors import ConstantMapError, EmptyMaskError, InvalidBoxError, LocalizationError
from .localizer import (
    IOU_CORRECT,
    LocalizationResult,
    coarse_box,
    localize,
    localize_confidence,
    score_localization,
)
from .threshold import isodata_threshold
