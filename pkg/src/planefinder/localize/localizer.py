#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Bounding boxes from saliency: threshold, keep the largest blob, fit a box."""

import logging
from typing import Optional, Tuple, Union

import numpy as np

from planefinder.control import Configure
from planefinder.control.options import ClassSignTable, SignMode
from planefinder.net import ForwardResult, Network, NetworkSpec, receptive_field
from planefinder.saliency import ConfidenceMap, Method, SaliencyMap, confidence_map, saliency

from .bbox import BoundingBox, iou, min_bbox
from .components import largest_component
from .errors import ConstantMapError
from .threshold import isodata_threshold

logger = logging.getLogger(__name__)

IOU_CORRECT = 0.5


class LocalizationResult:
    """Outcome of the localisation pipeline for one image and class.

    Args:
        box (Optional[BoundingBox]): Fitted box; None when nothing was localised.
        confidence (ConfidenceMap): Map the box was extracted from.
        threshold (Optional[float]): Isodata threshold; None for a constant map.
        mask (np.ndarray): Largest component of the thresholded map.
        saliency (Optional[SaliencyMap]): Saliency the map was built from.
    """

    def __init__(
        self,
        box: Optional[BoundingBox],
        confidence: ConfidenceMap,
        threshold: Optional[float],
        mask: np.ndarray,
        saliency: Optional[SaliencyMap] = None,
    ) -> None:
        self.box = box
        self.confidence = confidence
        self.threshold = threshold
        self.mask = mask
        self.saliency = saliency

    @property
    def localised(self) -> bool:
        return self.box is not None

    def __repr__(self) -> str:
        box = "none" if self.box is None else self.box.dumps()
        return f"{self.__class__.__name__}(box={box}, threshold={self.threshold})"


def localize_confidence(confidence: Union[ConfidenceMap, np.ndarray]) -> LocalizationResult:
    """Isodata threshold, largest 8-connected component and its minimum box.

    A constant map or an empty mask gives a result without a box.
    """
    if not isinstance(confidence, ConfidenceMap):
        confidence = ConfidenceMap(np.asarray(confidence), SignMode.BOTH)
    values = confidence.values
    try:
        t = isodata_threshold(values)
    except ConstantMapError:
        logger.debug("Confidence map is constant; nothing to localise")
        return LocalizationResult(None, confidence, None, np.zeros(values.shape, dtype=bool))
    mask = largest_component(values >= t)
    box = min_bbox(mask) if mask.any() else None
    return LocalizationResult(box, confidence, t, mask)


def localize(
    net: Network,
    image: np.ndarray,
    k: int,
    sign_table: Optional[ClassSignTable] = None,
    method: Union[Method, str] = Method.WEIGHTED,
    result: Optional[ForwardResult] = None,
) -> LocalizationResult:
    """Localise the structure of class ``k`` in an image.

    Args:
        net (Network): Trained network.
        image (np.ndarray): Standardised network input, (H, W) or (C, H, W).
        k (int): Foreground class to localise.
        sign_table (Optional[ClassSignTable]): Saliency signs per class; None
            uses the configured table (Default: None).
        method (Method): Saliency method (Default: Method.WEIGHTED).
        result (Optional[ForwardResult]): Inference pass of ``image`` with its
            trace kept; reused instead of a second forward pass (Default: None).

    Raises:
        ClassIndexError: Raised if ``k`` is not a class of the network.

    Returns:
        (LocalizationResult): Box, confidence map, threshold and mask.
    """
    table = Configure("saliency").sign_table if sign_table is None else sign_table
    s = saliency(net, image, k, method, result)
    mode = table[k] if k in table else SignMode.BOTH
    found = localize_confidence(confidence_map(s, mode))
    found.saliency = s
    return found


def coarse_box(
    scores: np.ndarray, spec: NetworkSpec, image_shape: Tuple[int, int]
) -> BoundingBox:
    """Receptive field of the most active cell of a class score map.

    Args:
        scores (np.ndarray): Class score map F_k of shape (Hf, Wf).
        spec (NetworkSpec): Architecture that produced it.
        image_shape (Tuple[int, int]): Input height and width.

    Returns:
        (BoundingBox): Receptive field clipped to the image.
    """
    size, jump = receptive_field(spec)
    y, x = np.unravel_index(int(np.argmax(scores)), scores.shape)
    height, width = image_shape

    def span(cell: int, extent: int) -> Tuple[int, int]:
        if spec.same_padded:
            centre = cell * jump + (jump - 1) / 2
            start = int(np.floor(centre - (size - 1) / 2))
        else:
            start = cell * jump
        return max(start, 0), min(start + size, extent)

    y0, y1 = span(int(y), height)
    x0, x1 = span(int(x), width)
    return BoundingBox(x0, y0, x1, y1)


def score_localization(box: Optional[BoundingBox], gt: BoundingBox) -> Tuple[float, bool]:
    """IOU against ground truth and whether it reaches 0.5; no box scores 0."""
    if box is None:
        return 0.0, False
    overlap = iou(box, gt)
    return overlap, overlap >= IOU_CORRECT
