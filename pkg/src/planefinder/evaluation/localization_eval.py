#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Score localisation on images with evaluation boxes."""

import logging
import os
import pathlib
from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np

from planefinder.control.options import ClassSignTable
from planefinder.localize import BoundingBox, localize, score_localization
from planefinder.net import Network
from planefinder.saliency import Method
from planefinder.synth.dataset import Manifest

from .errors import EmptyManifestError
from .frames import prepare_frame

logger = logging.getLogger(__name__)

BOX_HEADER = "image_id,class_id,x0,y0,x1,y1,iou,correct"


@dataclass(frozen=True)
class BoxResult:
    image_id: str
    class_id: int
    box: Optional[BoundingBox]
    iou: float
    correct: bool

    def dumps(self) -> str:
        box = ",,," if self.box is None else self.box.dumps()
        return f"{self.image_id},{self.class_id},{box},{self.iou:.6f},{int(self.correct)}"


class LocalizationReport:
    """Box results and their per-class summary."""

    def __init__(self, results: List[BoxResult], num_classes: int) -> None:
        self.results = results
        self.num_classes = num_classes

    def _per_class(self, values: np.ndarray) -> np.ndarray:
        classes = np.array([r.class_id for r in self.results], dtype=np.int64)
        counts = np.bincount(classes, minlength=self.num_classes)
        sums = np.bincount(classes, weights=values, minlength=self.num_classes)
        out = np.full(self.num_classes, np.nan)
        np.divide(sums, counts, out=out, where=counts > 0)
        return out

    @property
    def mean_iou(self) -> np.ndarray:
        """Per-class mean IOU; NaN for classes without images."""
        return self._per_class(np.array([r.iou for r in self.results]))

    @property
    def accuracy(self) -> np.ndarray:
        """Per-class share of boxes with IOU of at least 0.5."""
        return self._per_class(np.array([float(r.correct) for r in self.results]))

    @property
    def overall_accuracy(self) -> float:
        return float(np.mean([r.correct for r in self.results]))

    def dumps(self) -> str:
        lines = [BOX_HEADER] + [r.dumps() for r in self.results]
        return "".join(f"{line}\n" for line in lines)

    def dumps_summary(self) -> str:
        lines = ["class_id,mean_iou,accuracy"]
        for k, (m, a) in enumerate(zip(self.mean_iou, self.accuracy)):
            if not np.isnan(m):
                lines.append(f"{k},{m:.6f},{a:.6f}")
        return "".join(f"{line}\n" for line in lines)

    def write(self, path: Union[str, os.PathLike]) -> None:
        pathlib.Path(path).write_text(self.dumps(), encoding="utf-8")

    def summary(self) -> str:
        return (
            f"{len(self.results)} boxes, mean IOU {np.nanmean(self.mean_iou):.3f}, "
            f"accuracy {self.overall_accuracy:.3f}"
        )


def evaluate_localization(
    net: Network,
    manifest: Manifest,
    sign_table: Optional[ClassSignTable] = None,
    method: Union[Method, str] = Method.WEIGHTED,
) -> LocalizationReport:
    """Localise the labelled class of every foreground image that has a box.

    Images without an evaluation box are skipped. A missing localisation
    counts as incorrect with IOU 0.

    Raises:
        EmptyManifestError: Raised if no image carries a box.
    """
    results = []
    for record in manifest:
        if record.box is None:
            continue
        image = prepare_frame(net, record.load())
        found = localize(net, image, record.class_id, sign_table, method)
        overlap, correct = score_localization(found.box, record.box)
        image_id = manifest.image_id(record)
        results.append(BoxResult(image_id, record.class_id, found.box, overlap, correct))
        logger.debug(f"{image_id}: class {record.class_id}, IOU {overlap:.3f}")
    if not results:
        raise EmptyManifestError("No image in the manifest has an evaluation box.")
    report = LocalizationReport(results, net.spec.num_classes)
    logger.info(f"Localisation of {net.spec.name}: {report.summary()}")
    return report
