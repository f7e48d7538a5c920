#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Frame-by-frame annotation of a sweep."""

import logging
import os
import pathlib
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from planefinder.control.options import ClassSignTable
from planefinder.localize import BoundingBox, localize
from planefinder.net import Network
from planefinder.saliency import Method
from planefinder.synth.scene import CANVAS
from planefinder.synth.video import Video
from planefinder.tensor import Mode

from .errors import MissingFramesError
from .frames import prepare_frame

logger = logging.getLogger(__name__)

ANNOTATION_HEADER = "frame,class_id,confidence,x0,y0,x1,y1"


@dataclass(frozen=True)
class Annotation:
    """Prediction for one frame.

    Args:
        class_id (int): Most confident class.
        confidence (float): Softmax confidence of that class.
        box (Optional[BoundingBox]): Localised structure; None for background,
            when localisation was not asked for, or when it found nothing.
    """

    class_id: int
    confidence: float
    box: Optional[BoundingBox] = None

    def dumps(self, frame: int) -> str:
        box = ",,," if self.box is None else self.box.dumps()
        return f"{frame},{self.class_id},{self.confidence:.6f},{box}"


def annotate(
    net: Network,
    frame: np.ndarray,
    with_box: bool = True,
    sign_table: Optional[ClassSignTable] = None,
    method: Union[Method, str] = Method.WEIGHTED,
    expected: Optional[Tuple[int, int]] = CANVAS,
) -> Annotation:
    """Classify a frame and localise the structure if it is not background.

    Args:
        net (Network): Trained network; the last class is background.
        frame (np.ndarray): Raw frame of shape (H, W) or (C, H, W).
        with_box (bool): Run localisation on foreground frames (Default: True).
        sign_table (Optional[ClassSignTable]): Saliency signs; None uses the
            configured table (Default: None).
        method (Method): Saliency method for localisation (Default: Method.WEIGHTED).
        expected (Optional[Tuple[int, int]]): Required frame size; None accepts
            any size the network can take (Default: 224x288).

    Raises:
        FrameSizeError: Raised if the frame has the wrong size.

    Returns:
        (Annotation): Class, confidence and optional box.
    """
    image = prepare_frame(net, frame, expected)
    result = net.forward(image[None], Mode.INFER, keep_trace=with_box)
    class_id = int(result.prediction[0])
    confidence = float(result.c[0, class_id])
    background = net.spec.num_classes - 1
    box = None
    if with_box and class_id != background:
        box = localize(net, image, class_id, sign_table, method, result).box
    return Annotation(class_id, confidence, box)


def annotate_video(
    net: Network,
    video: Video,
    with_box: bool = True,
    sign_table: Optional[ClassSignTable] = None,
    expected: Optional[Tuple[int, int]] = None,
) -> List[Annotation]:
    """Annotate every frame of a sweep in order.

    Raises:
        MissingFramesError: Raised if the video has no frames.
    """
    if len(video) == 0:
        raise MissingFramesError("The video has no frames to annotate.")
    annotations = [
        annotate(net, video.load(i), with_box, sign_table, expected=expected)
        for i in range(len(video))
    ]
    shown = sum(a.class_id != net.spec.num_classes - 1 for a in annotations)
    logger.info(f"Annotated {len(annotations)} frames, {shown} predicted foreground")
    return annotations


def write_annotations(
    annotations: Sequence[Annotation], path: Union[str, os.PathLike]
) -> None:
    lines = [ANNOTATION_HEADER] + [a.dumps(i) for i, a in enumerate(annotations)]
    pathlib.Path(path).write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
