#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Retrospective retrieval of the best frame of every class in a recording."""

import logging
import os
import pathlib
from dataclasses import dataclass
from typing import Dict, List, Sequence, Union

import numpy as np

from planefinder.net import Network
from planefinder.synth.video import Video, VideoError
from planefinder.tensor import Mode

from .errors import EmptyManifestError, MissingFramesError
from .frames import stack_frames

logger = logging.getLogger(__name__)


@dataclass
class Retrieval:
    """Per-frame confidences of one video and the frame picked for each class.

    Args:
        confidences (np.ndarray): Softmax confidences of shape (N, K).
        best (Dict[int, int]): Frame index of maximal confidence per foreground class.
    """

    confidences: np.ndarray
    best: Dict[int, int]

    def correct(self, video: Video) -> Dict[int, bool]:
        """Whether each class shown in ``video`` was retrieved inside its span."""
        out = {}
        for k, (first, last) in video.spans().items():
            if k in self.best:
                out[k] = first <= self.best[k] <= last
        return out


def best_frames(confidences: np.ndarray, background: int) -> Dict[int, int]:
    """First frame of maximal confidence for every class below ``background``."""
    return {k: int(np.argmax(confidences[:, k])) for k in range(background)}


def retrieve(net: Network, video: Video, batch: int = 16) -> Retrieval:
    """Confidence of every class in every frame, then the argmax frame per class.

    Args:
        net (Network): Trained network; the last class is background.
        video (Video): Recorded sweep.
        batch (int): Frames per forward pass (Default: 16).

    Raises:
        MissingFramesError: Raised if the video has no frames.

    Returns:
        (Retrieval): Confidences and retrieved frame indices.
    """
    if len(video) == 0:
        raise MissingFramesError("The video has no frames to retrieve from.")
    chunks = []
    for start in range(0, len(video), batch):
        stop = min(start + batch, len(video))
        images = stack_frames(net, (video.load(i) for i in range(start, stop)))
        chunks.append(net.forward(images, Mode.INFER, keep_trace=False).c)
    confidences = np.concatenate(chunks)
    background = net.spec.num_classes - 1
    best = best_frames(confidences, background)
    logger.debug(f"Retrieved frames {best} from {len(video)} frames")
    return Retrieval(confidences, best)


@dataclass
class RetrievalReport:
    """Retrieval hits and trials per class over a set of videos."""

    hits: np.ndarray
    trials: np.ndarray

    @property
    def accuracy(self) -> np.ndarray:
        """Per-class accuracy; NaN for classes never shown."""
        out = np.full(self.hits.shape, np.nan)
        np.divide(self.hits, self.trials, out=out, where=self.trials > 0)
        return out

    @property
    def mean_accuracy(self) -> float:
        """Average of the per-class accuracies of classes that were shown."""
        return float(np.nanmean(self.accuracy))

    @property
    def pooled_accuracy(self) -> float:
        """Fraction of all (video, class) pairs retrieved correctly."""
        return float(self.hits.sum() / self.trials.sum())

    def dumps(self) -> str:
        lines = ["class_id,hits,trials,accuracy"]
        for k, (h, t) in enumerate(zip(self.hits, self.trials)):
            accuracy = "" if t == 0 else f"{h / t:.6f}"
            lines.append(f"{k},{int(h)},{int(t)},{accuracy}")
        return "".join(f"{line}\n" for line in lines)

    def write(self, path: Union[str, os.PathLike]) -> None:
        pathlib.Path(path).write_text(self.dumps(), encoding="utf-8")

    def summary(self) -> str:
        return (
            f"{int(self.trials.sum())} retrievals, mean class accuracy "
            f"{self.mean_accuracy:.3f}, pooled accuracy {self.pooled_accuracy:.3f}"
        )


def evaluate_retrieval(net: Network, videos: Sequence[Video]) -> RetrievalReport:
    """Retrieve from every video and score against the annotation tracks.

    Raises:
        EmptyManifestError: Raised if no video shows any foreground class.
    """
    background = net.spec.num_classes - 1
    hits = np.zeros(background, dtype=np.int64)
    trials = np.zeros(background, dtype=np.int64)
    for video in videos:
        for k, ok in retrieve(net, video).correct(video).items():
            trials[k] += 1
            hits[k] += int(ok)
    if trials.sum() == 0:
        raise EmptyManifestError("No video shows a foreground class.")
    report = RetrievalReport(hits, trials)
    logger.info(f"Retrieval over {len(videos)} videos: {report.summary()}")
    return report


def read_videos(directories: Sequence[Union[str, os.PathLike]]) -> List[Video]:
    """Read video directories.

    Raises:
        MissingFramesError: Raised if a directory is not a readable video.
    """
    videos = []
    for directory in directories:
        try:
            videos.append(Video.read(directory))
        except VideoError as e:
            raise MissingFramesError(str(e)) from e
    return videos
