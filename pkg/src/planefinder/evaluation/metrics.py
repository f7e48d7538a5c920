#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Detection metrics: confusion matrix, per-class precision, recall and F1."""

import logging
import os
import pathlib
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from planefinder.net import Network
from planefinder.synth.dataset import Manifest
from planefinder.tensor import Mode

from .errors import EmptyManifestError
from .frames import stack_frames

logger = logging.getLogger(__name__)


@dataclass
class MetricsReport:
    """Per-class and macro-averaged detection metrics.

    Args:
        confusion (np.ndarray): (K, K) counts; row is the true class, column the
            predicted class.
        precision (np.ndarray): Per-class TP / (TP + FP); 0 if never predicted.
        recall (np.ndarray): Per-class TP / (TP + FN); 0 without samples.
        f1 (np.ndarray): Per-class harmonic mean of precision and recall.
    """

    confusion: np.ndarray
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray

    @property
    def support(self) -> np.ndarray:
        return self.confusion.sum(axis=1)

    @property
    def num_classes(self) -> int:
        return self.confusion.shape[0]

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.confusion) / self.confusion.sum())

    def _macro(self, values: np.ndarray) -> float:
        present = self.support > 0
        return float(values[present].mean())

    @property
    def macro_precision(self) -> float:
        return self._macro(self.precision)

    @property
    def macro_recall(self) -> float:
        return self._macro(self.recall)

    @property
    def macro_f1(self) -> float:
        """Unweighted mean F1 over the classes that have samples."""
        return self._macro(self.f1)

    def dumps(self) -> str:
        """CSV with one row per class and a closing macro row."""
        lines = ["class_id,precision,recall,f1,support"]
        for k in range(self.num_classes):
            lines.append(
                f"{k},{self.precision[k]:.6f},{self.recall[k]:.6f},"
                f"{self.f1[k]:.6f},{int(self.support[k])}"
            )
        lines.append(
            f"macro,{self.macro_precision:.6f},{self.macro_recall:.6f},"
            f"{self.macro_f1:.6f},{int(self.support.sum())}"
        )
        return "".join(f"{line}\n" for line in lines)

    def dumps_confusion(self) -> str:
        """CSV of the confusion matrix; row is the true class, column the predicted one."""
        lines = ["true," + ",".join(f"pred_{k}" for k in range(self.num_classes))]
        for k, row in enumerate(self.confusion):
            lines.append(f"{k}," + ",".join(str(int(v)) for v in row))
        return "".join(f"{line}\n" for line in lines)

    def write(self, path: Union[str, os.PathLike]) -> None:
        pathlib.Path(path).write_text(self.dumps(), encoding="utf-8")

    def write_confusion(self, path: Union[str, os.PathLike]) -> None:
        pathlib.Path(path).write_text(self.dumps_confusion(), encoding="utf-8")

    def summary(self) -> str:
        return (
            f"{int(self.support.sum())} images, accuracy {self.accuracy:.3f}, "
            f"macro precision {self.macro_precision:.3f}, "
            f"macro recall {self.macro_recall:.3f}, macro F1 {self.macro_f1:.3f}"
        )


def _ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros(num.shape, dtype=np.float64)
    np.divide(num, den, out=out, where=den > 0)
    return out


def metrics_from_predictions(
    labels: Sequence[int], predictions: Sequence[int], num_classes: int
) -> MetricsReport:
    """Metrics of a set of predictions against their labels.

    Raises:
        EmptyManifestError: Raised if there are no labels.
    """
    labels = np.asarray(labels, dtype=np.int64)
    predictions = np.asarray(predictions, dtype=np.int64)
    if labels.size == 0:
        raise EmptyManifestError("No samples to compute metrics on.")
    confusion = np.zeros((num_classes, num_classes), dtype=np.int64)
    np.add.at(confusion, (labels, predictions), 1)
    tp = np.diag(confusion).astype(np.float64)
    precision = _ratio(tp, confusion.sum(axis=0))
    recall = _ratio(tp, confusion.sum(axis=1))
    f1 = _ratio(2 * precision * recall, precision + recall)
    return MetricsReport(confusion, precision, recall, f1)


def predict(net: Network, manifest: Manifest, batch: int = 16) -> np.ndarray:
    """Most confident class of every image in the manifest."""
    records = manifest.records
    out = []
    for start in range(0, len(records), batch):
        chunk = records[start : start + batch]
        images = stack_frames(net, (r.load() for r in chunk))
        out.append(net.forward(images, Mode.INFER, keep_trace=False).prediction)
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


def evaluate(net: Network, manifest: Manifest, batch: int = 16) -> MetricsReport:
    """Classify every image by its highest confidence and score the result.

    Raises:
        EmptyManifestError: Raised if the manifest is empty.
        FrameSizeError: Raised if an image does not fit the network.
    """
    if len(manifest) == 0:
        raise EmptyManifestError("The manifest to evaluate is empty.")
    predictions = predict(net, manifest, batch)
    labels = [r.class_id for r in manifest]
    report = metrics_from_predictions(labels, predictions, net.spec.num_classes)
    logger.info(f"Evaluated {net.spec.name}: {report.summary()}")
    return report
