#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Detection metrics, annotation, retrieval, localisation scoring and benchmarks."""

from .annotate import Annotation, annotate, annotate_video, write_annotations
from .bench import BenchReport, BenchRow, bench, bench_network
from .errors import EmptyManifestError, EvaluationError, FrameSizeError, MissingFramesError
from .frames import prepare_frame
from .localization_eval import BoxResult, LocalizationReport, evaluate_localization
from .metrics import MetricsReport, evaluate, metrics_from_predictions, predict
from .retrieve import (
    Retrieval,
    RetrievalReport,
    best_frames,
    evaluate_retrieval,
    read_videos,
    retrieve,
)
