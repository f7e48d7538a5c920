#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Exceptions raised by the evaluation harness."""


class EvaluationError(Exception):
    """Base error for evaluation."""


class EmptyManifestError(EvaluationError):
    """Raised when there is nothing to evaluate."""


class FrameSizeError(EvaluationError):
    """Raised when a frame does not have the size the network expects."""


class MissingFramesError(EvaluationError):
    """Raised when a video has no frames or a frame cannot be read."""
