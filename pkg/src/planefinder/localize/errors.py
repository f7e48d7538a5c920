#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Errors raised while extracting bounding boxes."""


class LocalizationError(Exception):
    """Base error for localisation."""


class ConstantMapError(LocalizationError):
    """Raised when a map has a single value and admits no threshold."""


class EmptyMaskError(LocalizationError):
    """Raised when a box is requested around an empty mask."""


class InvalidBoxError(LocalizationError):
    """Raised when box corners do not describe a non-empty rectangle."""
