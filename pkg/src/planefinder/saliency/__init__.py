#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Saliency maps and the confidence maps built from them."""

from .confidence import ConfidenceMap, confidence_map, gaussian_kernel, select_sign
from .export import read_raw, write_map_pgm, write_raw
from .saliency import (
    ClassIndexError,
    Method,
    SaliencyError,
    SaliencyMap,
    guided_saliency,
    per_neuron_saliency,
    plain_saliency,
    saliency,
    weighted_saliency,
)
