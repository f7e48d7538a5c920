#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Deterministic synthetic planes, backgrounds, datasets and sweeps."""

from .dataset import (
    Manifest,
    ManifestError,
    SampleRecord,
    SynthError,
    gen_dataset,
    split_by_case,
    split_cases,
    strip_boxes,
)
from .scene import CANVAS, SceneParams, gen_background, gen_plane, render_scene, sample_scene
from .shapes import TEMPLATES, Template, polarity_group, template
from .video import Video, VideoError, gen_video
