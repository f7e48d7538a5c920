#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Public utilities used inside planefinder."""

from .image_io import read_pgm, write_pgm
from .pool import fan_out
from .rng import child_rng
from .thread_count import thread_count
