#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Weakly supervised scan plane detection and localisation."""

__version__ = "0.1.0"
