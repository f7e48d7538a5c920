#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Configuration for planefinder."""

from .configure import Configure
from .options import BackwardMode, ClassSignTable, SignMode, default_sign_table
from .train_config import TrainConfig, TrainConfigError
