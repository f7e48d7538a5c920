#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Detect worker count on host system."""

import logging
import os

logger = logging.getLogger(__name__)


def thread_count() -> int:
    """Get number of allowable workers on host system.

    Returns:
        (int): Value of PLANEFINDER_NUM_THREADS if it is a positive integer,
            otherwise os.cpu_count() (Default: 1 if the count is unknown).
    """
    env_var = os.getenv("PLANEFINDER_NUM_THREADS")
    if env_var is not None:
        try:
            value = int(env_var)
            if value >= 1:
                return value
        except ValueError:
            pass
        logger.warning(f"Ignoring invalid PLANEFINDER_NUM_THREADS={env_var!r}")
    return os.cpu_count() or 1
