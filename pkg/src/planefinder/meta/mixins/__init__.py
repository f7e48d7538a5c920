#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Public mixins used inside planefinder."""

from .dict_like import DictLike
from .enhanced_enum import EnhancedEnum
