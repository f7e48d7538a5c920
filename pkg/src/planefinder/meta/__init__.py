#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Public metaclasses used inside planefinder."""

from ._base_layer import BaseLayer, Params
