#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Architecture descriptions, networks and weight files."""

from .equivalence import sliding_window_equiv_check
from .network import ForwardResult, InputShapeError, Network, Trace, forward, param_shapes
from .spec import (
    BUILTIN_ARCHITECTURES,
    Activation,
    Aggregation,
    ConvBN,
    InvalidSpecError,
    LayerSpec,
    MaxPool2,
    NetworkError,
    NetworkSpec,
    UnknownArchitectureError,
    builtin_spec,
    receptive_field,
    scaled_sononet,
    smallnet,
)
from .weights import (
    TruncatedWeightFileError,
    WeightFileError,
    WeightFormatError,
    WeightShapeError,
    load_weights,
    read_tensors,
    save_weights,
)
