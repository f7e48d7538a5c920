#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Dense tensors and the forward/backward implementations of every layer."""

from planefinder.control.options import BackwardMode

from .functional import (
    batchnorm,
    batchnorm_backward,
    batchnorm_forward,
    conv2d,
    conv2d_backward,
    conv2d_forward,
    maxpool2,
    maxpool2_backward,
    relu,
    relu_backward,
    softmax,
    softmax_xent,
    spatial_max,
    spatial_max_backward,
    spatial_mean,
    spatial_mean_backward,
)
from .gradcheck import finite_diff_check
from .layers import BatchNorm2D, Conv2D, MaxPool2, ReLU
from .tensor import (
    DTYPE,
    LabelRangeError,
    Mode,
    Padding,
    Tensor,
    TensorError,
    TensorShapeError,
    as_tensor,
    element_index,
)
