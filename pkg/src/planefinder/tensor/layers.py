#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Layer objects binding the primitives to a network's parameter store."""

from typing import Any, Dict, List, Tuple

import numpy as np

from planefinder.control.options import BackwardMode
from planefinder.meta import BaseLayer, Params

from .functional import (
    BN_EPS,
    BN_MOMENTUM,
    batchnorm_backward,
    batchnorm_forward,
    conv2d_backward,
    conv2d_forward,
    maxpool2,
    maxpool2_backward,
    relu,
    relu_backward,
)
from .tensor import Mode, Padding


class Conv2D(BaseLayer):
    """Convolution with bias.

    Args:
        prefix (str): Parameter name prefix.
        kh (int): Kernel height.
        kw (int): Kernel width.
        cout (int): Output channels.
        stride (int): Stride (Default: 1).
        padding (Padding): Padding (Default: Padding.SAME).
    """

    def __init__(
        self,
        prefix: str,
        kh: int,
        kw: int,
        cout: int,
        stride: int = 1,
        padding: Padding = Padding.SAME,
    ) -> None:
        super().__init__(prefix)
        self.kh = kh
        self.kw = kw
        self.cout = cout
        self.stride = stride
        self.padding = Padding.parse(padding)

    def param_names(self) -> List[str]:
        return [f"{self.prefix}.kernel", f"{self.prefix}.bias"]

    def param_shapes(self, in_channels: int) -> Dict[str, Tuple[int, ...]]:
        return {
            f"{self.prefix}.kernel": (self.cout, in_channels, self.kh, self.kw),
            f"{self.prefix}.bias": (self.cout,),
        }

    def out_channels(self, in_channels: int) -> int:
        return self.cout

    def forward(self, params: Params, x: np.ndarray, train: bool) -> Tuple[np.ndarray, Any]:
        kernel = params[f"{self.prefix}.kernel"].astype(x.dtype, copy=False)
        bias = params[f"{self.prefix}.bias"].astype(x.dtype, copy=False)
        return conv2d_forward(x, kernel, bias, self.stride, self.padding)

    def backward(
        self, params: Params, cache: Any, grad: np.ndarray, guided: bool
    ) -> Tuple[np.ndarray, Params]:
        dx, dkernel, dbias = conv2d_backward(cache, grad)
        return dx, {f"{self.prefix}.kernel": dkernel, f"{self.prefix}.bias": dbias}

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(prefix={self.prefix!r}, "
            f"kernel={self.kh}x{self.kw}x{self.cout}/{self.stride}, padding={self.padding.value})"
        )


class BatchNorm2D(BaseLayer):
    """Batch normalisation with running statistics.

    Args:
        prefix (str): Parameter name prefix.
        cout (int): Channel count.
        momentum (float): Running statistics momentum (Default: 0.1).
        eps (float): Variance offset (Default: 1e-5).
    """

    def __init__(
        self, prefix: str, cout: int, momentum: float = BN_MOMENTUM, eps: float = BN_EPS
    ) -> None:
        super().__init__(prefix)
        self.cout = cout
        self.momentum = momentum
        self.eps = eps

    def param_names(self) -> List[str]:
        return [f"{self.prefix}.gamma", f"{self.prefix}.beta"]

    def buffer_names(self) -> List[str]:
        return [f"{self.prefix}.running_mean", f"{self.prefix}.running_var"]

    def param_shapes(self, in_channels: int) -> Dict[str, Tuple[int, ...]]:
        return {name: (self.cout,) for name in self.param_names() + self.buffer_names()}

    def forward(self, params: Params, x: np.ndarray, train: bool) -> Tuple[np.ndarray, Any]:
        p = self.prefix
        return batchnorm_forward(
            x,
            params[f"{p}.gamma"],
            params[f"{p}.beta"],
            params[f"{p}.running_mean"],
            params[f"{p}.running_var"],
            Mode.TRAIN if train else Mode.INFER,
            self.momentum,
            self.eps,
        )

    def backward(
        self, params: Params, cache: Any, grad: np.ndarray, guided: bool
    ) -> Tuple[np.ndarray, Params]:
        dx, dgamma, dbeta = batchnorm_backward(cache, grad)
        return dx, {f"{self.prefix}.gamma": dgamma, f"{self.prefix}.beta": dbeta}


class ReLU(BaseLayer):
    """Rectified linear unit; the only layer whose backward depends on the rule."""

    def forward(self, params: Params, x: np.ndarray, train: bool) -> Tuple[np.ndarray, Any]:
        return relu(x), x

    def backward(
        self, params: Params, cache: Any, grad: np.ndarray, guided: bool
    ) -> Tuple[np.ndarray, Params]:
        mode = BackwardMode.GUIDED if guided else BackwardMode.PLAIN
        return relu_backward(cache, grad, mode), {}


class MaxPool2(BaseLayer):
    """2x2 max pooling with stride 2."""

    def forward(self, params: Params, x: np.ndarray, train: bool) -> Tuple[np.ndarray, Any]:
        return maxpool2(x)

    def backward(
        self, params: Params, cache: Any, grad: np.ndarray, guided: bool
    ) -> Tuple[np.ndarray, Params]:
        return maxpool2_backward(cache, grad), {}
