#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Abstract class for network layers with explicit forward and backward passes."""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Tuple

import numpy as np

# Parameter store shared by all layers of a network, keyed by "layer{i}.{role}".
Params = Dict[str, np.ndarray]


class BaseLayer(ABC):
    """Base class for network layers.

    Layers hold no tensors of their own. Parameters live in the network's parameter
    store and every forward pass hands back a cache, so any number of passes over
    the same parameters can be in flight at once.

    Args:
        prefix (str): Parameter name prefix of the layer, e.g. "layer3".
    """

    def __init__(self, prefix: str = "") -> None:
        self.prefix = prefix

    def param_names(self) -> List[str]:
        """Names of the trainable parameters this layer reads."""
        return []

    def buffer_names(self) -> List[str]:
        """Names of the non-trainable buffers this layer reads or updates."""
        return []

    def param_shapes(self, in_channels: int) -> Dict[str, Tuple[int, ...]]:
        """Shapes of every parameter and buffer given the input channel count."""
        return {}

    def out_channels(self, in_channels: int) -> int:
        """Channel count of the layer output."""
        return in_channels

    @abstractmethod
    def forward(self, params: Params, x: np.ndarray, train: bool) -> Tuple[np.ndarray, Any]:
        """Run the layer and return its output together with the backward cache."""

    @abstractmethod
    def backward(
        self, params: Params, cache: Any, grad: np.ndarray, guided: bool
    ) -> Tuple[np.ndarray, Params]:
        """Propagate ``grad`` to the layer input and to the layer's parameters."""

    def __repr__(self) -> str:
        """String representation of the layer."""
        return f"{self.__class__.__name__}(prefix={self.prefix!r})"
