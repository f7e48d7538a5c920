#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Network instantiation and the canonical forward and backward passes."""

import copy
import logging
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import numpy.typing as npt

from planefinder.control.options import BackwardMode
from planefinder.meta import BaseLayer, Params
from planefinder.tensor import (
    DTYPE,
    BatchNorm2D,
    Conv2D,
    MaxPool2,
    Mode,
    ReLU,
    as_tensor,
    softmax,
    spatial_max,
    spatial_max_backward,
    spatial_mean,
    spatial_mean_backward,
)

from . import spec as S
from .spec import Activation, Aggregation, NetworkError, NetworkSpec

logger = logging.getLogger(__name__)


class InputShapeError(NetworkError):
    """Raised when an input batch does not fit the network."""


class Trace:
    """Stored intermediates of one forward pass.

    Args:
        input_shape (Tuple[int, ...]): Shape of the network input.
        caches (List[Any]): Backward cache of every layer in order.
        score_shape (Tuple[int, ...]): Shape of the class score maps.
        aggregation_cache (Any): Cache of the class score reduction.
    """

    def __init__(
        self,
        input_shape: Tuple[int, ...],
        caches: List[Any],
        score_shape: Tuple[int, ...],
        aggregation_cache: Any,
    ) -> None:
        self.input_shape = input_shape
        self.caches = caches
        self.score_shape = score_shape
        self.aggregation_cache = aggregation_cache


class ForwardResult:
    """Class score maps, class scores and confidences of a batch.

    Args:
        scores (np.ndarray): Class score maps F of shape (B, K, Hf, Wf).
        logits (np.ndarray): Pre-softmax class scores a of shape (B, K).
        confidences (np.ndarray): Softmax confidences c of shape (B, K).
        trace (Optional[Trace]): Intermediates for a backward pass.
    """

    def __init__(
        self,
        scores: np.ndarray,
        logits: np.ndarray,
        confidences: np.ndarray,
        trace: Optional[Trace] = None,
    ) -> None:
        self.__scores = scores
        self.__logits = logits
        self.__confidences = confidences
        self.__trace = trace

    @property
    def F(self) -> np.ndarray:  # noqa N802
        """Return class score maps."""
        return self.__scores

    @property
    def a(self) -> np.ndarray:
        """Return pre-softmax class scores."""
        return self.__logits

    @property
    def c(self) -> np.ndarray:
        """Return softmax confidences."""
        return self.__confidences

    @property
    def prediction(self) -> np.ndarray:
        """Return the most confident class of every sample."""
        return self.__confidences.argmax(axis=1)

    @property
    def trace(self) -> Optional[Trace]:
        """Return stored intermediates, if kept."""
        return self.__trace

    def __repr__(self) -> str:
        """String representation of ForwardResult."""
        return (
            f"{self.__class__.__name__}(F={self.__scores.shape}, "
            f"prediction={self.prediction.tolist()})"
        )


def _build_layers(spec: NetworkSpec) -> List[BaseLayer]:
    layers: List[BaseLayer] = []
    for i, layer in enumerate(spec.layers):
        prefix = f"layer{i}"
        if isinstance(layer, S.MaxPool2):
            layers.append(MaxPool2(prefix))
            continue
        layers.append(Conv2D(prefix, layer.kh, layer.kw, layer.cout, layer.stride, layer.padding))
        if layer.bn:
            layers.append(BatchNorm2D(prefix, layer.cout))
        if layer.activation is Activation.RELU:
            layers.append(ReLU(prefix))
    return layers


def param_shapes(spec: NetworkSpec) -> Dict[str, Tuple[int, ...]]:
    """Shape of every parameter and buffer of an architecture, in layer order."""
    shapes: Dict[str, Tuple[int, ...]] = {}
    channels = spec.in_channels
    for layer in _build_layers(spec):
        shapes.update(layer.param_shapes(channels))
        channels = layer.out_channels(channels)
    return shapes


class Network:
    """Instantiated parameter set of a NetworkSpec.

    Parameters are initialised from a zero-mean normal with variance
    2/fan-in for kernels, zero biases, unit gamma and zero beta unless a
    complete parameter store is given.

    Args:
        spec (NetworkSpec): Architecture.
        params (Optional[Params]): Parameter store to adopt (Default: None).
        seed (int): Initialisation seed (Default: 0).
        dtype (DTypeLike): Real type of parameters and activations (Default: float32).

    Raises:
        NetworkError: Raised if an adopted store misses or misshapes a tensor.
    """

    def __init__(
        self,
        spec: NetworkSpec,
        params: Optional[Params] = None,
        seed: int = 0,
        dtype: npt.DTypeLike = DTYPE,
    ) -> None:
        self.spec = spec
        self.dtype = np.dtype(dtype)
        self.layers = _build_layers(spec)
        shapes = self.param_shapes()
        if params is None:
            self.params = self._initialise(shapes, seed)
        else:
            for name, shape in shapes.items():
                if name not in params or tuple(params[name].shape) != shape:
                    got = None if name not in params else params[name].shape
                    raise NetworkError(f"Parameter {name} should have shape {shape}, got {got}.")
            self.params = {name: as_tensor(params[name], self.dtype) for name in shapes}

    def param_shapes(self) -> Dict[str, Tuple[int, ...]]:
        """Shape of every parameter and buffer, in layer order."""
        return param_shapes(self.spec)

    def _initialise(self, shapes: Dict[str, Tuple[int, ...]], seed: int) -> Params:
        rng = np.random.default_rng(seed)
        params: Params = {}
        for name, shape in shapes.items():
            role = name.split(".", 1)[1]
            if role == "kernel":
                fan_in = int(np.prod(shape[1:]))
                value = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=shape)
            elif role in ("gamma", "running_var"):
                value = np.ones(shape)
            else:
                value = np.zeros(shape)
            params[name] = value.astype(self.dtype)
        return params

    @property
    def trainable_names(self) -> List[str]:
        """Names of trainable parameters."""
        return [n for layer in self.layers for n in layer.param_names()]

    @property
    def buffer_names(self) -> List[str]:
        """Names of batch-norm running statistics."""
        return [n for layer in self.layers for n in layer.buffer_names()]

    def num_parameters(self) -> int:
        """Count of trainable scalars."""
        return int(sum(self.params[n].size for n in self.trainable_names))

    def astype(self, dtype: npt.DTypeLike) -> "Network":
        """Copy of the network with parameters cast to ``dtype``."""
        params = {k: v.astype(dtype) for k, v in self.params.items()}
        return Network(self.spec, params, dtype=dtype)

    def copy(self) -> "Network":
        """Deep copy of the network."""
        clone = copy.copy(self)
        clone.params = {k: v.copy() for k, v in self.params.items()}
        return clone

    def _check_input(self, batch: np.ndarray) -> np.ndarray:
        batch = np.asarray(batch)
        if batch.ndim == 2:
            batch = batch[None, None]
        elif batch.ndim == 3:
            batch = batch[None]
        batch = as_tensor(batch, self.dtype)
        if batch.shape[1] != self.spec.in_channels:
            raise InputShapeError(
                f"{self.spec.name} expects {self.spec.in_channels} input channels, "
                f"got batch of shape {batch.shape}."
            )
        divisor = self.spec.downsampling
        if self.spec.same_padded and (batch.shape[2] % divisor or batch.shape[3] % divisor):
            raise InputShapeError(
                f"{self.spec.name} needs height and width divisible by {divisor}, "
                f"got {batch.shape[2]}x{batch.shape[3]}."
            )
        return batch

    def forward(
        self, batch: np.ndarray, mode: Union[Mode, str] = Mode.INFER, keep_trace: bool = True
    ) -> ForwardResult:
        """Run the network.

        Args:
            batch (np.ndarray): Input of shape (B, Cin, H, W); (H, W) and
                (Cin, H, W) are promoted to a batch of one.
            mode (Mode): TRAIN uses batch statistics and updates running
                statistics; INFER is a pure function of weights and input
                (Default: Mode.INFER).
            keep_trace (bool): Store intermediates for a backward pass (Default: True).

        Raises:
            InputShapeError: Raised if the input does not fit the network.

        Returns:
            (ForwardResult): F, a, c and the trace.
        """
        x = self._check_input(batch)
        input_shape = x.shape
        train = Mode.parse(mode) is Mode.TRAIN
        caches: List[Any] = []
        for layer in self.layers:
            x, cache = layer.forward(self.params, x, train)
            caches.append(cache if keep_trace else None)

        scores = x
        if self.spec.aggregation is Aggregation.MAX:
            logits, agg_cache = spatial_max(scores)
        else:
            logits, agg_cache = spatial_mean(scores), None
        trace = Trace(input_shape, caches, scores.shape, agg_cache) if keep_trace else None
        return ForwardResult(scores, logits, softmax(logits), trace)

    def backward(
        self,
        trace: Trace,
        seed: np.ndarray,
        mode: Union[BackwardMode, str] = BackwardMode.PLAIN,
        start: Optional[int] = None,
    ) -> Tuple[np.ndarray, Params]:
        """Back-propagate an error seeded at a layer output.

        Args:
            trace (Trace): Intermediates of the forward pass.
            seed (np.ndarray): Error at the output of layer ``start``.
            mode (BackwardMode): ReLU rule (Default: BackwardMode.PLAIN).
            start (Optional[int]): Index into ``layers`` whose output receives the
                seed; None means the class score maps (Default: None).

        Returns:
            (Tuple[np.ndarray, Params]): Error at the network input and gradients
                of the trainable parameters reached.
        """
        if trace is None:
            raise NetworkError("Backward pass needs a forward pass run with keep_trace=True.")
        guided = BackwardMode.parse(mode) is BackwardMode.GUIDED
        start = len(self.layers) - 1 if start is None else start
        grad = np.asarray(seed, dtype=self.dtype)
        grads: Params = {}
        for index in range(start, -1, -1):
            layer = self.layers[index]
            grad, layer_grads = layer.backward(self.params, trace.caches[index], grad, guided)
            grads.update(layer_grads)
        return grad, grads

    def backward_logits(
        self,
        trace: Trace,
        seed: np.ndarray,
        mode: Union[BackwardMode, str] = BackwardMode.PLAIN,
    ) -> Tuple[np.ndarray, Params]:
        """Back-propagate an error seeded at the pre-softmax class scores."""
        if self.spec.aggregation is Aggregation.MAX:
            grad = spatial_max_backward(trace.score_shape, trace.aggregation_cache, seed)
        else:
            grad = spatial_mean_backward(trace.score_shape, seed)
        return self.backward(trace, grad, mode)

    def __repr__(self) -> str:
        """String representation of Network."""
        return (
            f"{self.__class__.__name__}(spec={self.spec.name}, "
            f"parameters={self.num_parameters()}, dtype={self.dtype})"
        )


def forward(
    net: Network, batch: np.ndarray, mode: Union[Mode, str] = Mode.INFER
) -> ForwardResult:
    """Run ``net`` on ``batch``; see Network.forward."""
    return net.forward(batch, mode)
