#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Category-specific saliency of a single image."""

import logging
from typing import Optional, Tuple, Union

import numpy as np

from planefinder.control import Configure
from planefinder.control.options import BackwardMode
from planefinder.meta.mixins import EnhancedEnum
from planefinder.net import ForwardResult, Network
from planefinder.tensor import Mode

logger = logging.getLogger(__name__)


class SaliencyError(Exception):
    """Base error for saliency computation."""


class ClassIndexError(SaliencyError):
    """Raised when a class index is outside the network's classes."""


class Method(EnhancedEnum):
    """How a saliency map was computed."""

    PLAIN = "plain"
    GUIDED = "guided"
    WEIGHTED = "weighted"
    PER_NEURON = "per_neuron"


class SaliencyMap:
    """Signed per-pixel saliency with the spatial size of the input image.

    Args:
        values (np.ndarray): Saliency of shape (H, W).
        method (Method): How the map was computed.
        class_index (int): Class the map explains.
        result (Optional[ForwardResult]): Forward pass the map was computed from.
    """

    def __init__(
        self,
        values: np.ndarray,
        method: Method,
        class_index: int,
        result: Optional[ForwardResult] = None,
    ) -> None:
        self.values = values
        self.method = method
        self.class_index = class_index
        self.result = result

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(method={self.method.value}, "
            f"class_index={self.class_index}, shape={self.values.shape})"
        )


def _prepare(
    net: Network, image: np.ndarray, k: int, result: Optional[ForwardResult] = None
) -> Tuple[Network, ForwardResult]:
    if not 0 <= k < net.spec.num_classes:
        raise ClassIndexError(
            f"Class {k} is outside the {net.spec.num_classes} classes of {net.spec.name}."
        )
    image = np.asarray(image)
    if image.ndim == 2:
        image = image[None]
    if image.ndim != 3:
        raise SaliencyError(f"Saliency takes one (H, W) or (C, H, W) image, got {image.shape}.")
    if Configure("saliency").freeze_bn:
        if result is not None:
            if result.trace is None or result.trace.input_shape != (1,) + image.shape:
                raise SaliencyError(
                    f"The forward result does not belong to an image of shape {image.shape}."
                )
            return net, result
        return net, net.forward(image[None], Mode.INFER)
    # batch statistics of a single image; keep the caller's running statistics
    scratch = net.copy()
    return scratch, scratch.forward(image[None], Mode.TRAIN)


def _reduce(dx: np.ndarray) -> np.ndarray:
    return dx[0].sum(axis=0)


def _class_gradient(
    net: Network,
    image: np.ndarray,
    k: int,
    mode: BackwardMode,
    method: Method,
    result: Optional[ForwardResult],
) -> SaliencyMap:
    net, result = _prepare(net, image, k, result)
    seed = np.zeros_like(result.a)
    seed[0, k] = 1.0
    dx, _ = net.backward_logits(result.trace, seed, mode)
    return SaliencyMap(_reduce(dx), method, k, result)


def plain_saliency(
    net: Network, image: np.ndarray, k: int, result: Optional[ForwardResult] = None
) -> SaliencyMap:
    """Gradient of the class score a_k with respect to the image.

    Raises:
        ClassIndexError: Raised if ``k`` is not a class of the network.
    """
    return _class_gradient(net, image, k, BackwardMode.PLAIN, Method.PLAIN, result)


def guided_saliency(
    net: Network, image: np.ndarray, k: int, result: Optional[ForwardResult] = None
) -> SaliencyMap:
    """Guided backpropagation of the class score a_k.

    ReLU units pass an error back only where both their input and the
    incoming error are positive.

    Raises:
        ClassIndexError: Raised if ``k`` is not a class of the network.
    """
    return _class_gradient(net, image, k, BackwardMode.GUIDED, Method.GUIDED, result)


def _mode(mode: Optional[Union[BackwardMode, str]]) -> BackwardMode:
    return Configure("saliency").backward_mode if mode is None else BackwardMode.parse(mode)


def weighted_saliency(
    net: Network,
    image: np.ndarray,
    k: int,
    mode: Optional[Union[BackwardMode, str]] = None,
    result: Optional[ForwardResult] = None,
) -> SaliencyMap:
    """Saliency of every class score map neuron weighted by its positive activation.

    Computed in a single backward pass seeded at the class score maps with F_k
    thresholded at zero, which equals summing each positive neuron's gradient
    scaled by its activation.

    Args:
        net (Network): Trained network.
        image (np.ndarray): Network input of shape (H, W) or (C, H, W).
        k (int): Class to explain.
        mode (Optional[BackwardMode]): ReLU rule; None uses the configured rule.
        result (Optional[ForwardResult]): Inference pass of ``image`` with its trace
            kept, reused when batch norm is frozen (Default: None).

    Raises:
        ClassIndexError: Raised if ``k`` is not a class of the network.
        SaliencyError: Raised if ``result`` was computed on another input shape.

    Returns:
        (SaliencyMap): Map of shape (H, W).
    """
    net, result = _prepare(net, image, k, result)
    seed = np.zeros_like(result.F)
    seed[0, k] = np.maximum(result.F[0, k], 0)
    dx, _ = net.backward(result.trace, seed, _mode(mode))
    return SaliencyMap(_reduce(dx), Method.WEIGHTED, k, result)


def per_neuron_saliency(
    net: Network,
    image: np.ndarray,
    k: int,
    mode: Optional[Union[BackwardMode, str]] = None,
    result: Optional[ForwardResult] = None,
) -> SaliencyMap:
    """Sum of one backward pass per positive class score map neuron.

    Each neuron's input gradient is scaled by its activation. One backward
    pass per cell makes this practical only for small class score maps.

    Raises:
        ClassIndexError: Raised if ``k`` is not a class of the network.
    """
    net, result = _prepare(net, image, k, result)
    rule = _mode(mode)
    scores = result.F[0, k]
    total = np.zeros(result.trace.input_shape[2:], dtype=np.float64)
    for y, x in zip(*np.nonzero(scores > 0)):
        seed = np.zeros_like(result.F)
        seed[0, k, y, x] = 1.0
        dx, _ = net.backward(result.trace, seed, rule)
        total += float(scores[y, x]) * _reduce(dx)
    logger.debug(f"Per-neuron saliency used {int((scores > 0).sum())} backward passes")
    return SaliencyMap(total.astype(net.dtype), Method.PER_NEURON, k, result)


def saliency(
    net: Network,
    image: np.ndarray,
    k: int,
    method: Union[Method, str] = Method.WEIGHTED,
    result: Optional[ForwardResult] = None,
) -> SaliencyMap:
    """Dispatch to the saliency routine named by ``method``.

    A forward result of the same image with its trace kept is reused instead
    of running the network again, unless batch norm runs on batch statistics.
    """
    dispatch = {
        Method.PLAIN: plain_saliency,
        Method.GUIDED: guided_saliency,
        Method.WEIGHTED: weighted_saliency,
        Method.PER_NEURON: per_neuron_saliency,
    }
    return dispatch[Method.parse(method)](net, image, k, result=result)
