#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Declarative architecture descriptions."""

from dataclasses import dataclass, field
from typing import Tuple, Union

from planefinder.meta.mixins import EnhancedEnum
from planefinder.tensor import Padding


class NetworkError(Exception):
    """Base error for network definitions and networks."""


class UnknownArchitectureError(NetworkError):
    """Raised when a built-in architecture name is not known."""


class InvalidSpecError(NetworkError):
    """Raised when a layer list breaks the architecture rules."""


class Activation(EnhancedEnum):
    """Activation following a convolution."""

    RELU = "relu"
    LINEAR = "linear"


class Aggregation(EnhancedEnum):
    """Reduction of class score maps to one score per class."""

    MEAN = "mean"
    MAX = "max"


@dataclass(frozen=True)
class ConvBN:
    """Convolution, optionally batch-normalised, followed by an activation."""

    kh: int
    kw: int
    cout: int
    stride: int = 1
    activation: Activation = Activation.RELU
    bn: bool = True
    padding: Padding = Padding.SAME


@dataclass(frozen=True)
class MaxPool2:
    """2x2 max pooling with stride 2."""


LayerSpec = Union[ConvBN, MaxPool2]


@dataclass(frozen=True)
class NetworkSpec:
    """Ordered layer list of a fully convolutional classifier.

    The last layer must be the linear, non-normalised convolution producing one
    class score map per class.

    Args:
        name (str): Architecture name.
        layers (Tuple[LayerSpec, ...]): Layers in order.
        in_channels (int): Input channels (Default: 1).
        num_classes (int): Class count K including background (Default: 14).
        aggregation (Aggregation): Class score map reduction (Default: MEAN).

    Raises:
        InvalidSpecError: Raised if the final layer is not a linear 1-to-K conv
            without batch norm, or if any earlier layer is.
    """

    name: str
    layers: Tuple[LayerSpec, ...]
    in_channels: int = 1
    num_classes: int = 14
    aggregation: Aggregation = field(default=Aggregation.MEAN)

    def __post_init__(self) -> None:
        if not self.layers or not isinstance(self.layers[-1], ConvBN):
            raise InvalidSpecError(f"{self.name}: the last layer must be a convolution.")
        final = self.layers[-1]
        if (
            final.cout != self.num_classes
            or final.activation is not Activation.LINEAR
            or final.bn
        ):
            raise InvalidSpecError(
                (
                    f"{self.name}: the last layer must be a linear convolution with "
                    f"{self.num_classes} outputs and no batch norm, got {final}."
                )
            )
        for i, layer in enumerate(self.layers[:-1]):
            linear = isinstance(layer, ConvBN) and layer.activation is Activation.LINEAR
            if linear and not layer.bn:
                if layer.cout == self.num_classes:
                    raise InvalidSpecError(
                        f"{self.name}: layer {i} duplicates the class score layer."
                    )

    @property
    def downsampling(self) -> int:
        """Total spatial downsampling factor."""
        factor = 1
        for layer in self.layers:
            factor *= 2 if isinstance(layer, MaxPool2) else layer.stride
        return factor

    @property
    def same_padded(self) -> bool:
        """True when every convolution pads to keep its spatial size."""
        return all(
            layer.padding is Padding.SAME for layer in self.layers if isinstance(layer, ConvBN)
        )

    @property
    def bn_count(self) -> int:
        """Number of batch-normalised layers."""
        return sum(1 for layer in self.layers if isinstance(layer, ConvBN) and layer.bn)

    def conv_channels(self) -> Tuple[int, ...]:
        """Output channel count of every convolution in order."""
        return tuple(layer.cout for layer in self.layers if isinstance(layer, ConvBN))


def receptive_field(spec: NetworkSpec) -> Tuple[int, int]:
    """Receptive field of a class score map cell.

    Returns:
        (Tuple[int, int]): Side of the receptive field in input pixels and the
            input-pixel distance between neighbouring cells.
    """
    size, jump = 1, 1
    for layer in spec.layers:
        if isinstance(layer, MaxPool2):
            size += jump
            jump *= 2
        else:
            size += (layer.kh - 1) * jump
            jump *= layer.stride
    return size, jump


_VGG_BLOCKS = ((2, 1), (2, 2), (3, 4), (3, 8), (3, 8))


def scaled_sononet(divisor: int, num_classes: int = 14, in_channels: int = 1) -> NetworkSpec:
    """SonoNet family member with every channel count divided by ``divisor``.

    Thirteen 3x3 batch-normalised convolutions in five VGG blocks, max pooling
    after the first four blocks only, then a 1x1 batch-normalised adaptation
    layer with half the last feature channel count and the linear 1x1 class
    score layer.

    Args:
        divisor (int): Channel divisor; 1 gives 64 kernels in the first layer.
        num_classes (int): Class count (Default: 14).
        in_channels (int): Input channels (Default: 1).

    Raises:
        InvalidSpecError: Raised if the divisor does not divide 64.

    Returns:
        (NetworkSpec): Architecture description.
    """
    if divisor < 1 or 64 % divisor:
        raise InvalidSpecError(f"Channel divisor must divide 64, got {divisor}.")
    base = 64 // divisor
    layers = []
    for block, (repeats, width) in enumerate(_VGG_BLOCKS):
        layers.extend(ConvBN(3, 3, base * width) for _ in range(repeats))
        if block < len(_VGG_BLOCKS) - 1:
            layers.append(MaxPool2())
    layers.append(ConvBN(1, 1, base * 8 // 2))
    layers.append(ConvBN(1, 1, num_classes, activation=Activation.LINEAR, bn=False))
    return NetworkSpec(f"sononet{base}", tuple(layers), in_channels, num_classes)


def smallnet(num_classes: int = 14, in_channels: int = 1) -> NetworkSpec:
    """Reduced architecture without batch normalisation."""
    layers = (
        ConvBN(7, 7, 32, stride=2, bn=False),
        MaxPool2(),
        ConvBN(5, 5, 64, bn=False),
        MaxPool2(),
        ConvBN(3, 3, 128, bn=False),
        ConvBN(3, 3, 128, bn=False),
        MaxPool2(),
        ConvBN(1, 1, 64, bn=False),
        ConvBN(1, 1, num_classes, activation=Activation.LINEAR, bn=False),
    )
    return NetworkSpec("smallnet", layers, in_channels, num_classes)


BUILTIN_ARCHITECTURES = ("sononet64", "sononet32", "sononet16", "sononet8", "smallnet")


def builtin_spec(name: str, num_classes: int = 14, in_channels: int = 1) -> NetworkSpec:
    """Look up a built-in architecture.

    Args:
        name (str): One of sononet64, sononet32, sononet16, sononet8, smallnet.
        num_classes (int): Class count (Default: 14).
        in_channels (int): Input channels (Default: 1).

    Raises:
        UnknownArchitectureError: Raised if the name is not built in.

    Returns:
        (NetworkSpec): Architecture description.
    """
    dispatch = {
        "sononet64": lambda: scaled_sononet(1, num_classes, in_channels),
        "sononet32": lambda: scaled_sononet(2, num_classes, in_channels),
        "sononet16": lambda: scaled_sononet(4, num_classes, in_channels),
        "sononet8": lambda: scaled_sononet(8, num_classes, in_channels),
        "smallnet": lambda: smallnet(num_classes, in_channels),
    }
    if name not in dispatch:
        raise UnknownArchitectureError(
            f"{name} is not a built-in architecture. Choose from {', '.join(dispatch)}."
        )
    return dispatch[name]()
