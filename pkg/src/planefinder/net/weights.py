#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Bit-exact weight serialisation.

File layout, little-endian throughout:

    magic "SNNW" | version u32 = 1 | tensor count u32
    per tensor: name length u16 | UTF-8 name | rank u8 | extents u32 x rank
                | dtype code u8 (0 = 32-bit real) | raw data
"""

import logging
import os
import pathlib
import struct
from typing import Dict, Union

import numpy as np

from .network import Network, param_shapes
from .spec import NetworkError, NetworkSpec

logger = logging.getLogger(__name__)

MAGIC = b"SNNW"
VERSION = 1
_DTYPES = {0: np.dtype("<f4")}


class WeightFileError(NetworkError):
    """Base error for weight files."""


class WeightFormatError(WeightFileError):
    """Raised when the magic bytes, version or dtype code are wrong."""


class WeightShapeError(WeightFileError):
    """Raised when a stored tensor does not match the architecture."""


class TruncatedWeightFileError(WeightFileError):
    """Raised when the file ends before its declared content."""


def save_weights(net: Network, path: Union[str, os.PathLike]) -> None:
    """Write every parameter and buffer of ``net`` to ``path``.

    Args:
        net (Network): Network to save; parameters are stored as 32-bit reals.
        path (Union[str, os.PathLike]): Destination file.
    """
    chunks = [MAGIC, struct.pack("<II", VERSION, len(net.params))]
    for name, tensor in net.params.items():
        encoded = name.encode("utf-8")
        chunks.append(struct.pack("<H", len(encoded)))
        chunks.append(encoded)
        chunks.append(struct.pack("<B", tensor.ndim))
        chunks.append(struct.pack(f"<{tensor.ndim}I", *tensor.shape))
        chunks.append(struct.pack("<B", 0))
        chunks.append(np.ascontiguousarray(tensor, dtype="<f4").tobytes())
    pathlib.Path(path).write_bytes(b"".join(chunks))
    logger.info(f"Saved {len(net.params)} tensors of {net.spec.name} to {path}")


class _Reader:
    def __init__(self, data: bytes, path: str) -> None:
        self.data = data
        self.offset = 0
        self.path = path

    def take(self, size: int, what: str) -> bytes:
        end = self.offset + size
        if end > len(self.data):
            raise TruncatedWeightFileError(
                f"{self.path} ends at byte {len(self.data)} while reading {what}."
            )
        chunk = self.data[self.offset : end]
        self.offset = end
        return chunk

    def unpack(self, fmt: str, what: str) -> tuple:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))


def read_tensors(path: Union[str, os.PathLike]) -> Dict[str, np.ndarray]:
    """Read every tensor of a weight file in stored order.

    Raises:
        WeightFormatError: Raised on bad magic bytes, version or dtype code.
        TruncatedWeightFileError: Raised if the file is shorter than declared.

    Returns:
        (Dict[str, np.ndarray]): Tensor name to 32-bit array.
    """
    reader = _Reader(pathlib.Path(path).read_bytes(), str(path))
    magic = reader.take(4, "magic bytes")
    if magic != MAGIC:
        raise WeightFormatError(f"{path} is not a weight file (magic {magic!r}).")
    version, count = reader.unpack("<II", "header")
    if version != VERSION:
        raise WeightFormatError(f"{path} has format version {version}, expected {VERSION}.")

    tensors: Dict[str, np.ndarray] = {}
    for i in range(count):
        (length,) = reader.unpack("<H", f"name length of tensor {i}")
        name = reader.take(length, f"name of tensor {i}").decode("utf-8")
        (rank,) = reader.unpack("<B", f"rank of {name}")
        shape = reader.unpack(f"<{rank}I", f"extents of {name}")
        (code,) = reader.unpack("<B", f"dtype of {name}")
        if code not in _DTYPES:
            raise WeightFormatError(f"{name} has unknown dtype code {code}.")
        dtype = _DTYPES[code]
        size = int(np.prod(shape)) * dtype.itemsize
        raw = reader.take(size, f"data of {name}")
        tensors[name] = np.frombuffer(raw, dtype=dtype).reshape(shape).astype(np.float32)
    return tensors


def load_weights(spec: NetworkSpec, path: Union[str, os.PathLike]) -> Network:
    """Instantiate ``spec`` with the tensors stored in ``path``.

    Raises:
        WeightFormatError: Raised on bad magic bytes, version or dtype code.
        TruncatedWeightFileError: Raised if the file is shorter than declared.
        WeightShapeError: Raised naming the first tensor that is missing or
            does not have the shape ``spec`` requires.

    Returns:
        (Network): Network holding the stored weights.
    """
    tensors = read_tensors(path)
    for name, shape in param_shapes(spec).items():
        if name not in tensors:
            raise WeightShapeError(f"{path} has no tensor {name} required by {spec.name}.")
        if tuple(tensors[name].shape) != shape:
            raise WeightShapeError(
                (
                    f"Tensor {name} in {path} has shape {tuple(tensors[name].shape)}, "
                    f"{spec.name} requires {shape}."
                )
            )
    logger.info(f"Loaded {len(tensors)} tensors of {spec.name} from {path}")
    return Network(spec, params=tensors)
