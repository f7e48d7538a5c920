#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Test weight files."""

import struct

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from nets import padded_spec
from planefinder.net import (
    Network,
    TruncatedWeightFileError,
    WeightFormatError,
    WeightShapeError,
    load_weights,
    read_tensors,
    save_weights,
)


def test_saved_weights_reload_exactly(tmp_path) -> None:
    net = Network(padded_spec(), seed=9)
    path = tmp_path / "tiny.snnw"
    save_weights(net, path)
    loaded = load_weights(padded_spec(), path)
    assert list(loaded.params) == list(net.params)
    for name in net.params:
        assert_array_equal(loaded.params[name], net.params[name])


def test_header_layout(tmp_path) -> None:
    path = tmp_path / "tiny.snnw"
    net = Network(padded_spec())
    save_weights(net, path)
    data = path.read_bytes()
    assert data[:4] == b"SNNW"
    assert struct.unpack("<II", data[4:12]) == (1, len(net.params))
    (length,) = struct.unpack("<H", data[12:14])
    assert data[14 : 14 + length] == b"layer0.kernel"


def test_bad_magic(tmp_path) -> None:
    path = tmp_path / "bad.snnw"
    path.write_bytes(b"NOPE" + bytes(8))
    with pytest.raises(WeightFormatError):
        read_tensors(path)


def test_truncated_file(tmp_path) -> None:
    path = tmp_path / "tiny.snnw"
    save_weights(Network(padded_spec()), path)
    path.write_bytes(path.read_bytes()[:-3])
    with pytest.raises(TruncatedWeightFileError):
        read_tensors(path)


def test_architecture_mismatch_names_the_tensor(tmp_path) -> None:
    path = tmp_path / "tiny.snnw"
    save_weights(Network(padded_spec(num_classes=3)), path)
    with pytest.raises(WeightShapeError, match="layer3"):
        load_weights(padded_spec(num_classes=4), path)


def test_loaded_network_computes_the_same_scores(tmp_path) -> None:
    net = Network(padded_spec(), seed=2)
    path = tmp_path / "tiny.snnw"
    save_weights(net, path)
    x = np.random.default_rng(0).standard_normal((1, 1, 8, 8))
    assert_array_equal(load_weights(padded_spec(), path).forward(x).F, net.forward(x).F)
