#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Test forward and backward passes of whole networks."""

import dataclasses

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from nets import padded_spec, valid_spec
from planefinder.control.options import BackwardMode
from planefinder.net import Aggregation, InputShapeError, Network, NetworkError
from planefinder.tensor import Mode, finite_diff_check, softmax_xent


@pytest.fixture
def image() -> np.ndarray:
    return np.random.default_rng(1).standard_normal((2, 1, 8, 8))


def test_forward_shapes_and_confidences(image) -> None:
    result = Network(padded_spec()).forward(image)
    assert result.F.shape == (2, 3, 4, 4)
    assert_allclose(result.a, result.F.mean(axis=(2, 3)), rtol=1e-5)
    assert_allclose(result.c.sum(axis=1), np.ones(2), rtol=1e-5)
    assert_array_equal(result.prediction, result.c.argmax(axis=1))


def test_max_aggregation() -> None:
    spec = dataclasses.replace(padded_spec(), aggregation=Aggregation.MAX)
    result = Network(spec).forward(np.ones((1, 1, 8, 8)))
    assert_allclose(result.a, result.F.max(axis=(2, 3)))


def test_inference_is_pure(image) -> None:
    net = Network(padded_spec(), seed=3)
    before = {k: v.copy() for k, v in net.params.items()}
    first = net.forward(image, Mode.INFER).F
    second = net.forward(image, Mode.INFER).F
    assert_array_equal(first, second)
    for name, value in net.params.items():
        assert_array_equal(value, before[name])


def test_training_forward_updates_running_statistics(image) -> None:
    net = Network(padded_spec())
    net.forward(image, Mode.TRAIN)
    assert not np.allclose(net.params["layer0.running_mean"], 0.0)


def test_input_shape_checks() -> None:
    net = Network(padded_spec())
    with pytest.raises(InputShapeError):
        net.forward(np.zeros((1, 2, 8, 8)))
    with pytest.raises(InputShapeError):
        net.forward(np.zeros((1, 1, 7, 8)))


def test_two_dimensional_input_is_promoted() -> None:
    assert Network(padded_spec()).forward(np.zeros((8, 8))).F.shape == (1, 3, 4, 4)


def test_backward_needs_trace(image) -> None:
    net = Network(padded_spec())
    result = net.forward(image, keep_trace=False)
    with pytest.raises(NetworkError):
        net.backward(result.trace, np.ones_like(result.F))


@pytest.mark.parametrize("spec_factory", [padded_spec, valid_spec])
def test_input_gradient_matches_finite_differences(spec_factory) -> None:
    net = Network(spec_factory(), seed=5).astype(np.float64)
    x = np.random.default_rng(2).standard_normal((1, 1, 12, 12))

    def forward(point):
        return net.forward(point, Mode.INFER, keep_trace=False).a

    def backward(point, w):
        result = net.forward(point, Mode.INFER)
        return net.backward_logits(result.trace, w, BackwardMode.PLAIN)[0]

    assert finite_diff_check(forward, backward, x, step=1e-5) < 1e-3


def test_parameter_gradients_match_finite_differences() -> None:
    net = Network(padded_spec(), seed=4).astype(np.float64)
    x = np.random.default_rng(6).standard_normal((3, 1, 8, 8))
    labels = np.array([0, 2, 1])
    name = "layer2.kernel"

    def loss_at(kernel):
        shifted = net.copy()
        shifted.params[name] = kernel
        logits = shifted.forward(x, Mode.TRAIN, keep_trace=False).a
        return np.asarray(softmax_xent(logits, labels)[0])

    def grad_at(kernel, w):
        shifted = net.copy()
        shifted.params[name] = kernel
        result = shifted.forward(x, Mode.TRAIN)
        _, dlogits = softmax_xent(result.a, labels)
        return w * shifted.backward_logits(result.trace, dlogits)[1][name]

    assert finite_diff_check(loss_at, grad_at, net.params[name], step=1e-5) < 1e-3


def test_copy_is_independent() -> None:
    net = Network(padded_spec())
    clone = net.copy()
    clone.params["layer0.kernel"] += 1.0
    assert not np.allclose(clone.params["layer0.kernel"], net.params["layer0.kernel"])


def test_parameter_count_and_names() -> None:
    net = Network(padded_spec())
    # 3x3x1x4 + 4, bn 4 + 4, 3x3x4x5 + 5, bn 5 + 5, 1x1x5x3 + 3
    assert net.num_parameters() == 40 + 8 + 185 + 10 + 18
    assert "layer0.running_mean" in net.buffer_names
    assert "layer0.running_mean" not in net.trainable_names


def test_initialisation_is_seeded() -> None:
    a, b = Network(padded_spec(), seed=1), Network(padded_spec(), seed=1)
    assert_array_equal(a.params["layer2.kernel"], b.params["layer2.kernel"])
    c = Network(padded_spec(), seed=2)
    assert not np.array_equal(a.params["layer2.kernel"], c.params["layer2.kernel"])
