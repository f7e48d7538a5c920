#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Test saliency maps."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from nets import linear_spec, padded_spec, valid_spec
from planefinder.control import Configure
from planefinder.net import Activation, ConvBN, Network, NetworkSpec
from planefinder.saliency import (
    ClassIndexError,
    Method,
    SaliencyError,
    guided_saliency,
    per_neuron_saliency,
    plain_saliency,
    saliency,
    weighted_saliency,
)
from planefinder.tensor import Mode, finite_diff_check


def _image(seed: int, shape=(8, 8)) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal(shape)


@pytest.mark.parametrize("seed", range(20))
def test_weighted_equals_sum_over_neurons(seed) -> None:
    net = Network(padded_spec(), seed=seed).astype(np.float64)
    image = _image(100 + seed)
    k = seed % 3
    one_pass = weighted_saliency(net, image, k, mode="plain")
    many = per_neuron_saliency(net, image, k, mode="plain")
    assert one_pass.shape == (8, 8)
    assert_allclose(one_pass.values, many.values, atol=1e-5)


def test_guided_rule_on_a_network_without_relus() -> None:
    net = Network(linear_spec(), seed=3).astype(np.float64)
    image = _image(4)
    assert_allclose(guided_saliency(net, image, 1).values, plain_saliency(net, image, 1).values)
    assert_allclose(
        weighted_saliency(net, image, 1, mode="guided").values,
        per_neuron_saliency(net, image, 1, mode="guided").values,
        atol=1e-8,
    )


def test_guided_saliency_is_not_plain_saliency() -> None:
    net = Network(padded_spec(), seed=1).astype(np.float64)
    image = _image(2)
    guided = guided_saliency(net, image, 0).values
    assert not np.allclose(guided, plain_saliency(net, image, 0).values)


def test_plain_saliency_is_the_class_score_gradient() -> None:
    net = Network(padded_spec(), seed=8).astype(np.float64)
    k = 2

    def forward(point):
        return net.forward(point, Mode.INFER, keep_trace=False).a[:, k]

    def backward(point, w):
        return w[0] * plain_saliency(net, point[0], k).values[None, None]

    assert finite_diff_check(forward, backward, _image(9)[None, None], step=1e-5) < 1e-3


def test_class_index_is_checked() -> None:
    net = Network(padded_spec())
    with pytest.raises(ClassIndexError):
        weighted_saliency(net, _image(0), 3)
    with pytest.raises(ClassIndexError):
        plain_saliency(net, _image(0), -1)


def test_batches_are_rejected() -> None:
    with pytest.raises(SaliencyError):
        plain_saliency(Network(padded_spec()), np.zeros((2, 1, 8, 8)), 0)


def test_batch_statistics_leave_the_network_untouched() -> None:
    Configure("saliency").configure(freeze_bn=False)
    net = Network(padded_spec(), seed=2)
    before = net.params["layer0.running_mean"].copy()
    frozen_off = weighted_saliency(net, _image(5), 0)
    assert_array_equal(net.params["layer0.running_mean"], before)
    Configure("saliency").configure(freeze_bn=True)
    assert not np.allclose(frozen_off.values, weighted_saliency(net, _image(5), 0).values)


def test_dispatch_by_name() -> None:
    net = Network(padded_spec(), seed=6).astype(np.float64)
    image = _image(7)
    by_name = saliency(net, image, 1, "per_neuron")
    assert by_name.method is Method.PER_NEURON
    assert by_name.class_index == 1
    assert_allclose(
        saliency(net, image, 1, Method.GUIDED).values, guided_saliency(net, image, 1).values
    )


def test_weighted_saliency_follows_the_configured_rule() -> None:
    net = Network(padded_spec(), seed=11).astype(np.float64)
    image = _image(12)
    Configure("saliency").configure(backward_mode="plain")
    assert_allclose(
        weighted_saliency(net, image, 0).values, weighted_saliency(net, image, 0, "plain").values
    )


def _two_neuron_net() -> Network:
    """One input pixel feeding two ReLUs, read out with weights 2 and -3 for class 0."""
    spec = NetworkSpec(
        "two-neuron",
        (
            ConvBN(1, 1, 2, bn=False),
            ConvBN(1, 1, 2, activation=Activation.LINEAR, bn=False),
        ),
        1,
        2,
    )
    params = {
        "layer0.kernel": np.ones((2, 1, 1, 1)),
        "layer0.bias": np.zeros(2),
        "layer1.kernel": np.array([[2.0, -3.0], [0.0, 0.0]]).reshape(2, 2, 1, 1),
        "layer1.bias": np.zeros(2),
    }
    return Network(spec, params, dtype=np.float64)


def test_guided_rule_drops_the_path_carrying_a_negative_error() -> None:
    net = _two_neuron_net()
    image = np.full((1, 1), 0.5)
    # both units are active: plain gradient is 2 - 3, guided keeps only the 2
    assert_allclose(plain_saliency(net, image, 0).values, [[-1.0]])
    assert_allclose(guided_saliency(net, image, 0).values, [[2.0]])
    assert_allclose(guided_saliency(net, -image, 0).values, [[0.0]])


def test_guided_matches_plain_when_every_error_is_positive() -> None:
    net = _two_neuron_net()
    net.params["layer1.kernel"][0] = np.array([2.0, 3.0]).reshape(2, 1, 1)
    image = np.full((1, 1), 0.5)
    assert_allclose(guided_saliency(net, image, 0).values, plain_saliency(net, image, 0).values)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 10.0), st.integers(0, 2))
def test_scaling_the_class_score_kernel_scales_weighted_saliency_quadratically(
    scale, k
) -> None:
    net = Network(padded_spec(), seed=4).astype(np.float64)
    image = _image(13)
    reference = weighted_saliency(net, image, k).values
    net.params["layer3.kernel"] = net.params["layer3.kernel"] * scale
    assert_allclose(weighted_saliency(net, image, k).values, scale**2 * reference, atol=1e-9)


@pytest.mark.parametrize("mode", ["plain", "guided"])
def test_weighted_saliency_is_zero_without_positive_scores(mode) -> None:
    net = Network(padded_spec(), seed=5).astype(np.float64)
    net.params["layer3.bias"] = np.full(3, -1e6)
    assert_array_equal(weighted_saliency(net, _image(14), 1, mode).values, np.zeros((8, 8)))


@pytest.mark.parametrize("mode", ["plain", "guided"])
def test_weighted_saliency_of_a_single_active_neuron(mode) -> None:
    net = Network(valid_spec(), seed=6).astype(np.float64)
    image = _image(15, (12, 12))
    k = 0
    scores = net.forward(image[None], Mode.INFER).F[0, k]
    order = np.sort(scores.ravel())
    # shift the class bias so that only the top cell stays positive
    net.params["layer3.bias"][k] -= (order[-1] + order[-2]) / 2
    result = net.forward(image[None], Mode.INFER)
    active = result.F[0, k]
    y, x = np.unravel_index(np.argmax(active), active.shape)
    assert (active > 0).sum() == 1

    seed = np.zeros_like(result.F)
    seed[0, k, y, x] = 1.0
    dx, _ = net.backward(result.trace, seed, mode)
    expected = active[y, x] * dx[0, 0]
    assert_allclose(weighted_saliency(net, image, k, mode).values, expected, atol=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**16))
def test_plain_saliency_of_an_affine_network_ignores_the_image(seed) -> None:
    spec = NetworkSpec(
        "tiny-affine",
        (
            ConvBN(3, 3, 4, activation=Activation.LINEAR),
            ConvBN(1, 1, 3, activation=Activation.LINEAR, bn=False),
        ),
        1,
        3,
    )
    net = Network(spec, seed=7).astype(np.float64)
    reference = plain_saliency(net, np.zeros((6, 6)), 2).values
    image = np.random.default_rng(seed).normal(scale=5.0, size=(6, 6))
    assert_allclose(plain_saliency(net, image, 2).values, reference, atol=1e-10)


def test_a_given_forward_pass_is_reused(monkeypatch) -> None:
    net = Network(padded_spec(), seed=16).astype(np.float64)
    image = _image(17)
    result = net.forward(image[None, None], Mode.INFER)
    expected = weighted_saliency(net, image, 1).values

    def no_forward(*args, **kwargs):
        raise AssertionError("forward pass repeated")

    monkeypatch.setattr(net, "forward", no_forward)
    reused = saliency(net, image, 1, Method.WEIGHTED, result)
    assert reused.result is result
    assert_allclose(reused.values, expected)


def test_a_forward_pass_of_another_shape_is_rejected() -> None:
    net = Network(padded_spec(), seed=16)
    result = net.forward(_image(18, (4, 4))[None, None], Mode.INFER)
    with pytest.raises(SaliencyError):
        weighted_saliency(net, _image(18), 0, result=result)
    untraced = net.forward(_image(18)[None, None], Mode.INFER, keep_trace=False)
    with pytest.raises(SaliencyError):
        plain_saliency(net, _image(18), 0, result=untraced)
