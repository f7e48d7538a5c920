#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Test layer forward passes and their analytic gradients."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from planefinder.control.options import BackwardMode
from planefinder.tensor import (
    LabelRangeError,
    Mode,
    Padding,
    TensorShapeError,
    batchnorm_backward,
    batchnorm_forward,
    conv2d,
    conv2d_backward,
    conv2d_forward,
    finite_diff_check,
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
from planefinder.tensor.functional import BN_EPS

TOLERANCE = 1e-3


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(7)


def test_conv_same_keeps_size_and_sums_neighbourhoods() -> None:
    x = np.ones((1, 1, 5, 6))
    kernel = np.ones((1, 1, 3, 3))
    out, _ = conv2d_forward(x, kernel, np.zeros(1), padding=Padding.SAME)
    assert out.shape == (1, 1, 5, 6)
    assert out[0, 0, 0, 0] == 4
    assert out[0, 0, 0, 2] == 6
    assert out[0, 0, 2, 2] == 9


def test_conv_valid_shrinks_and_adds_bias() -> None:
    x = np.arange(16, dtype=np.float64).reshape(1, 1, 4, 4)
    kernel = np.zeros((2, 1, 3, 3))
    kernel[0, 0, 1, 1] = 1.0
    out, _ = conv2d_forward(x, kernel, np.array([0.0, 2.5]), padding="valid")
    assert out.shape == (1, 2, 2, 2)
    assert_array_equal(out[0, 0], [[5, 6], [9, 10]])
    assert_array_equal(out[0, 1], np.full((2, 2), 2.5))


def test_conv_stride() -> None:
    out, _ = conv2d_forward(np.ones((2, 3, 8, 8)), np.ones((4, 3, 3, 3)), np.zeros(4), stride=2)
    assert out.shape == (2, 4, 4, 4)


def test_conv_rejects_channel_mismatch() -> None:
    with pytest.raises(TensorShapeError):
        conv2d_forward(np.ones((1, 2, 4, 4)), np.ones((1, 3, 3, 3)), np.zeros(1))


@pytest.mark.parametrize("padding,stride", [("same", 1), ("valid", 1), ("same", 2)])
def test_conv_gradients(rng, padding, stride) -> None:
    x = rng.standard_normal((2, 3, 6, 6))
    kernel = rng.standard_normal((4, 3, 3, 3))
    bias = rng.standard_normal(4)

    def wrt_x(point):
        return conv2d_forward(point, kernel, bias, stride, padding)[0]

    def wrt_x_back(point, w):
        return conv2d_backward(conv2d_forward(point, kernel, bias, stride, padding)[1], w)[0]

    def wrt_k(point):
        return conv2d_forward(x, point, bias, stride, padding)[0]

    def wrt_k_back(point, w):
        return conv2d_backward(conv2d_forward(x, point, bias, stride, padding)[1], w)[1]

    def wrt_b(point):
        return conv2d_forward(x, kernel, point, stride, padding)[0]

    def wrt_b_back(point, w):
        return conv2d_backward(conv2d_forward(x, kernel, point, stride, padding)[1], w)[2]

    assert finite_diff_check(wrt_x, wrt_x_back, x) < TOLERANCE
    assert finite_diff_check(wrt_k, wrt_k_back, kernel) < TOLERANCE
    assert finite_diff_check(wrt_b, wrt_b_back, bias) < TOLERANCE


def test_maxpool_forward_and_argmax() -> None:
    x = np.array([[1.0, 5.0, 2.0, 2.0], [3.0, 4.0, 0.0, 7.0]]).reshape(1, 1, 2, 4)
    out, argmax = maxpool2(x)
    assert_array_equal(out[0, 0], [[5.0, 7.0]])
    assert_array_equal(argmax[0, 0], [[1, 3]])


def test_maxpool_ties_pick_first_offset() -> None:
    _, argmax = maxpool2(np.zeros((1, 1, 2, 2)))
    assert argmax[0, 0, 0, 0] == 0


def test_maxpool_rejects_odd_sides() -> None:
    with pytest.raises(TensorShapeError):
        maxpool2(np.zeros((1, 1, 3, 4)))


def test_maxpool_gradient(rng) -> None:
    x = rng.permutation(2 * 3 * 6 * 8).reshape(2, 3, 6, 8) / 10.0

    def back(point, w):
        return maxpool2_backward(maxpool2(point)[1], w)

    assert finite_diff_check(lambda p: maxpool2(p)[0], back, x, step=1e-3) < TOLERANCE


def _bn_train(x, gamma, beta):
    c = x.shape[1]
    return batchnorm_forward(x, gamma, beta, np.zeros(c), np.ones(c), Mode.TRAIN)


def test_batchnorm_train_gradients(rng) -> None:
    x = rng.standard_normal((4, 3, 3, 3))
    gamma = rng.uniform(0.5, 1.5, 3)
    beta = rng.standard_normal(3)

    def wrt_x(point):
        return _bn_train(point, gamma, beta)[0]

    def wrt_x_back(point, w):
        return batchnorm_backward(_bn_train(point, gamma, beta)[1], w)[0]

    def wrt_gamma(point):
        return _bn_train(x, point, beta)[0]

    def wrt_gamma_back(point, w):
        return batchnorm_backward(_bn_train(x, point, beta)[1], w)[1]

    assert finite_diff_check(wrt_x, wrt_x_back, x) < TOLERANCE
    assert finite_diff_check(wrt_gamma, wrt_gamma_back, gamma) < TOLERANCE


def test_batchnorm_infer_gradient(rng) -> None:
    x = rng.standard_normal((2, 3, 4, 4))
    gamma, beta = rng.uniform(0.5, 1.5, 3), rng.standard_normal(3)
    mean, var = rng.standard_normal(3), rng.uniform(0.5, 2.0, 3)

    def forward(point):
        return batchnorm_forward(point, gamma, beta, mean.copy(), var.copy())

    assert (
        finite_diff_check(
            lambda p: forward(p)[0], lambda p, w: batchnorm_backward(forward(p)[1], w)[0], x
        )
        < TOLERANCE
    )


def test_batchnorm_updates_running_statistics(rng) -> None:
    x = rng.standard_normal((4, 2, 3, 3)) * 3.0 + 1.0
    running_mean, running_var = np.zeros(2), np.ones(2)
    batchnorm_forward(x, np.ones(2), np.zeros(2), running_mean, running_var, Mode.TRAIN)
    batch_mean = x.mean(axis=(0, 2, 3))
    batch_var = x.var(axis=(0, 2, 3), ddof=1)
    assert_allclose(running_mean, 0.1 * batch_mean)
    assert_allclose(running_var, 0.9 + 0.1 * batch_var)


def test_batchnorm_infer_uses_running_statistics() -> None:
    x = np.full((1, 1, 2, 2), 3.0)
    out, _ = batchnorm_forward(x, np.ones(1), np.zeros(1), np.ones(1), np.full(1, 4.0))
    assert_allclose(out, np.full_like(x, 2.0 / np.sqrt(4.0 + BN_EPS)))


def test_batchnorm_train_needs_two_values() -> None:
    with pytest.raises(TensorShapeError):
        _bn_train(np.ones((1, 2, 1, 1)), np.ones(2), np.zeros(2))


def test_relu_truth_table() -> None:
    x = np.array([1.0, 1.0, -1.0])
    grad = np.array([1.0, -1.0, 1.0])
    assert_array_equal(relu_backward(x, grad, BackwardMode.PLAIN), [1.0, -1.0, 0.0])
    assert_array_equal(relu_backward(x, grad, BackwardMode.GUIDED), [1.0, 0.0, 0.0])


def test_guided_equals_plain_for_positive_signals(rng) -> None:
    x = rng.uniform(0.1, 1.0, (2, 3, 4, 4))
    grad = rng.uniform(0.1, 1.0, x.shape)
    assert_array_equal(relu_backward(x, grad, "guided"), relu_backward(x, grad, "plain"))


def test_relu_gradient_away_from_kink(rng) -> None:
    x = rng.uniform(0.1, 1.0, (2, 2, 3, 3)) * rng.choice([-1.0, 1.0], (2, 2, 3, 3))
    assert finite_diff_check(relu, lambda p, w: relu_backward(p, w), x) < TOLERANCE


def test_spatial_mean_and_gradient(rng) -> None:
    x = rng.standard_normal((2, 3, 4, 5))
    assert_allclose(spatial_mean(x), x.mean(axis=(2, 3)))

    def back(p, w):
        return spatial_mean_backward(p.shape, w)

    assert finite_diff_check(spatial_mean, back, x) < TOLERANCE


def test_spatial_max_and_gradient(rng) -> None:
    x = rng.permutation(2 * 3 * 4 * 5).reshape(2, 3, 4, 5) / 7.0
    values, _ = spatial_max(x)
    assert_allclose(values, x.max(axis=(2, 3)))

    def back(p, w):
        return spatial_max_backward(p.shape, spatial_max(p)[1], w)

    assert finite_diff_check(lambda p: spatial_max(p)[0], back, x, step=1e-3) < TOLERANCE


def test_softmax_rows_sum_to_one(rng) -> None:
    c = softmax(rng.standard_normal((5, 14)) * 50)
    assert_allclose(c.sum(axis=1), np.ones(5))
    assert np.all(c >= 0)


def test_softmax_xent_value_and_gradient(rng) -> None:
    logits = rng.standard_normal((4, 6))
    labels = np.array([0, 5, 2, 2])
    loss, _ = softmax_xent(logits, labels)
    expected = -np.mean(np.log(softmax(logits)[np.arange(4), labels]))
    assert loss == pytest.approx(expected)

    def forward(p):
        return np.asarray(softmax_xent(p, labels)[0])

    def back(p, w):
        return w * softmax_xent(p, labels)[1]

    assert finite_diff_check(forward, back, logits) < TOLERANCE


def test_softmax_xent_rejects_bad_labels() -> None:
    with pytest.raises(LabelRangeError):
        softmax_xent(np.zeros((2, 3)), [0, 3])


def test_conv_matches_direct_summation(rng) -> None:
    x = rng.standard_normal((1, 2, 5, 5))
    kernel = rng.standard_normal((3, 2, 3, 3))
    bias = rng.standard_normal(3)
    out, _ = conv2d_forward(x, kernel, bias, padding="valid")
    expected = np.zeros((1, 3, 3, 3))
    for o in range(3):
        for i in range(3):
            for j in range(3):
                for c in range(2):
                    for u in range(3):
                        for v in range(3):
                            expected[0, o, i, j] += x[0, c, i + u, j + v] * kernel[o, c, u, v]
                expected[0, o, i, j] += bias[o]
    assert_allclose(out, expected, atol=1e-5)


def test_maxpool_of_a_constant() -> None:
    out, _ = maxpool2(np.full((1, 2, 4, 6), 1.5))
    assert_array_equal(out, np.full((1, 2, 2, 3), 1.5))


def test_batchnorm_with_zero_gamma_returns_beta(rng) -> None:
    beta = np.array([0.5, -2.0])
    out, _ = _bn_train(rng.standard_normal((3, 2, 4, 4)), np.zeros(2), beta)
    assert_allclose(out, np.broadcast_to(beta[None, :, None, None], out.shape))


def test_batchnorm_train_statistics(rng) -> None:
    gamma, beta = np.array([2.0, 0.5]), np.array([1.0, -1.0])
    out, _ = _bn_train(rng.standard_normal((8, 2, 5, 5)) * 4 + 3, gamma, beta)
    assert_allclose(out.mean(axis=(0, 2, 3)), beta, atol=1e-4)
    assert_allclose(out.var(axis=(0, 2, 3)), gamma**2, atol=1e-4)


def test_spatial_mean_gradient_of_a_full_frame_map() -> None:
    grad = spatial_mean_backward((1, 14, 14, 18), np.ones((1, 14)))
    assert_allclose(grad, np.full((1, 14, 14, 18), 1 / 252))


def test_softmax_xent_limits() -> None:
    loss, _ = softmax_xent(np.zeros((1, 14)), [3])
    assert loss == pytest.approx(np.log(14))
    logits = np.zeros((1, 14))
    logits[0, 5] = 1000.0
    assert softmax_xent(logits, [5])[0] == pytest.approx(0.0, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(
    st.integers(0, 2**16),
    st.floats(-3.0, 3.0),
    st.floats(-3.0, 3.0),
    st.sampled_from(["same", "valid"]),
    st.sampled_from([1, 2]),
)
def test_conv_is_linear_in_its_input(seed, alpha, beta, padding, stride) -> None:
    rng = np.random.default_rng(seed)
    x, y = rng.standard_normal((2, 2, 3, 7, 6))
    kernel = rng.standard_normal((4, 3, 3, 3))
    bias = np.zeros(4)
    mixed = conv2d(alpha * x + beta * y, kernel, bias, stride, padding)
    expected = alpha * conv2d(x, kernel, bias, stride, padding) + beta * conv2d(
        y, kernel, bias, stride, padding
    )
    assert_allclose(mixed, expected, atol=1e-4)
