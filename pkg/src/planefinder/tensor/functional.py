#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Forward and backward implementations of the layer primitives.

Every ``*_forward`` returns the output and a cache; the matching ``*_backward``
consumes the cache and returns exact analytic gradients. Functions never keep
state between calls, so passes over distinct tensors may run concurrently.
"""

from typing import Any, Tuple, Union

import numpy as np

from planefinder.control.options import BackwardMode

from .im2col import col2im, im2col
from .tensor import LabelRangeError, Mode, Padding, TensorShapeError

BN_EPS = 1e-5
BN_MOMENTUM = 0.1


def _same_pad(kh: int, kw: int) -> int:
    if kh != kw or kh % 2 == 0:
        raise TensorShapeError(
            f"Same padding needs a square kernel with odd extent, got {kh}x{kw}."
        )
    return kh // 2


def conv2d_forward(
    x: np.ndarray,
    kernel: np.ndarray,
    bias: np.ndarray,
    stride: int = 1,
    padding: Union[Padding, str] = Padding.SAME,
) -> Tuple[np.ndarray, Any]:
    """Cross-correlate a batch with a kernel bank.

    Args:
        x (np.ndarray): Input of shape (B, Cin, H, W).
        kernel (np.ndarray): Kernels of shape (Cout, Cin, kh, kw).
        bias (np.ndarray): Bias vector of length Cout.
        stride (int): Stride, >= 1 (Default: 1).
        padding (Padding): SAME pads floor(k/2) zeros on every side, VALID pads
            nothing (Default: Padding.SAME).

    Raises:
        TensorShapeError: Raised if the kernel does not fit the input.

    Returns:
        (Tuple[np.ndarray, Any]): Output of shape (B, Cout, H', W') and cache.
    """
    if x.ndim != 4 or kernel.ndim != 4 or kernel.shape[1] != x.shape[1]:
        raise TensorShapeError(
            f"Kernel of shape {kernel.shape} does not fit input of shape {x.shape}."
        )
    cout, _, kh, kw = kernel.shape
    if np.shape(bias) != (cout,):
        raise TensorShapeError(
            f"Bias of shape {np.shape(bias)} does not fit kernel of shape {kernel.shape}."
        )
    if stride < 1:
        raise TensorShapeError(f"Stride must be >= 1, got {stride}.")
    pad = _same_pad(kh, kw) if Padding.parse(padding) is Padding.SAME else 0
    if x.shape[2] + 2 * pad < kh or x.shape[3] + 2 * pad < kw:
        raise TensorShapeError(
            f"Kernel of shape {kernel.shape} is larger than input of shape {x.shape}."
        )

    col, oh, ow = im2col(x, kh, kw, stride, pad)
    weights = kernel.reshape(cout, -1)
    out = col @ weights.T + bias
    out = np.ascontiguousarray(out.reshape(x.shape[0], oh, ow, cout).transpose(0, 3, 1, 2))
    return out, (x.shape, col, kernel, stride, pad)


def conv2d_backward(
    cache: Any, grad: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of a convolution w.r.t. input, kernel and bias."""
    x_shape, col, kernel, stride, pad = cache
    cout, _, kh, kw = kernel.shape
    g = grad.transpose(0, 2, 3, 1).reshape(-1, cout)
    dkernel = (g.T @ col).reshape(kernel.shape)
    dbias = g.sum(axis=0)
    dcol = g @ kernel.reshape(cout, -1)
    dx = col2im(dcol, x_shape, kh, kw, stride, pad)
    return np.ascontiguousarray(dx), dkernel, dbias


def conv2d(
    x: np.ndarray,
    kernel: np.ndarray,
    bias: np.ndarray,
    stride: int = 1,
    padding: Union[Padding, str] = Padding.SAME,
) -> np.ndarray:
    """Convolution output only; see conv2d_forward."""
    return conv2d_forward(x, kernel, bias, stride, padding)[0]


def maxpool2(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """2x2 max pooling with stride 2.

    Args:
        x (np.ndarray): Input of shape (B, C, H, W) with even H and W.

    Raises:
        TensorShapeError: Raised if H or W is odd.

    Returns:
        (Tuple[np.ndarray, np.ndarray]): Pooled output and the argmax map holding
            the winning window offset dy*2 + dx of every output cell. Ties go to
            the first offset in row-major order.
    """
    if x.ndim != 4 or x.shape[2] % 2 or x.shape[3] % 2:
        raise TensorShapeError(f"Max pooling needs even height and width, got {x.shape}.")
    b, c, h, w = x.shape
    windows = x.reshape(b, c, h // 2, 2, w // 2, 2).transpose(0, 1, 2, 4, 3, 5)
    windows = windows.reshape(b, c, h // 2, w // 2, 4)
    argmax = windows.argmax(axis=-1)
    out = np.take_along_axis(windows, argmax[..., None], axis=-1)[..., 0]
    return np.ascontiguousarray(out), argmax


def maxpool2_backward(argmax: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """Route each output error to its window's argmax position."""
    b, c, oh, ow = grad.shape
    windows = np.zeros((b, c, oh, ow, 4), dtype=grad.dtype)
    np.put_along_axis(windows, argmax[..., None], grad[..., None], axis=-1)
    dx = windows.reshape(b, c, oh, ow, 2, 2).transpose(0, 1, 2, 4, 3, 5)
    return np.ascontiguousarray(dx.reshape(b, c, oh * 2, ow * 2))


def _channel_view(x: np.ndarray) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    axes = (0,) + tuple(range(2, x.ndim))
    shape = (1, x.shape[1]) + (1,) * (x.ndim - 2)
    return axes, shape


def batchnorm_forward(
    x: np.ndarray,
    gamma: np.ndarray,
    beta: np.ndarray,
    running_mean: np.ndarray,
    running_var: np.ndarray,
    mode: Union[Mode, str] = Mode.INFER,
    momentum: float = BN_MOMENTUM,
    eps: float = BN_EPS,
) -> Tuple[np.ndarray, Any]:
    """Per-channel batch normalisation.

    In TRAIN mode the batch statistics normalise the input and the running
    statistics are updated in place by an exponential moving average (the
    running variance uses the unbiased batch variance). In INFER mode the
    running statistics are used unchanged.

    Args:
        x (np.ndarray): Input of shape (B, C, ...).
        gamma (np.ndarray): Scale per channel.
        beta (np.ndarray): Shift per channel.
        running_mean (np.ndarray): Running mean per channel.
        running_var (np.ndarray): Running variance per channel.
        mode (Mode): TRAIN or INFER (Default: Mode.INFER).
        momentum (float): Weight of the batch statistics in the update (Default: 0.1).
        eps (float): Variance offset (Default: 1e-5).

    Raises:
        TensorShapeError: Raised if a parameter does not match the channel count,
            or if TRAIN mode sees fewer than two values per channel.

    Returns:
        (Tuple[np.ndarray, Any]): Output and cache.
    """
    channels = x.shape[1]
    for name, p in (("gamma", gamma), ("beta", beta), ("running_mean", running_mean),
                    ("running_var", running_var)):
        if np.shape(p) != (channels,):
            raise TensorShapeError(
                f"{name} of shape {np.shape(p)} does not fit input of shape {x.shape}."
            )
    axes, shape = _channel_view(x)
    train = Mode.parse(mode) is Mode.TRAIN
    if train:
        count = x.size // channels
        if count < 2:
            raise TensorShapeError(
                f"Training batch norm needs >= 2 values per channel, got shape {x.shape}."
            )
        mean = x.mean(axis=axes)
        var = x.var(axis=axes)
        running_mean *= 1 - momentum
        running_mean += momentum * mean
        running_var *= 1 - momentum
        running_var += momentum * var * count / (count - 1)
    else:
        mean = running_mean.astype(x.dtype)
        var = running_var.astype(x.dtype)

    inv_std = (1.0 / np.sqrt(var + eps)).astype(x.dtype)
    x_hat = (x - mean.reshape(shape)) * inv_std.reshape(shape)
    out = gamma.reshape(shape).astype(x.dtype) * x_hat + beta.reshape(shape).astype(x.dtype)
    return out, (x_hat, inv_std, gamma, train)


def batchnorm_backward(
    cache: Any, grad: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of batch normalisation w.r.t. input, gamma and beta."""
    x_hat, inv_std, gamma, train = cache
    axes, shape = _channel_view(grad)
    dgamma = (grad * x_hat).sum(axis=axes)
    dbeta = grad.sum(axis=axes)
    dx_hat = grad * gamma.reshape(shape).astype(grad.dtype)
    if train:
        count = grad.size // grad.shape[1]
        dx = (
            count * dx_hat
            - dx_hat.sum(axis=axes).reshape(shape)
            - x_hat * (dx_hat * x_hat).sum(axis=axes).reshape(shape)
        ) * (inv_std.reshape(shape) / count)
    else:
        dx = dx_hat * inv_std.reshape(shape)
    return dx, dgamma, dbeta


def batchnorm(
    x: np.ndarray,
    gamma: np.ndarray,
    beta: np.ndarray,
    running_mean: np.ndarray,
    running_var: np.ndarray,
    mode: Union[Mode, str] = Mode.INFER,
    momentum: float = BN_MOMENTUM,
    eps: float = BN_EPS,
) -> np.ndarray:
    """Batch normalisation output only; see batchnorm_forward."""
    return batchnorm_forward(x, gamma, beta, running_mean, running_var, mode, momentum, eps)[0]


def relu(x: np.ndarray) -> np.ndarray:
    """Rectified linear unit, max(x, 0)."""
    return np.maximum(x, 0).astype(x.dtype, copy=False)


def relu_backward(
    x: np.ndarray, grad: np.ndarray, mode: Union[BackwardMode, str] = BackwardMode.PLAIN
) -> np.ndarray:
    """Propagate an error through a ReLU.

    PLAIN passes the error where the stored input is positive. GUIDED also
    requires the incoming error itself to be positive.

    Args:
        x (np.ndarray): Input stored by the forward pass.
        grad (np.ndarray): Incoming error.
        mode (BackwardMode): Rule to apply (Default: BackwardMode.PLAIN).

    Returns:
        (np.ndarray): Error at the ReLU input.
    """
    gate = x > 0
    if BackwardMode.parse(mode) is BackwardMode.GUIDED:
        gate = gate & (grad > 0)
    return np.where(gate, grad, 0).astype(grad.dtype, copy=False)


def spatial_mean(x: np.ndarray) -> np.ndarray:
    """Average every map over its spatial positions, (B, K, H, W) -> (B, K)."""
    return x.mean(axis=(2, 3))


def spatial_mean_backward(shape: Tuple[int, ...], grad: np.ndarray) -> np.ndarray:
    """Spread 1/(H*W) of each error over every position of its map."""
    _, _, h, w = shape
    share = grad / (h * w)
    return np.ascontiguousarray(np.broadcast_to(share[:, :, None, None], shape))


def spatial_max(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Maximum of every map over its spatial positions, with flat argmax."""
    b, k = x.shape[:2]
    flat = x.reshape(b, k, -1)
    argmax = flat.argmax(axis=-1)
    return np.take_along_axis(flat, argmax[..., None], axis=-1)[..., 0], argmax


def spatial_max_backward(
    shape: Tuple[int, ...], argmax: np.ndarray, grad: np.ndarray
) -> np.ndarray:
    """Route each error to the maximal position of its map."""
    b, k = shape[:2]
    flat = np.zeros((b, k, shape[2] * shape[3]), dtype=grad.dtype)
    np.put_along_axis(flat, argmax[..., None], grad[..., None], axis=-1)
    return flat.reshape(shape)


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max shift."""
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def softmax_xent(logits: np.ndarray, labels: np.ndarray) -> Tuple[float, np.ndarray]:
    """Mean categorical cross-entropy of softmax outputs.

    Args:
        logits (np.ndarray): Pre-softmax scores of shape (B, K).
        labels (np.ndarray): Integer labels of length B, each in [0, K).

    Raises:
        LabelRangeError: Raised if a label lies outside [0, K).

    Returns:
        (Tuple[float, np.ndarray]): Loss and its gradient (softmax - onehot) / B.
    """
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    b, k = logits.shape
    if labels.shape[0] != b:
        raise TensorShapeError(f"{labels.shape[0]} labels for logits of shape {logits.shape}.")
    bad = labels[(labels < 0) | (labels >= k)]
    if bad.size:
        raise LabelRangeError(f"Labels {bad.tolist()} lie outside [0, {k}).")

    shifted = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    rows = np.arange(b)
    loss = float(np.mean(log_norm - shifted[rows, labels]))
    grad = np.exp(shifted - log_norm[:, None])
    grad[rows, labels] -= 1
    return loss, (grad / b).astype(logits.dtype, copy=False)
