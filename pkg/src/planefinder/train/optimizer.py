#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Nesterov-momentum stochastic gradient descent."""

import math
from typing import Callable, Dict, Iterable, Tuple

import numpy as np

from planefinder.meta import Params


class OptimizerState:
    """Velocities and schedule bookkeeping of one training run.

    Args:
        params (Params): Parameter store; velocities mirror ``names``.
        names (Iterable[str]): Trainable parameter names.
        initial_lr (float): Rate after warm-up.
    """

    def __init__(self, params: Params, names: Iterable[str], initial_lr: float) -> None:
        self.velocity: Dict[str, np.ndarray] = {n: np.zeros_like(params[n]) for n in names}
        self.main_lr = initial_lr
        self.iteration = 0
        self.best_val_loss = math.inf
        self.evals_since_best = 0
        self.drops = 0
        self.stopped = False

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(iteration={self.iteration}, main_lr={self.main_lr}, "
            f"best_val_loss={self.best_val_loss}, drops={self.drops})"
        )


class NesterovSGD:
    """Nesterov update v <- mu v - lr grad(theta + mu v); theta <- theta + v.

    Args:
        momentum (float): Momentum coefficient mu (Default: 0.9).
    """

    def __init__(self, momentum: float = 0.9) -> None:
        self.momentum = momentum

    def step(
        self,
        params: Params,
        state: OptimizerState,
        lr: float,
        grad_fn: Callable[[], Tuple[float, Params]],
    ) -> float:
        """Apply one update in place.

        ``grad_fn`` is evaluated while ``params`` holds the look-ahead point
        theta + mu v; buffers it updates in place, such as batch-norm running
        statistics, are kept.

        Returns:
            (float): Loss returned by ``grad_fn``.
        """
        mu = self.momentum
        saved = {n: params[n].copy() for n in state.velocity}
        for n, v in state.velocity.items():
            params[n] += (mu * v).astype(params[n].dtype, copy=False)
        try:
            loss, grads = grad_fn()
        finally:
            for n, value in saved.items():
                params[n] = value

        for n, v in state.velocity.items():
            v *= mu
            v -= lr * grads[n]
            params[n] += v
        state.iteration += 1
        return loss
