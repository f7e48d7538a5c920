#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Warm-up and divide-on-plateau learning rate schedule."""

import logging

from planefinder.control import TrainConfig

from .optimizer import OptimizerState

logger = logging.getLogger(__name__)


def current_lr(state: OptimizerState, config: TrainConfig) -> float:
    """Rate for the next iteration."""
    if state.iteration < config.warmup_iters:
        return config.effective_warmup_lr
    return state.main_lr


def lr_schedule_update(state: OptimizerState, val_loss: float, config: TrainConfig) -> float:
    """Record a validation loss and divide the rate on a plateau.

    During warm-up only the best loss is tracked. Afterwards ``plateau_patience``
    consecutive evaluations without a new best divide the rate by
    ``lr_divisor``; training is flagged to stop once ``max_drops`` divisions
    have happened.

    Returns:
        (float): The rate used after warm-up.
    """
    improved = val_loss < state.best_val_loss
    if improved:
        state.best_val_loss = val_loss
    if state.iteration < config.warmup_iters:
        return state.main_lr

    if improved:
        state.evals_since_best = 0
        return state.main_lr
    state.evals_since_best += 1
    if state.evals_since_best >= config.plateau_patience:
        state.main_lr /= config.lr_divisor
        state.drops += 1
        state.evals_since_best = 0
        logger.info(
            f"Validation loss plateaued at iteration {state.iteration}; "
            f"learning rate is now {state.main_lr:g} (drop {state.drops})"
        )
        if state.drops >= config.max_drops:
            state.stopped = True
    return state.main_lr
