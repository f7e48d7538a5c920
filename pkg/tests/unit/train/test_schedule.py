#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Test the learning rate schedule."""

import pytest

from planefinder.control import TrainConfig
from planefinder.train import OptimizerState, current_lr, lr_schedule_update


@pytest.fixture
def config() -> TrainConfig:
    return TrainConfig(warmup_iters=10, plateau_patience=2, max_drops=2, initial_lr=0.1)


def _state(config, iteration) -> OptimizerState:
    state = OptimizerState({}, [], config.initial_lr)
    state.iteration = iteration
    return state


def test_warmup_rate(config) -> None:
    assert current_lr(_state(config, 0), config) == 0.01
    assert current_lr(_state(config, 10), config) == 0.1


def test_warmup_rate_never_exceeds_initial_rate() -> None:
    config = TrainConfig.for_architecture("smallnet")
    assert current_lr(_state(config, 0), config) == pytest.approx(0.001)


def test_plateaus_divide_the_rate_then_stop(config) -> None:
    state = _state(config, 20)
    assert lr_schedule_update(state, 1.0, config) == 0.1
    assert lr_schedule_update(state, 1.5, config) == 0.1
    assert lr_schedule_update(state, 1.2, config) == pytest.approx(0.01)
    assert state.drops == 1
    assert lr_schedule_update(state, 0.5, config) == pytest.approx(0.01)
    lr_schedule_update(state, 0.9, config)
    assert not state.stopped
    assert lr_schedule_update(state, 0.9, config) == pytest.approx(0.001)
    assert state.stopped
    assert state.best_val_loss == 0.5


def test_warmup_only_tracks_the_best_loss(config) -> None:
    state = _state(config, 3)
    for loss in (1.0, 2.0, 3.0, 4.0):
        lr_schedule_update(state, loss, config)
    assert state.drops == 0
    assert state.evals_since_best == 0
    assert state.best_val_loss == 1.0
