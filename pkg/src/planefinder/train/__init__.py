#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Class-balanced training with Nesterov SGD and a plateau schedule."""

from .augment import AugmentParams, apply_augmentation, augment, draw_params, standardise
from .errors import AugmentationError, EmptyClassError, NumericalError, TrainingError
from .optimizer import NesterovSGD, OptimizerState
from .sampler import BatchSampler, sample_batch
from .schedule import current_lr, lr_schedule_update
from .trainer import (
    LOG_HEADER,
    Batch,
    LogRow,
    Phase,
    TrainingLog,
    assemble_batch,
    train,
    train_step,
    validation_loss,
)
