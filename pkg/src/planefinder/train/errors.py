#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Errors raised during training."""


class TrainingError(Exception):
    """Base error for training."""


class EmptyClassError(TrainingError):
    """Raised when a class has no record to sample from."""


class AugmentationError(TrainingError):
    """Raised when an image cannot be augmented."""


class NumericalError(TrainingError):
    """Raised when the loss stops being finite.

    Args:
        iteration (int): Iteration at which the loss was not finite.
        loss (float): Offending loss value.
    """

    def __init__(self, iteration: int, loss: float) -> None:
        super().__init__(f"Loss became {loss} at iteration {iteration}.")
        self.iteration = iteration
        self.loss = loss
