#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Training configuration and its key=value file format."""

import os
import pathlib
from typing import Any, Dict, Union

from planefinder.meta.mixins import DictLike


class TrainConfigError(Exception):
    """Raised when a training configuration is invalid or cannot be parsed."""


class TrainConfig(DictLike):
    """Hyper-parameters of the training procedure.

    Args:
        initial_lr (float): Learning rate after warm-up (Default: 0.1).
        warmup_lr (float): Learning rate during warm-up (Default: 0.01).
        warmup_iters (int): Number of warm-up iterations (Default: 500).
        momentum (float): Nesterov momentum (Default: 0.9).
        lr_divisor (float): Factor the rate is divided by on a plateau (Default: 10).
        plateau_patience (int): Validation evaluations without improvement before
            the rate is divided (Default: 3).
        eval_every (int): Iterations between validation evaluations (Default: 200).
        per_class_quota (int): Images per foreground class in a batch (Default: 2).
        background_quota (int): Background images in a batch (Default: 26).
        max_drops (int): Rate drops after which training stops (Default: 3).
        max_iters (int): Hard cap on iterations (Default: 20000).
        seed (int): Seed of every random stream used by training (Default: 0).
        patch_size (int): Side of the square training patches (Default: 224).
        min_crop (int): Smallest crop side before rescaling (Default: 174).
        max_crop (int): Largest crop side before rescaling (Default: 224).
        max_angle (float): Largest absolute rotation in degrees (Default: 25.0).
        flip_prob (float): Probability of a left-right flip (Default: 0.5).
        val_fraction (float): Share of training cases held out for validation
            (Default: 0.2).
        num_classes (int): Class count including background (Default: 14).
        val_batch (int): Images per validation forward pass (Default: 16).
        prefetch (int): Batches assembled ahead of the training step (Default: 2).
    """

    def __init__(
        self,
        initial_lr: float = 0.1,
        warmup_lr: float = 0.01,
        warmup_iters: int = 500,
        momentum: float = 0.9,
        lr_divisor: float = 10.0,
        plateau_patience: int = 3,
        eval_every: int = 200,
        per_class_quota: int = 2,
        background_quota: int = 26,
        max_drops: int = 3,
        max_iters: int = 20000,
        seed: int = 0,
        patch_size: int = 224,
        min_crop: int = 174,
        max_crop: int = 224,
        max_angle: float = 25.0,
        flip_prob: float = 0.5,
        val_fraction: float = 0.2,
        num_classes: int = 14,
        val_batch: int = 16,
        prefetch: int = 2,
    ) -> None:
        self.initial_lr = initial_lr
        self.warmup_lr = warmup_lr
        self.warmup_iters = warmup_iters
        self.momentum = momentum
        self.lr_divisor = lr_divisor
        self.plateau_patience = plateau_patience
        self.eval_every = eval_every
        self.per_class_quota = per_class_quota
        self.background_quota = background_quota
        self.max_drops = max_drops
        self.max_iters = max_iters
        self.seed = seed
        self.patch_size = patch_size
        self.min_crop = min_crop
        self.max_crop = max_crop
        self.max_angle = max_angle
        self.flip_prob = flip_prob
        self.val_fraction = val_fraction
        self.num_classes = num_classes
        self.val_batch = val_batch
        self.prefetch = prefetch
        self.validate()

    @classmethod
    def for_architecture(cls, name: str, **overrides: Any) -> "TrainConfig":
        """Defaults for a built-in architecture.

        SmallNet has no batch normalisation and trains with a lower initial rate.

        Args:
            name (str): Architecture name.
            **overrides (Any): Fields to override.

        Returns:
            (TrainConfig): Configuration for the architecture.
        """
        defaults: Dict[str, Any] = {"initial_lr": 0.001} if name == "smallnet" else {}
        defaults.update(overrides)
        return cls(**defaults)

    @property
    def batch_size(self) -> int:
        """Images per batch for the full class set."""
        return (self.num_classes - 1) * self.per_class_quota + self.background_quota

    @property
    def effective_warmup_lr(self) -> float:
        """Warm-up rate, never above the initial rate."""
        return min(self.warmup_lr, self.initial_lr)

    def validate(self) -> None:
        """Check value ranges.

        Raises:
            TrainConfigError: Raised if a rate, count or range is out of bounds.
        """
        for name in ("initial_lr", "warmup_lr", "lr_divisor"):
            if not getattr(self, name) > 0:
                raise TrainConfigError(f"{name} must be > 0, not {getattr(self, name)}.")
        if not 0 <= self.momentum < 1:
            raise TrainConfigError(f"momentum must lie in [0, 1), not {self.momentum}.")
        for name in ("eval_every", "plateau_patience", "max_iters", "patch_size"):
            if getattr(self, name) < 1:
                raise TrainConfigError(f"{name} must be >= 1, not {getattr(self, name)}.")
        if not 1 <= self.min_crop <= self.max_crop:
            raise TrainConfigError(
                f"Crop range [{self.min_crop}, {self.max_crop}] is empty or negative."
            )
        if not 0 < self.val_fraction < 1:
            raise TrainConfigError(f"val_fraction must lie in (0, 1), not {self.val_fraction}.")
        if self.num_classes < 2:
            raise TrainConfigError(f"num_classes must be >= 2, not {self.num_classes}.")

    @classmethod
    def loads(cls, text: str) -> "TrainConfig":
        """Parse key=value text.

        Blank lines and lines starting with '#' are ignored.

        Args:
            text (str): Configuration text.

        Raises:
            TrainConfigError: Raised on malformed lines, unknown keys or bad values.

        Returns:
            (TrainConfig): Parsed configuration.
        """
        defaults = cls()
        types = {k: type(v) for k, v in defaults.items()}
        values: Dict[str, Any] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise TrainConfigError(f"Line {lineno}: expected key=value, got {raw!r}.")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in types:
                raise TrainConfigError(
                    (
                        f"Line {lineno}: {key} is not a valid training option. "
                        f"Valid options are {', '.join(types.keys())}."
                    )
                )
            try:
                values[key] = _coerce(types[key], value)
            except ValueError:
                raise TrainConfigError(
                    f"Line {lineno}: {key}={value!r} is not a valid {types[key].__name__}."
                )
        return cls(**values)

    def dumps(self) -> str:
        """Render as key=value text, one option per line."""
        return "".join(f"{k}={v!r}\n" for k, v in self.items())

    @classmethod
    def from_file(cls, path: Union[str, os.PathLike]) -> "TrainConfig":
        """Load a configuration file."""
        try:
            text = pathlib.Path(path).read_text(encoding="utf-8")
        except UnicodeDecodeError as e:
            raise TrainConfigError(f"{path} is not UTF-8 text: {e.reason} at byte {e.start}.")
        return cls.loads(text)

    def to_file(self, path: Union[str, os.PathLike]) -> None:
        """Write the configuration file."""
        pathlib.Path(path).write_text(self.dumps(), encoding="utf-8")


def _coerce(kind: type, value: str) -> Any:
    if kind is int:
        number = float(value)
        if not number.is_integer():
            raise ValueError(value)
        return int(number)
    return kind(value)
