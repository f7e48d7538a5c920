#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Configure saliency computation and bounding box extraction."""

from typing import Any, Dict, Mapping

from ._base_configurer import BadConfigurationError, BaseConfigurer
from .options import BackwardMode, ClassSignTable, default_sign_table


class BadSaliencyConfigurationError(BadConfigurationError):
    """Raised if the saliency configurer is given a bad option."""


class SaliencyConfigurer(BaseConfigurer):
    """Configurer for saliency and localisation.

    Options:
        backward_mode (BackwardMode): ReLU rule used by weighted saliency
            (Default: BackwardMode.GUIDED).
        freeze_bn (bool): Use running batch-norm statistics for the saliency pass
            (Default: True).
        gaussian_size (int): Side of the confidence-map blur kernel (Default: 5).
        gaussian_sigma (float): Standard deviation of the blur kernel (Default: 1.0).
        sign_table (ClassSignTable): Class to sign selection (Default: polarity groups).
    """

    _error = BadSaliencyConfigurationError

    def _defaults(self) -> Dict[str, Any]:
        return {
            "backward_mode": BackwardMode.GUIDED,
            "freeze_bn": True,
            "gaussian_size": 5,
            "gaussian_sigma": 1.0,
            "sign_table": default_sign_table(),
        }

    def _coerce(self, name: str, value: Any) -> Any:
        if name == "backward_mode":
            return BackwardMode.parse(value)
        if name == "sign_table" and not isinstance(value, ClassSignTable):
            return ClassSignTable(value)
        if name == "gaussian_size":
            if int(value) < 1 or int(value) % 2 == 0:
                raise BadSaliencyConfigurationError(
                    f"gaussian_size must be a positive odd integer, not {value}."
                )
            return int(value)
        if name == "gaussian_sigma":
            if float(value) <= 0:
                raise BadSaliencyConfigurationError(
                    f"gaussian_sigma must be positive, not {value}."
                )
            return float(value)
        if name == "freeze_bn":
            return bool(value)
        return value

    @property
    def backward_mode(self) -> BackwardMode:
        """ReLU rule used by weighted saliency."""
        return self._options["backward_mode"]

    @property
    def freeze_bn(self) -> bool:
        """Whether the saliency pass uses running batch-norm statistics."""
        return self._options["freeze_bn"]

    @property
    def gaussian_size(self) -> int:
        """Side of the confidence-map blur kernel."""
        return self._options["gaussian_size"]

    @property
    def gaussian_sigma(self) -> float:
        """Standard deviation of the confidence-map blur kernel."""
        return self._options["gaussian_sigma"]

    @property
    def sign_table(self) -> ClassSignTable:
        """Class to sign selection used by localisation."""
        return self._options["sign_table"]

    @sign_table.setter
    def sign_table(self, table: Mapping) -> None:
        self.configure(sign_table=table)
