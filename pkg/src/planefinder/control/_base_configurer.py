#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Private metaclass that provides tooling needed by configurer classes."""

from abc import ABC, abstractmethod
from typing import Any, Dict, Type


class BaseConfigurerError(Exception):
    """Base error for all configurer classes."""


class BadConfigurationError(BaseConfigurerError):
    """Raised if a configurer is given an option it does not know or cannot take."""


class BaseConfigurer(ABC):
    """Base class for singleton configurers.

    Subclasses keep their options in ``_options`` and declare defaults in
    ``_defaults``. One instance exists per subclass.
    """

    _options: Dict[str, Any]
    _error: Type[BadConfigurationError] = BadConfigurationError

    def __new__(cls) -> "BaseConfigurer":
        if not hasattr(cls, f"_{cls.__name__}__instance"):
            instance = super(BaseConfigurer, cls).__new__(cls)
            instance._options = instance._defaults()
            setattr(cls, f"_{cls.__name__}__instance", instance)
        return getattr(cls, f"_{cls.__name__}__instance")

    @abstractmethod
    def _defaults(self) -> Dict[str, Any]:
        """Default option values."""

    def reset(self) -> None:
        """Reset the configurer to its default state."""
        self._options = self._defaults()

    def configure(self, **options: Any) -> None:
        """Set options by name.

        Raises:
            BadConfigurationError: Raised if an option name is not valid. Subclasses
                raise their own subclass of it.
        """
        for k in options.keys():
            if k not in self._options:
                raise self._error(
                    (
                        f"Option {k} is not a valid {self.__class__.__name__} option. "
                        f"Valid options are {', '.join(self._options.keys())}."
                    )
                )
        for k, v in options.items():
            self._options[k] = self._coerce(k, v)

    def _coerce(self, name: str, value: Any) -> Any:
        return value

    def __repr__(self) -> str:
        """String representation of the configurer."""
        attrs = ", ".join(f"{k}={v!r}" for k, v in self._options.items())
        return f"{self.__class__.__name__}({attrs})"
