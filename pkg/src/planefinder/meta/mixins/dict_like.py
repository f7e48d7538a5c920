#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Mixin for option objects that need to behave like a flat dictionary."""

from typing import Any, Dict, Iterable, Mapping, Tuple


class DictLike:
    """Mixin for option objects whose public attributes are their options.

    Attributes starting with an underscore are private and never exported.
    """

    def dict(self) -> Dict[str, Any]:
        """Return public options as a dictionary.

        Returns:
            (Dict[str, Any]): Option name to value mapping.
        """
        return {k: v for k, v in self.__dict__.items() if not k.startswith("_")}

    def keys(self) -> Iterable[str]:
        """Get option names.

        Returns:
            (Iterable[str]): Iterable containing option names in definition order.
        """
        return iter(self.dict().keys())

    def items(self) -> Iterable[Tuple[str, Any]]:
        """Get option name and value pairs.

        Returns:
            (Iterable[Tuple[str, Any]]): Iterable containing (name, value) pairs.
        """
        return iter(self.dict().items())

    def update(self, options: Mapping[str, Any]) -> None:
        """Overwrite known options in place.

        Args:
            options (Mapping[str, Any]): Options to overwrite.

        Raises:
            KeyError: Raised if an option is not defined on the object.
        """
        valid = set(self.keys())
        for k, v in options.items():
            if k not in valid:
                raise KeyError(k)
            setattr(self, k, v)

    def __eq__(self, other: object) -> bool:
        """Compare two option objects by their public options."""
        if not isinstance(other, DictLike):
            return NotImplemented
        return type(self) is type(other) and self.dict() == other.dict()

    def __repr__(self) -> str:
        """String representation of the option object."""
        attrs = ", ".join(f"{k}={v!r}" for k, v in self.items())
        return f"{self.__class__.__name__}({attrs})"
