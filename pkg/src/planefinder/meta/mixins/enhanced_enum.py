#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Mixin for enhancing Enum objects."""

from enum import Enum
from typing import Any, List, Tuple, TypeVar, Union

_E = TypeVar("_E", bound="EnhancedEnum")


class EnhancedEnum(Enum):
    """Mixin for giving enums extra methods for convenience."""

    @classmethod
    def items(cls) -> List[Tuple[str, Any]]:
        """Returns items of an Enum."""
        return [(c.name, c.value) for c in cls]

    @classmethod
    def parse(cls: "type[_E]", value: Union[str, "_E"]) -> "_E":
        """Look up a member by value or by case-insensitive name.

        Args:
            value (Union[str, EnhancedEnum]): Member, member value or member name.

        Raises:
            ValueError: Raised if no member matches.

        Returns:
            (EnhancedEnum): Matching member.
        """
        if isinstance(value, cls):
            return value
        for member in cls:
            if value == member.value or str(value).lower() == member.name.lower():
                return member
        choices = ", ".join(str(m.value) for m in cls)
        raise ValueError(f"{value!r} is not a valid {cls.__name__}. Choose from {choices}.")
