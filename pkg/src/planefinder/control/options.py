#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Option types shared by configurers and the modules they configure."""

from typing import Dict, Iterable, Iterator, Mapping, Union

from planefinder.meta.mixins import EnhancedEnum

# Synthetic class taxonomy: 13 foreground planes followed by the background class.
NUM_FOREGROUND = 13
BACKGROUND_CLASS = NUM_FOREGROUND
BRIGHT_CLASSES = (0, 1, 2, 3)
DARK_CLASSES = (4, 5, 6, 7)
MIXED_CLASSES = (8, 9, 10, 11, 12)


class BackwardMode(EnhancedEnum):
    """Rule applied at ReLU units during a backward pass."""

    PLAIN = "plain"
    GUIDED = "guided"


class SignMode(EnhancedEnum):
    """Which saliency signs feed a confidence map."""

    POSITIVE = "positive"
    NEGATIVE = "negative"
    BOTH = "both"


class ClassSignTable(Mapping[int, SignMode]):
    """Total mapping from foreground class id to sign selection.

    Args:
        entries (Mapping[int, Union[SignMode, str]]): Class id to sign mode.
        num_foreground (int): Foreground classes that must be covered (Default: 13).

    Raises:
        ValueError: Raised if a foreground class has no entry.
    """

    def __init__(
        self,
        entries: Mapping[int, Union[SignMode, str]],
        num_foreground: int = NUM_FOREGROUND,
    ) -> None:
        self._entries: Dict[int, SignMode] = {
            int(k): SignMode.parse(v) for k, v in entries.items()
        }
        missing = [k for k in range(num_foreground) if k not in self._entries]
        if missing:
            raise ValueError(f"Sign table has no entry for classes {missing}.")

    def __getitem__(self, class_id: int) -> SignMode:
        return self._entries[class_id]

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._entries))

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        """String representation of ClassSignTable."""
        body = ", ".join(f"{k}: {v.value}" for k, v in self.items())
        return f"{self.__class__.__name__}({{{body}}})"


def _grouped(groups: Iterable[tuple]) -> Dict[int, SignMode]:
    return {k: mode for classes, mode in groups for k in classes}


def default_sign_table() -> ClassSignTable:
    """Sign table matching the synthetic taxonomy's intensity polarity.

    Bright-structure classes keep positive saliency, dark-structure classes keep
    negative saliency and mixed classes keep both.

    Returns:
        (ClassSignTable): Default table.
    """
    return ClassSignTable(
        _grouped(
            [
                (BRIGHT_CLASSES, SignMode.POSITIVE),
                (DARK_CLASSES, SignMode.NEGATIVE),
                (MIXED_CLASSES, SignMode.BOTH),
            ]
        )
    )
