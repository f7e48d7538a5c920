#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Deterministic random streams."""

from typing import Union

import numpy as np


def child_rng(seed: int, *keys: Union[int, str]) -> np.random.Generator:
    """Derive an independent generator from a base seed and a key path.

    The same (seed, keys) always yields the same stream, whatever order the
    streams are created in, so serial and parallel work agree.

    Args:
        seed (int): Base seed.
        *keys (Union[int, str]): Stream identifiers, e.g. a case id.

    Returns:
        (np.random.Generator): Generator seeded from the key path.
    """
    entropy = [int(seed)]
    for key in keys:
        if isinstance(key, str):
            entropy.extend(key.encode("utf-8"))
        else:
            entropy.append(int(key))
    return np.random.default_rng(np.random.SeedSequence(entropy))
