#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Class-balanced mini-batch sampling."""

from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from planefinder.control.options import BACKGROUND_CLASS, NUM_FOREGROUND
from planefinder.synth.dataset import SampleRecord

from .errors import EmptyClassError


class BatchSampler:
    """Draws batches with a fixed number of records per class.

    Every batch holds ``per_class_quota`` records of each foreground class and
    ``background_quota`` background records, however imbalanced the pool.
    Records are drawn uniformly; a class with fewer records than its quota is
    drawn with replacement.

    Args:
        records (Iterable[SampleRecord]): Pool to sample from.
        per_class_quota (int): Records per foreground class (Default: 2).
        background_quota (int): Background records (Default: 26).
        foreground_classes (Optional[Sequence[int]]): Foreground class ids
            (Default: 0..12).
        background_class (int): Background class id (Default: 13).

    Raises:
        EmptyClassError: Raised naming the first class without records.
    """

    def __init__(
        self,
        records: Iterable[SampleRecord],
        per_class_quota: int = 2,
        background_quota: int = 26,
        foreground_classes: Optional[Sequence[int]] = None,
        background_class: int = BACKGROUND_CLASS,
    ) -> None:
        foreground = (
            list(range(NUM_FOREGROUND)) if foreground_classes is None else list(foreground_classes)
        )
        self.quotas: Dict[int, int] = {k: per_class_quota for k in foreground}
        self.quotas[background_class] = background_quota
        self.pools: Dict[int, List[SampleRecord]] = {k: [] for k in self.quotas}
        for r in records:
            if r.class_id in self.pools:
                self.pools[r.class_id].append(r)
        for k, quota in self.quotas.items():
            if quota > 0 and not self.pools[k]:
                raise EmptyClassError(f"Class {k} has no records to sample {quota} from.")

    @property
    def batch_size(self) -> int:
        return sum(self.quotas.values())

    def sample(self, rng: np.random.Generator) -> List[SampleRecord]:
        """Draw one batch in shuffled order."""
        batch: List[SampleRecord] = []
        for k, quota in self.quotas.items():
            pool = self.pools[k]
            if quota == 0:
                continue
            picks = rng.choice(len(pool), size=quota, replace=len(pool) < quota)
            batch.extend(pool[i] for i in picks)
        order = rng.permutation(len(batch))
        return [batch[i] for i in order]


def sample_batch(
    records: Iterable[SampleRecord],
    per_class_quota: int,
    background_quota: int,
    rng: np.random.Generator,
    foreground_classes: Optional[Sequence[int]] = None,
    background_class: int = BACKGROUND_CLASS,
) -> List[SampleRecord]:
    """Draw one class-balanced batch; see BatchSampler."""
    sampler = BatchSampler(
        records, per_class_quota, background_quota, foreground_classes, background_class
    )
    return sampler.sample(rng)
