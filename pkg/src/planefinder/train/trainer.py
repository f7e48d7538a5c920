#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Training loop."""

import collections
import logging
import math
import os
import pathlib
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass
from typing import Deque, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from planefinder.control import TrainConfig
from planefinder.control.options import BackwardMode
from planefinder.meta import Params
from planefinder.meta.mixins import EnhancedEnum
from planefinder.meta.utils import child_rng
from planefinder.net import Network, NetworkSpec
from planefinder.synth.dataset import Manifest, SampleRecord, split_by_case, strip_boxes
from planefinder.tensor import Mode, softmax_xent

from .augment import augment, standardise
from .errors import NumericalError, TrainingError
from .optimizer import NesterovSGD, OptimizerState
from .sampler import BatchSampler
from .schedule import current_lr, lr_schedule_update

logger = logging.getLogger(__name__)

LOG_HEADER = "iter,lr,train_loss,val_loss"


class Phase(EnhancedEnum):
    """Part of the schedule an iteration belongs to."""

    WARMUP = "warmup"
    MAIN = "main"


@dataclass
class Batch:
    """Standardised patches and their labels."""

    images: np.ndarray
    labels: np.ndarray


@dataclass(frozen=True)
class LogRow:
    iteration: int
    lr: float
    train_loss: float
    val_loss: Optional[float] = None

    def dumps(self) -> str:
        val = "" if self.val_loss is None else repr(self.val_loss)
        return f"{self.iteration},{self.lr!r},{self.train_loss!r},{val}"


class TrainingLog:
    """Per-iteration record of a training run."""

    def __init__(self) -> None:
        self.rows: List[LogRow] = []

    def append(self, row: LogRow) -> None:
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    def dumps(self) -> str:
        """CSV text with header "iter,lr,train_loss,val_loss"."""
        return "".join(f"{line}\n" for line in [LOG_HEADER] + [r.dumps() for r in self.rows])

    def write(self, path: Union[str, os.PathLike]) -> None:
        pathlib.Path(path).write_text(self.dumps(), encoding="utf-8")

    @property
    def validation(self) -> List[Tuple[int, float]]:
        """(iteration, validation loss) of every evaluation."""
        return [(r.iteration, r.val_loss) for r in self.rows if r.val_loss is not None]


def assemble_batch(
    records: Sequence[SampleRecord], rng: np.random.Generator, config: TrainConfig
) -> Batch:
    """Load, augment and standardise a list of records."""
    images = [
        augment(
            r.load(),
            rng,
            config.patch_size,
            config.min_crop,
            config.max_crop,
            config.max_angle,
            config.flip_prob,
        )
        for r in records
    ]
    labels = np.array([r.class_id for r in records], dtype=np.int64)
    return Batch(np.stack(images), labels)


def batch_stream(
    sampler: BatchSampler, config: TrainConfig, start: int = 0
) -> Iterator[Batch]:
    """Batches assembled ahead of use by a background thread.

    Batch ``i`` is drawn from its own random stream, so the sequence does not
    depend on how far the producer runs ahead.
    """

    def produce(i: int) -> Batch:
        rng = child_rng(config.seed, "batch", i)
        return assemble_batch(sampler.sample(rng), rng, config)

    depth = max(1, config.prefetch)
    with ThreadPoolExecutor(max_workers=1) as pool:
        pending: Deque[Future] = collections.deque()
        i = start
        while True:
            while len(pending) < depth:
                pending.append(pool.submit(produce, i))
                i += 1
            yield pending.popleft().result()


def phase_of(state: OptimizerState, config: TrainConfig) -> Phase:
    return Phase.WARMUP if state.iteration < config.warmup_iters else Phase.MAIN


def train_step(
    net: Network,
    batch: Batch,
    optimizer: NesterovSGD,
    state: OptimizerState,
    config: TrainConfig,
    phase: Optional[Union[Phase, str]] = None,
) -> float:
    """One Nesterov update on a batch.

    Args:
        net (Network): Network trained in place.
        batch (Batch): Standardised patches and labels.
        optimizer (NesterovSGD): Update rule.
        state (OptimizerState): Velocities and schedule state.
        config (TrainConfig): Rates.
        phase (Optional[Phase]): WARMUP uses the warm-up rate, MAIN the current
            post-warm-up rate; None picks by iteration (Default: None).

    Raises:
        NumericalError: Raised with the iteration index if the loss is not finite.

    Returns:
        (float): Batch loss at the look-ahead point.
    """
    phase = phase_of(state, config) if phase is None else Phase.parse(phase)
    lr = config.effective_warmup_lr if phase is Phase.WARMUP else state.main_lr
    names = net.trainable_names

    def grad_fn() -> Tuple[float, Params]:
        result = net.forward(batch.images, Mode.TRAIN)
        loss, dlogits = softmax_xent(result.a, batch.labels)
        if not math.isfinite(loss):
            raise NumericalError(state.iteration, loss)
        _, grads = net.backward_logits(result.trace, dlogits, BackwardMode.PLAIN)
        return loss, {n: grads[n] for n in names}

    return optimizer.step(net.params, state, lr, grad_fn)


def validation_loss(net: Network, records: Sequence[SampleRecord], batch: int = 16) -> float:
    """Mean cross-entropy over whole standardised frames in inference mode."""
    total, count = 0.0, 0
    for start in range(0, len(records), batch):
        chunk = records[start : start + batch]
        images = np.stack([standardise(r.load()) for r in chunk])
        labels = np.array([r.class_id for r in chunk], dtype=np.int64)
        result = net.forward(images, Mode.INFER, keep_trace=False)
        loss, _ = softmax_xent(result.a, labels)
        total += loss * len(chunk)
        count += len(chunk)
    return total / count


def train(
    spec: NetworkSpec,
    manifest: Manifest,
    config: TrainConfig,
    log_path: Optional[Union[str, os.PathLike]] = None,
) -> Tuple[Network, TrainingLog]:
    """Train a network on a manifest with image-level labels only.

    The manifest is split by case into training and validation parts. Batches
    are class balanced, augmented and standardised; validation runs every
    ``eval_every`` iterations on whole frames and drives the rate schedule.

    Args:
        spec (NetworkSpec): Architecture; its class count must match the config.
        manifest (Manifest): Labelled images. Boxes, if any, are dropped.
        config (TrainConfig): Hyper-parameters.
        log_path (Optional[Union[str, os.PathLike]]): CSV log destination
            (Default: None).

    Raises:
        TrainingError: Raised if the class counts disagree or a class is empty.
        NumericalError: Raised if the loss stops being finite.

    Returns:
        (Tuple[Network, TrainingLog]): Weights with the best validation loss and
            the training log.
    """
    if spec.num_classes != config.num_classes:
        raise TrainingError(
            f"{spec.name} has {spec.num_classes} classes, config has {config.num_classes}."
        )
    background = config.num_classes - 1
    train_part, val_part = split_by_case(
        strip_boxes(manifest), config.val_fraction, child_rng(config.seed, "validation")
    )
    if len(val_part) == 0:
        logger.warning("No case left for validation; validating on the training cases")
        val_part = train_part
    logger.info(
        f"Training {spec.name} on {len(train_part)} images, validating on {len(val_part)}"
    )

    sampler = BatchSampler(
        train_part,
        config.per_class_quota,
        config.background_quota,
        range(background),
        background,
    )
    net = Network(spec, seed=config.seed)
    optimizer = NesterovSGD(config.momentum)
    state = OptimizerState(net.params, net.trainable_names, config.initial_lr)
    log = TrainingLog()
    best: Optional[Network] = None
    best_loss = math.inf

    def evaluate() -> float:
        nonlocal best, best_loss
        loss = validation_loss(net, val_part.records, config.val_batch)
        if loss < best_loss:
            best, best_loss = net.copy(), loss
        return loss

    stream = batch_stream(sampler, config)
    try:
        for _ in range(config.max_iters):
            iteration = state.iteration
            lr = current_lr(state, config)
            loss = train_step(net, next(stream), optimizer, state, config)
            val_loss = None
            if state.iteration % config.eval_every == 0:
                val_loss = evaluate()
                lr_schedule_update(state, val_loss, config)
                logger.info(
                    f"Iteration {state.iteration}: lr {lr:g}, train loss {loss:.4f}, "
                    f"validation loss {val_loss:.4f}"
                )
            else:
                logger.debug(f"Iteration {state.iteration}: lr {lr:g}, train loss {loss:.4f}")
            log.append(LogRow(iteration, lr, loss, val_loss))
            if state.stopped:
                logger.info(f"Stopping after {state.drops} learning rate drops")
                break
    finally:
        stream.close()

    if best is None:
        evaluate()
    if log_path is not None:
        log.write(log_path)
    logger.info(f"Best validation loss {best_loss:.4f}")
    return best, log
