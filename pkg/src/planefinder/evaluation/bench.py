#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Frame rates of detection and localisation, one frame at a time."""

import logging
import time
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from planefinder.control import Configure
from planefinder.net import Network, builtin_spec
from planefinder.synth.scene import CANVAS
from planefinder.tensor import Mode

logger = logging.getLogger(__name__)

METHODOLOGY = (
    "wall clock (perf_counter), batch size 1, random weights and inputs, "
    "warm-up frames discarded"
)


@dataclass(frozen=True)
class BenchRow:
    architecture: str
    parameters: int
    detection_fps: float
    localisation_fps: float
    combined_fps: float

    def dumps(self) -> str:
        return (
            f"{self.architecture},{self.parameters},{self.detection_fps:.2f},"
            f"{self.localisation_fps:.2f},{self.combined_fps:.2f}"
        )


@dataclass
class BenchReport:
    rows: List[BenchRow]
    n_frames: int
    batch_size: int = 1
    methodology: str = METHODOLOGY

    def dumps(self) -> str:
        lines = ["architecture,parameters,detection_fps,localisation_fps,combined_fps"]
        lines += [r.dumps() for r in self.rows]
        return "".join(f"{line}\n" for line in lines)

    def summary(self) -> str:
        lines = [f"{self.n_frames} frames per measurement; {self.methodology}"]
        lines += [
            f"{r.architecture:>10}: detection {r.detection_fps:8.1f} fps, "
            f"localisation {r.localisation_fps:8.1f} fps, combined {r.combined_fps:8.1f} fps"
            for r in self.rows
        ]
        return "\n".join(lines)


def _fps(elapsed: Sequence[float]) -> float:
    return len(elapsed) / max(float(np.sum(elapsed)), 1e-9)


def bench_network(
    net: Network,
    n_frames: int = 50,
    warmup: int = 5,
    seed: int = 0,
    frame_shape: Tuple[int, int] = CANVAS,
) -> BenchRow:
    """Time one architecture.

    Detection is a forward pass. Localisation is the single backward pass of
    weighted saliency from a stored forward pass. Combined runs both.
    """
    rng = np.random.default_rng(seed)
    mode = Configure("saliency").backward_mode
    detection: List[float] = []
    localisation: List[float] = []
    combined: List[float] = []
    for i in range(n_frames + warmup):
        frame = rng.standard_normal((1, net.spec.in_channels) + tuple(frame_shape))
        frame = frame.astype(net.dtype)

        start = time.perf_counter()
        net.forward(frame, Mode.INFER, keep_trace=False)
        forward_done = time.perf_counter()

        result = net.forward(frame, Mode.INFER)
        traced = time.perf_counter()
        net.backward(result.trace, np.maximum(result.F, 0), mode)
        backward_done = time.perf_counter()
        del result

        if i >= warmup:
            detection.append(forward_done - start)
            localisation.append(backward_done - traced)
            combined.append(backward_done - forward_done)

    row = BenchRow(
        net.spec.name,
        net.num_parameters(),
        _fps(detection),
        _fps(localisation),
        _fps(combined),
    )
    logger.info(
        f"{row.architecture}: detection {row.detection_fps:.1f} fps, "
        f"localisation {row.localisation_fps:.1f} fps, combined {row.combined_fps:.1f} fps"
    )
    return row


def bench(
    architectures: Sequence[str],
    n_frames: int = 50,
    warmup: int = 5,
    seed: int = 0,
    frame_shape: Tuple[int, int] = CANVAS,
) -> BenchReport:
    """Frame rates of each architecture with random weights, strictly in series.

    Args:
        architectures (Sequence[str]): Built-in architecture names.
        n_frames (int): Timed frames per measurement (Default: 50).
        warmup (int): Untimed frames run first (Default: 5).
        seed (int): Seed of the weights and inputs (Default: 0).
        frame_shape (Tuple[int, int]): Frame height and width (Default: 224x288).

    Raises:
        UnknownArchitectureError: Raised if a name is not a built-in architecture.

    Returns:
        (BenchReport): One row per architecture.
    """
    rows = [
        bench_network(Network(builtin_spec(name), seed=seed), n_frames, warmup, seed, frame_shape)
        for name in architectures
    ]
    return BenchReport(rows, n_frames)
