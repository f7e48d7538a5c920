#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Synthetic freehand sweeps with an annotation track."""

import logging
import os
import pathlib
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from planefinder.control.options import BACKGROUND_CLASS, NUM_FOREGROUND
from planefinder.meta.utils import child_rng, read_pgm, write_pgm

from .dataset import SynthError
from .scene import CANVAS, DEFAULT_NOISE, SceneParams, render_scene, sample_scene

logger = logging.getLogger(__name__)

MIN_DWELL = 5
MAX_DWELL = 12
FOREGROUND_SHARE = 0.1
RAMP = (0.15, 0.3)
TRACK_FILE = "track.tsv"


class VideoError(SynthError):
    """Raised when a video cannot be generated or read."""


@dataclass
class Video:
    """Frame files in order and the class shown in each frame.

    Args:
        frames (List[pathlib.Path]): Frame images in order.
        track (np.ndarray): Class id of every frame.
    """

    frames: List[pathlib.Path]
    track: np.ndarray

    def __len__(self) -> int:
        return len(self.frames)

    def spans(self) -> Dict[int, Tuple[int, int]]:
        """First and last frame index, inclusive, of every foreground class shown."""
        spans: Dict[int, Tuple[int, int]] = {}
        for idx in np.flatnonzero(self.track != BACKGROUND_CLASS):
            k = int(self.track[idx])
            start, _ = spans.get(k, (int(idx), int(idx)))
            spans[k] = (start, int(idx))
        return spans

    def load(self, index: int) -> np.ndarray:
        """Frame ``index`` as float32 (1, H, W)."""
        return read_pgm(self.frames[index])[None]

    @classmethod
    def read(cls, directory: Union[str, os.PathLike]) -> "Video":
        """Read a video directory written by gen_video.

        Raises:
            VideoError: Raised if the track is missing or malformed or names a
                frame that does not exist.
        """
        directory = pathlib.Path(directory)
        track_path = directory / TRACK_FILE
        if not track_path.exists():
            raise VideoError(f"{directory} has no {TRACK_FILE}.")
        try:
            text = track_path.read_text(encoding="utf-8")
        except UnicodeDecodeError as e:
            raise VideoError(f"{track_path} is not UTF-8 text: {e.reason} at byte {e.start}.")
        labels: List[int] = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                index, class_id = (int(v) for v in line.split("\t"))
            except ValueError:
                raise VideoError(f"{track_path}:{lineno}: expected frame_idx<TAB>class_id.")
            if index != len(labels):
                raise VideoError(f"{track_path}:{lineno}: frame {index} is out of order.")
            labels.append(class_id)
        frames = [directory / frame_name(i) for i in range(len(labels))]
        missing = [f.name for f in frames if not f.exists()]
        if missing:
            raise VideoError(f"{directory} is missing frames {missing[:3]}.")
        return cls(frames, np.asarray(labels, dtype=np.int64))


def frame_name(index: int) -> str:
    return f"frame_{index:05d}.pgm"


def _timeline(
    n_frames: int, classes: Sequence[int], rng: np.random.Generator
) -> List[Tuple[int, int, int]]:
    """(class id, first frame, dwell) of every class in sweep order."""
    budget = int(FOREGROUND_SHARE * n_frames)
    max_classes = budget // MIN_DWELL
    order = [int(k) for k in rng.permutation(list(classes))][:max_classes]
    if not order:
        return []
    max_dwell = max(MIN_DWELL, min(MAX_DWELL, budget // len(order)))
    dwells = [int(rng.integers(MIN_DWELL, max_dwell + 1)) for _ in order]
    n_background = n_frames - sum(dwells)
    cuts = np.sort(rng.integers(0, n_background + 1, size=len(order)))
    gaps = np.diff(np.concatenate([[0], cuts]))

    plan, frame = [], 0
    for class_id, gap, dwell in zip(order, gaps, dwells):
        frame += int(gap)
        plan.append((class_id, frame, dwell))
        frame += dwell
    return plan


def gen_video(
    case: int,
    n_frames: int,
    seed: int,
    out_dir: Union[str, os.PathLike],
    classes: Optional[Sequence[int]] = None,
    canvas: Tuple[int, int] = CANVAS,
    noise: float = DEFAULT_NOISE,
) -> Video:
    """Render a sweep through the structures of one case.

    Each shown class dwells for 5 to 12 frames with small pose jitter, framed by
    background stretches. The frames just outside a dwell show the structure
    faintly and are annotated as background. At most a tenth of the frames
    are foreground, so classes that do not fit are left out.

    Args:
        case (int): Case number; fixes texture, distractors and structure poses.
        n_frames (int): Frame count, at least 100.
        seed (int): Video seed.
        out_dir (Union[str, os.PathLike]): Directory receiving the numbered PGM
            frames and the annotation track.
        classes (Optional[Sequence[int]]): Foreground classes to visit; None visits
            all of them (Default: None).
        canvas (Tuple[int, int]): Frame height and width (Default: 224x288).
        noise (float): Speckle level (Default: 0.25).

    Raises:
        VideoError: Raised if n_frames < 100 or a class is not a foreground class.

    Returns:
        (Video): Frames and annotation track.
    """
    if n_frames < 100:
        raise VideoError(f"A sweep needs at least 100 frames, got {n_frames}.")
    classes = list(range(NUM_FOREGROUND)) if classes is None else list(classes)
    if any(not 0 <= k < NUM_FOREGROUND for k in classes):
        raise VideoError(f"Videos show foreground classes only, got {classes}.")

    rng = child_rng(seed, "video", case)
    anatomy = child_rng(seed, "anatomy", case)
    background = sample_scene(BACKGROUND_CLASS, anatomy, canvas, noise)
    poses = {k: sample_scene(k, anatomy, canvas, noise) for k in classes}

    scenes: List[SceneParams] = [background] * n_frames
    track = np.full(n_frames, BACKGROUND_CLASS, dtype=np.int64)
    for class_id, first, dwell in _timeline(n_frames, classes, rng):
        base = replace(
            poses[class_id],
            texture_seed=background.texture_seed,
            distractor_count=background.distractor_count,
        )
        for t in range(dwell):
            cy = base.centre[0] + float(rng.uniform(-2.0, 2.0))
            cx = base.centre[1] + float(rng.uniform(-2.0, 2.0))
            rotation = base.rotation + float(rng.uniform(-2.0, 2.0))
            scenes[first + t] = replace(base, centre=(cy, cx), rotation=rotation)
            track[first + t] = class_id
        for step in range(1, len(RAMP) + 1):
            for idx in (first - step, first + dwell + step - 1):
                if 0 <= idx < n_frames and track[idx] == BACKGROUND_CLASS:
                    scenes[idx] = replace(base, visibility=RAMP[len(RAMP) - step])

    out_dir = pathlib.Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    frames = []
    for i, scene in enumerate(scenes):
        image, _ = render_scene(replace(scene, noise_seed=int(rng.integers(2**31))))
        path = out_dir / frame_name(i)
        write_pgm(path, image[0])
        frames.append(path)
    (out_dir / TRACK_FILE).write_text(
        "".join(f"{i}\t{k}\n" for i, k in enumerate(track.tolist())), encoding="utf-8"
    )
    video = Video(frames, track)
    logger.info(
        f"Rendered {n_frames} frames of case {case} to {out_dir}, showing {sorted(video.spans())}"
    )
    return video
