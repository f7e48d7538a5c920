#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Manifests of labelled images and the case-structured dataset generator.

A manifest holds only (path, class id, case id). Ground-truth boxes live in a
separate evaluation file and are attached to records only when that file is
read explicitly.
"""

import logging
import os
import pathlib
from dataclasses import dataclass, replace
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from planefinder.control.options import BACKGROUND_CLASS, NUM_FOREGROUND
from planefinder.localize.bbox import BoundingBox
from planefinder.localize.errors import InvalidBoxError
from planefinder.meta.utils import child_rng, fan_out, read_pgm, write_pgm

from .scene import CANVAS, DEFAULT_NOISE, MIN_BOX_AREA, render_scene, sample_scene

logger = logging.getLogger(__name__)


class SynthError(Exception):
    """Base error for synthetic data."""


class ManifestError(SynthError):
    """Raised when a manifest or box file is malformed."""


@dataclass(frozen=True)
class SampleRecord:
    """One labelled image.

    Args:
        path (pathlib.Path): Image file.
        class_id (int): 0..12 foreground, 13 background.
        case_id (str): Identifier of the case the image belongs to.
        box (Optional[BoundingBox]): Ground truth, evaluation only (Default: None).

    Raises:
        ManifestError: Raised if a background record carries a box or a box
            is smaller than the minimum area.
    """

    path: pathlib.Path
    class_id: int
    case_id: str
    box: Optional[BoundingBox] = None

    def __post_init__(self) -> None:
        if not 0 <= self.class_id <= BACKGROUND_CLASS:
            raise ManifestError(f"{self.path}: class {self.class_id} is out of range.")
        if self.box is not None:
            if self.class_id == BACKGROUND_CLASS:
                raise ManifestError(f"{self.path}: background records carry no box.")
            if self.box.area < MIN_BOX_AREA:
                raise ManifestError(
                    f"{self.path}: box {self.box.dumps()} is smaller than {MIN_BOX_AREA} px."
                )

    @property
    def is_background(self) -> bool:
        return self.class_id == BACKGROUND_CLASS

    def load(self) -> np.ndarray:
        """Image as float32 (1, H, W) in [0, 1]."""
        return read_pgm(self.path)[None]


class Manifest:
    """Ordered collection of SampleRecords.

    Args:
        records (Iterable[SampleRecord]): Records in order.
        root (Optional[pathlib.Path]): Directory image paths are relative to
            (Default: None).
    """

    def __init__(
        self, records: Iterable[SampleRecord] = (), root: Optional[pathlib.Path] = None
    ) -> None:
        self.records: List[SampleRecord] = list(records)
        self.root = None if root is None else pathlib.Path(root).resolve()

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[SampleRecord]:
        return iter(self.records)

    def __getitem__(self, index: int) -> SampleRecord:
        return self.records[index]

    @property
    def case_ids(self) -> List[str]:
        """Distinct case ids in first-appearance order."""
        return list(dict.fromkeys(r.case_id for r in self.records))

    def class_counts(self, num_classes: int = BACKGROUND_CLASS + 1) -> np.ndarray:
        """Record count of every class."""
        return np.bincount([r.class_id for r in self.records], minlength=num_classes)

    def by_class(self) -> Dict[int, List[SampleRecord]]:
        groups: Dict[int, List[SampleRecord]] = {}
        for r in self.records:
            groups.setdefault(r.class_id, []).append(r)
        return groups

    def select_cases(self, case_ids: Iterable[str]) -> "Manifest":
        wanted = set(case_ids)
        return Manifest((r for r in self.records if r.case_id in wanted), self.root)

    def foreground(self) -> "Manifest":
        return Manifest((r for r in self.records if not r.is_background), self.root)

    def image_id(self, record: SampleRecord) -> str:
        """Image path relative to the manifest root, else case id and file name."""
        if self.root is not None:
            return _relative(record.path, self.root)
        return f"{record.case_id}/{record.path.name}"

    def write(
        self,
        path: Union[str, os.PathLike],
        boxes_path: Optional[Union[str, os.PathLike]] = None,
    ) -> None:
        """Write "path<TAB>class_id<TAB>case_id" lines.

        Image paths are written relative to the manifest's directory when they
        lie below it. Boxes are written only to ``boxes_path``.
        """
        path = pathlib.Path(path)
        root = path.parent.resolve()
        lines, box_lines = [], []
        for r in self.records:
            name = _relative(r.path, root)
            lines.append(f"{name}\t{r.class_id}\t{r.case_id}\n")
            if r.box is not None:
                box_lines.append(f"{name}\t{r.box.dumps()}\n")
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("".join(lines), encoding="utf-8")
        if boxes_path is not None:
            pathlib.Path(boxes_path).write_text("".join(box_lines), encoding="utf-8")

    @classmethod
    def read(
        cls,
        path: Union[str, os.PathLike],
        boxes_path: Optional[Union[str, os.PathLike]] = None,
    ) -> "Manifest":
        """Read a manifest, attaching boxes from ``boxes_path`` if given.

        Raises:
            ManifestError: Raised on malformed lines, or a box for an image the
                manifest does not list.
        """
        path = pathlib.Path(path)
        root = path.parent
        boxes: Dict[str, BoundingBox] = {}
        if boxes_path is not None:
            for lineno, line in _lines(boxes_path):
                fields = line.split("\t")
                if len(fields) != 2:
                    raise ManifestError(f"{boxes_path}:{lineno}: expected path<TAB>x0,y0,x1,y1.")
                try:
                    boxes[fields[0]] = BoundingBox.loads(fields[1])
                except InvalidBoxError as e:
                    raise ManifestError(f"{boxes_path}:{lineno}: {e}")

        records = []
        for lineno, line in _lines(path):
            fields = line.split("\t")
            if len(fields) != 3:
                raise ManifestError(f"{path}:{lineno}: expected path<TAB>class_id<TAB>case_id.")
            name, class_text, case_id = fields
            try:
                class_id = int(class_text)
            except ValueError:
                raise ManifestError(f"{path}:{lineno}: class id {class_text!r} is not an integer.")
            records.append(SampleRecord(root / name, class_id, case_id, boxes.pop(name, None)))
        if boxes:
            raise ManifestError(
                f"{boxes_path} has boxes for images not in {path}: {sorted(boxes)[:3]}."
            )
        return cls(records, root)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(records={len(self)}, cases={len(self.case_ids)})"


def _relative(path: pathlib.Path, root: pathlib.Path) -> str:
    try:
        return pathlib.Path(path).resolve().relative_to(root).as_posix()
    except ValueError:
        return pathlib.Path(path).as_posix()


def _lines(path: Union[str, os.PathLike]) -> Iterator[Tuple[int, str]]:
    try:
        text = pathlib.Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ManifestError(f"{path} is not UTF-8 text: {e.reason} at byte {e.start}.")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            yield lineno, line


def split_cases(
    case_ids: Sequence[str], fraction: float, rng: np.random.Generator
) -> Tuple[List[str], List[str]]:
    """Partition case ids into kept and held-out lists.

    At least one case is held out and at least one kept when there are two or
    more cases.
    """
    cases = sorted(case_ids)
    held = int(round(len(cases) * fraction))
    if len(cases) > 1:
        held = min(max(held, 1), len(cases) - 1)
    order = rng.permutation(len(cases))
    held_out = {cases[i] for i in order[:held]}
    return [c for c in cases if c not in held_out], sorted(held_out)


def split_by_case(
    manifest: Manifest, fraction: float, rng: np.random.Generator
) -> Tuple[Manifest, Manifest]:
    """Split whole cases of a manifest into two manifests.

    Args:
        manifest (Manifest): Records to split.
        fraction (float): Share of cases in the second part.
        rng (np.random.Generator): Case permutation source.

    Returns:
        (Tuple[Manifest, Manifest]): The remaining cases and the held-out cases.
    """
    kept, held_out = split_cases(manifest.case_ids, fraction, rng)
    return manifest.select_cases(kept), manifest.select_cases(held_out)


def _case_plan(
    n_cases: int, per_class_counts: Sequence[int], rng: np.random.Generator
) -> List[List[int]]:
    """Foreground classes of every case, one entry per image."""
    plan: List[List[int]] = [[] for _ in range(n_cases)]
    # deal images round-robin so case sizes differ by at most one
    slot = int(rng.integers(n_cases))
    for class_id, count in enumerate(per_class_counts):
        for _ in range(count):
            plan[slot % n_cases].append(class_id)
            slot += 1
    return plan


def _render_case(
    job: Tuple[int, int, Tuple[int, ...], int, str, Tuple[int, int], float]
) -> List[SampleRecord]:
    seed, index, classes, n_background, out_dir, canvas, noise = job
    case_id = f"case{index:04d}"
    rng = child_rng(seed, "case", index)
    folder = pathlib.Path(out_dir) / "images" / case_id
    records = []
    labels = list(classes) + [BACKGROUND_CLASS] * n_background
    for n, class_id in enumerate(labels):
        params = sample_scene(class_id, rng, canvas, noise)
        image, box = render_scene(params)
        path = folder / f"{n:04d}_c{class_id:02d}.pgm"
        write_pgm(path, image[0])
        records.append(SampleRecord(path, class_id, case_id, box))
    return records


def gen_dataset(
    n_cases: int,
    per_class_counts: Union[int, Sequence[int]],
    background_ratio: float,
    seed: int,
    out_dir: Union[str, os.PathLike],
    canvas: Tuple[int, int] = CANVAS,
    noise: float = DEFAULT_NOISE,
    test_fraction: float = 0.2,
    workers: Optional[int] = 1,
) -> Tuple[Manifest, Manifest]:
    """Generate a case-structured dataset on disk.

    Foreground images of each class are dealt over the cases; every case then
    receives ``background_ratio`` background frames per foreground image. Cases
    are split into train and test parts by case id. The directory receives
    ``train.tsv``, ``test.tsv`` and the evaluation box files
    ``train_boxes.tsv`` and ``test_boxes.tsv``.

    Args:
        n_cases (int): Number of cases.
        per_class_counts (Union[int, Sequence[int]]): Images per foreground class,
            one count for all classes or one per class.
        background_ratio (float): Background frames per foreground image.
        seed (int): Dataset seed; every case derives its own stream from it.
        out_dir (Union[str, os.PathLike]): Output directory.
        canvas (Tuple[int, int]): Frame height and width (Default: 224x288).
        noise (float): Speckle level (Default: 0.25).
        test_fraction (float): Share of cases in the test part (Default: 0.2).
        workers (Optional[int]): Rendering processes; None uses thread_count()
            (Default: 1).

    Raises:
        ValueError: Raised if a count is below 1.

    Returns:
        (Tuple[Manifest, Manifest]): Train and test manifests with boxes attached.
    """
    if isinstance(per_class_counts, int):
        per_class_counts = [per_class_counts] * NUM_FOREGROUND
    if n_cases < 1 or len(per_class_counts) != NUM_FOREGROUND or min(per_class_counts) < 1:
        raise ValueError(
            (
                f"Need n_cases >= 1 and {NUM_FOREGROUND} per-class counts >= 1, "
                f"got {n_cases} and {list(per_class_counts)}."
            )
        )
    if background_ratio < 0:
        raise ValueError(f"background_ratio must be >= 0, not {background_ratio}.")

    out_dir = pathlib.Path(out_dir)
    plan = _case_plan(n_cases, per_class_counts, child_rng(seed, "plan"))
    jobs = [
        (
            seed,
            index,
            tuple(classes),
            int(round(background_ratio * len(classes))),
            str(out_dir),
            tuple(canvas),
            noise,
        )
        for index, classes in enumerate(plan)
    ]
    records = Manifest(
        (r for case in fan_out(_render_case, jobs, workers) for r in case), out_dir
    )
    kept, held_out = split_cases(
        [f"case{i:04d}" for i in range(n_cases)], test_fraction, child_rng(seed, "split")
    )
    train, test = records.select_cases(kept), records.select_cases(held_out)

    train.write(out_dir / "train.tsv", out_dir / "train_boxes.tsv")
    test.write(out_dir / "test.tsv", out_dir / "test_boxes.tsv")
    logger.info(
        (
            f"Generated {len(records)} images in {n_cases} cases under {out_dir}: "
            f"{len(train)} train, {len(test)} test"
        )
    )
    return train, test


def strip_boxes(manifest: Manifest) -> Manifest:
    """Copy of a manifest without ground truth."""
    return Manifest((replace(r, box=None) for r in manifest), manifest.root)
