#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Test localisation scoring over a manifest."""

import math

import numpy as np
import pytest

from nets import padded_spec
from planefinder.evaluation import (
    BoxResult,
    EmptyManifestError,
    LocalizationReport,
    evaluate_localization,
)
from planefinder.localize import BoundingBox
from planefinder.meta.utils import write_pgm
from planefinder.net import Network
from planefinder.synth import Manifest, SampleRecord


def test_report_per_class() -> None:
    results = [
        BoxResult("a.pgm", 0, BoundingBox(0, 0, 4, 4), 0.8, True),
        BoxResult("b.pgm", 0, None, 0.0, False),
        BoxResult("c.pgm", 2, BoundingBox(0, 0, 4, 4), 0.6, True),
    ]
    report = LocalizationReport(results, 3)
    assert report.mean_iou[0] == pytest.approx(0.4)
    assert math.isnan(report.mean_iou[1])
    assert report.accuracy[2] == 1.0
    assert report.overall_accuracy == pytest.approx(2 / 3)
    assert report.dumps().splitlines()[2] == "b.pgm,0,,,,,0.000000,0"
    assert report.dumps_summary().splitlines() == [
        "class_id,mean_iou,accuracy",
        "0,0.400000,0.500000",
        "2,0.600000,1.000000",
    ]


def test_evaluate_localization(tmp_path) -> None:
    rng = np.random.default_rng(0)
    records = []
    for i, class_id in enumerate([0, 1, 2]):
        image = rng.uniform(0.0, 0.3, (16, 16))
        image[2:12, 2:12] += 0.6
        path = tmp_path / f"{i}.pgm"
        write_pgm(path, image)
        box = None if class_id == 2 else BoundingBox(2, 2, 12, 12)
        records.append(SampleRecord(path, class_id, "case0000", box))
    report = evaluate_localization(Network(padded_spec(), seed=4), Manifest(records))
    assert [r.image_id for r in report.results] == ["case0000/0.pgm", "case0000/1.pgm"]
    assert all(0.0 <= r.iou <= 1.0 for r in report.results)


def test_nothing_to_localise(tmp_path) -> None:
    path = tmp_path / "0.pgm"
    write_pgm(path, np.zeros((8, 8)))
    with pytest.raises(EmptyManifestError):
        evaluate_localization(Network(padded_spec()), Manifest([SampleRecord(path, 0, "c")]))


def test_image_ids_are_relative_to_the_manifest(tmp_path) -> None:
    records = []
    for case_id in ["case0000", "case0001"]:
        path = tmp_path / "images" / case_id / "0000_c03.pgm"
        path.parent.mkdir(parents=True)
        write_pgm(path, np.random.default_rng(len(records)).uniform(size=(16, 16)))
        records.append(SampleRecord(path, 3, case_id, BoundingBox(2, 2, 12, 12)))
    Manifest(records).write(tmp_path / "test.tsv", tmp_path / "test_boxes.tsv")
    manifest = Manifest.read(tmp_path / "test.tsv", tmp_path / "test_boxes.tsv")
    report = evaluate_localization(Network(padded_spec(num_classes=4), seed=2), manifest)
    assert [r.image_id for r in report.results] == [
        "images/case0000/0000_c03.pgm",
        "images/case0001/0000_c03.pgm",
    ]
