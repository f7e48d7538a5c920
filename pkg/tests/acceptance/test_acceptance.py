#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Desk-scale acceptance runs. Slow; enable with --run-slow."""

import pathlib
from typing import Tuple

import numpy as np
import pytest

from planefinder.control import TrainConfig
from planefinder.evaluation import bench, evaluate, evaluate_localization, evaluate_retrieval
from planefinder.net import BUILTIN_ARCHITECTURES, Network, builtin_spec, save_weights
from planefinder.synth import Manifest, gen_dataset, gen_video
from planefinder.train import train

pytestmark = pytest.mark.slow

ARCHITECTURE = "sononet8"


@pytest.fixture(scope="module")
def data(tmp_path_factory) -> pathlib.Path:
    out = tmp_path_factory.mktemp("synthetic")
    # 250 per class over 10 cases puts 25 of each in every case, 200 in the 8 training cases
    train_part, _ = gen_dataset(10, 250, 24.0, 0, out, workers=None)
    assert train_part.class_counts()[:13].tolist() == [200] * 13
    return out


@pytest.fixture(scope="module")
def trained(data) -> Network:
    config = TrainConfig.for_architecture(
        ARCHITECTURE, max_iters=3000, warmup_iters=200, eval_every=100, seed=0
    )
    net, _ = train(builtin_spec(ARCHITECTURE), Manifest.read(data / "train.tsv"), config)
    return net


@pytest.mark.parametrize("name", [n for n in BUILTIN_ARCHITECTURES if n.startswith("sononet")])
def test_full_frames_give_14_by_18_maps(name) -> None:
    net = Network(builtin_spec(name))
    result = net.forward(np.zeros((1, 1, 224, 288), dtype=np.float32), keep_trace=False)
    assert result.F.shape == (1, 14, 14, 18)


def test_frame_rates_follow_model_size() -> None:
    report = bench(["smallnet", "sononet16", "sononet32", "sononet64"], n_frames=10, warmup=2)
    detection = [row.detection_fps for row in report.rows]
    assert detection == sorted(detection, reverse=True)
    for row in report.rows:
        assert row.combined_fps < row.detection_fps


def test_weak_supervision(trained, data) -> None:
    report = evaluate(trained, Manifest.read(data / "test.tsv"))
    assert report.macro_f1 >= 0.85
    boxes = Manifest.read(data / "test.tsv", data / "test_boxes.tsv")
    assert evaluate_localization(trained, boxes).overall_accuracy >= 0.70


def test_retrieval(trained, tmp_path) -> None:
    videos = [gen_video(1000 + i, 2000, 0, tmp_path / f"video{i:04d}") for i in range(20)]
    for video in videos:
        assert np.mean(video.track == 13) >= 0.9
    report = evaluate_retrieval(trained, videos)
    assert report.pooled_accuracy >= 0.9


def _tree(root: pathlib.Path) -> dict:
    return {p.relative_to(root): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def _tiny_run(out: pathlib.Path) -> Tuple[dict, bytes]:
    train_part, _ = gen_dataset(4, 4, 1.0, 7, out / "data", canvas=(112, 144), workers=2)
    config = TrainConfig.for_architecture(
        "smallnet",
        max_iters=6,
        warmup_iters=2,
        eval_every=3,
        per_class_quota=1,
        background_quota=2,
        patch_size=64,
        min_crop=96,
        max_crop=112,
        val_fraction=0.34,
    )
    net, _ = train(builtin_spec("smallnet"), train_part, config, log_path=out / "log.csv")
    save_weights(net, out / "weights.snnw")
    trained = (out / "weights.snnw").read_bytes() + (out / "log.csv").read_bytes()
    return _tree(out / "data"), trained


def test_runs_are_byte_identical(tmp_path) -> None:
    assert _tiny_run(tmp_path / "first") == _tiny_run(tmp_path / "second")
