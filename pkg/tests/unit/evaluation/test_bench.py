#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Test frame-rate benchmarks."""

from nets import padded_spec
from planefinder.evaluation import BenchReport, BenchRow, bench, bench_network
from planefinder.net import Network


def test_bench_a_network() -> None:
    row = bench_network(Network(padded_spec()), n_frames=3, warmup=1, frame_shape=(16, 16))
    assert row.architecture == "tiny-padded"
    assert row.parameters == 261
    assert row.detection_fps > 0
    assert row.localisation_fps > 0
    assert row.combined_fps > 0


def test_report_text() -> None:
    report = BenchReport([BenchRow("smallnet", 10, 100.0, 50.0, 33.333)], n_frames=5)
    lines = report.dumps().splitlines()
    assert lines[0] == "architecture,parameters,detection_fps,localisation_fps,combined_fps"
    assert lines[1] == "smallnet,10,100.00,50.00,33.33"
    assert "batch size 1" in report.summary()


def test_bench_builtins_on_small_frames() -> None:
    report = bench(["smallnet"], n_frames=1, warmup=0, frame_shape=(32, 32))
    assert [r.architecture for r in report.rows] == ["smallnet"]
    assert report.batch_size == 1
