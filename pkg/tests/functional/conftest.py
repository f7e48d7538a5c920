#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

"""Configure functional test run."""

import pathlib

import pytest

from planefinder.net import Network, builtin_spec, save_weights

FILES = pathlib.Path(__file__).parent / "files"


@pytest.fixture(scope="session")
def random_weights(tmp_path_factory) -> pathlib.Path:
    """SmallNet weights straight from initialisation."""
    path = tmp_path_factory.mktemp("weights") / "smallnet.snnw"
    save_weights(Network(builtin_spec("smallnet"), seed=1), path)
    return path


@pytest.fixture
def files() -> pathlib.Path:
    return FILES
