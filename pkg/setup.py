#!/usr/bin/env python3
# Copyright 2026 The planefinder Authors
# See LICENSE file for licensing details.

import pathlib

from setuptools import find_packages, setup

top_dir = pathlib.Path(__file__).parent
long_description = top_dir.joinpath("README.md").read_text()


setup(
    name="planefinder",
    version="0.1.0",
    description="Weakly supervised scan plane detection and localisation for ultrasound sweeps",
    long_description=long_description,
    long_description_content_type="text/markdown",
    author="The planefinder Authors",
    license="Apache-2.0",
    python_requires=">=3.8",
    packages=find_packages(
        where="src",
        include=["planefinder*"],
    ),
    package_dir={"": "src"},
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        "Pillow>=9.0",
    ],
    entry_points={
        "console_scripts": ["planefinder=planefinder.cli:main"],
    },
    keywords=[
        "ultrasound",
        "convolutional neural network",
        "weak supervision",
        "saliency",
    ],
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Image Recognition",
    ],
)
