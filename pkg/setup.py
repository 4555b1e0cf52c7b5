#!/usr/bin/env python

from setuptools import find_packages, setup

setup(
    name="city-polarity",
    version="0.0.1",
    author="",
    author_email="",
    install_requires=[
        "nltk",
        "numpy",
        "pandas",
        "pydantic<2",
        "pyparsing",
        "pyrootutils",
        "pyyaml",
        "simple_parsing",
        "tabulate",
        "tqdm",
    ],
    packages=find_packages(exclude=["tests", "tests.*"]),
    entry_points={"console_scripts": ["city-polarity = src.inference.cli:main"]},
)
