"""Shared boundary fixtures; every curve is rescaled to the default diameter 1/2."""
import logging

import pytest

from src.geometry.curves import build_circle, build_ellipse, build_stadium

logging.basicConfig(level=logging.INFO)


@pytest.fixture(scope="session")
def circle():
    return build_circle(1.0, 128)


@pytest.fixture(scope="session")
def ellipse():
    return build_ellipse(2.0, 1.0, 256)


@pytest.fixture(scope="session")
def small_stadium():
    return build_stadium(2.0, 192)
