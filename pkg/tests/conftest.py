import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from inscriber.builder import init_root
from inscriber.complex import build_triangulation, stellar_subdivide
from inscriber.kernel import centroid
from inscriber.sampling import instance_generator

F = Fraction


@pytest.fixture
def rng():
    return instance_generator(0, 0)


@pytest.fixture
def triangle():
    return build_triangulation(2, [(0, 0), (1, 0), (0, 1)], [(0, 1, 2)])


@pytest.fixture
def subdivided_triangle(triangle):
    return stellar_subdivide(triangle, (0, 1, 2), centroid(triangle.vertices))


@pytest.fixture
def root3():
    return init_root(3)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for name in list(os.environ):
        if name.startswith("INSCRIBER_"):
            monkeypatch.delenv(name, raising=False)
