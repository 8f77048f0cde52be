from __future__ import annotations

import random

import pytest
from hypothesis import settings

from confmat.fields import GF, QQ

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

FIELDS = [QQ, GF(2), GF(3), GF(101), GF(2147483647)]


@pytest.fixture
def rng():
    return random.Random(12345)
