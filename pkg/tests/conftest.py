import random

import pytest


@pytest.fixture
def rng():
    """A fresh deterministic generator per test."""
    return random.Random(991234)
