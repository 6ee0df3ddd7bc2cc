import random

import pytest

from ls2.gen import GenConfig, Generator
from ls2.semiring import RAT


@pytest.fixture
def rat():
    return RAT.parse_scalar


def make_gen(seed: int, **cfg) -> Generator:
    return Generator(random.Random(seed), GenConfig(**cfg))
