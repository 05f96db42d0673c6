import random

import pytest

import corpus


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


@pytest.fixture
def odometer():
    return corpus.odometer()


@pytest.fixture
def lamp_a():
    return corpus.lamp_a()


@pytest.fixture
def lamp_b():
    return corpus.lamp_b()


@pytest.fixture
def identity2():
    return corpus.identity_machine(2)
