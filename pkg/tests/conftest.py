import os

import pytest

from braidhfk import constants as C


def fixture_path(name):
    return os.path.join(C.FIXTURES_DIR, name)


def corpus_path(name):
    return os.path.join(C.CORPORA_DIR, name)


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: corpus-scale checks')


@pytest.fixture
def rng():
    import numpy as np
    return np.random.default_rng(1234)
