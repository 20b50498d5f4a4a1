import numpy as np
import pytest

from seisrumble.features import FeatureKind
from seisrumble.classifiers import Dataset


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def xor_dataset(copies: int = 1) -> Dataset:
    X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]] * copies)
    y = [-1, -1, 1, 1] * copies
    return Dataset.from_arrays(X, y, FeatureKind.HJORTH)


def blobs(rng, n_per_class=30, d=4, gap=3.0) -> Dataset:
    X = np.vstack([rng.normal(0.0, 1.0, (n_per_class, d)),
                   rng.normal(gap, 1.0, (n_per_class, d))])
    y = [-1] * n_per_class + [1] * n_per_class
    return Dataset.from_arrays(X, y)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
